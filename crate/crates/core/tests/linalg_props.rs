use num_complex::Complex64;
use orbit_embed::linalg::{eigen_spectrum, solve_linear, SolutionSpace};
use orbit_embed::random;
use orbit_embed::{Exact, Matrix, Vector};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn exact_solutions_reproduce_rhs(seed in any::<u64>(), rows in 1usize..=12, cols in 1usize..=12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // consistent by construction half of the time
        let a = random::matrix(&mut rng, rows, cols, 4);
        let b = if rng.gen_bool(0.5) {
            Vector::new(a.mul_vec(&random::vector(&mut rng, cols, 4).entries).unwrap())
        } else {
            random::vector(&mut rng, rows, 4)
        };
        match solve_linear(&a, &b, 0.0).unwrap() {
            SolutionSpace::Affine { particular, kernel } => {
                prop_assert_eq!(Vector::new(a.mul_vec(&particular.entries).unwrap()), b);
                for k in &kernel {
                    prop_assert!(Vector::new(a.mul_vec(&k.entries).unwrap()).is_zero());
                }
                prop_assert_eq!(kernel.len() + orbit_embed::linalg::rank(&a, 0.0), cols);
            }
            SolutionSpace::Infeasible { .. } => {
                let augmented = Matrix::from_fn(rows, cols + 1, |i, j| if j < cols { a[(i, j)].clone() } else { b.entries[i].clone() });
                prop_assert!(orbit_embed::linalg::rank(&augmented, 0.0) > orbit_embed::linalg::rank(&a, 0.0));
            }
        }
    }

    #[test]
    fn planted_spectra_are_recovered(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let planted = random::separated_eigenvalues(&mut rng, 6, 1e-2);
        let m = random::planted_spectrum(&mut rng, &planted);
        let clusters = eigen_spectrum(&m, 1e-7).unwrap();
        prop_assert_eq!(clusters.iter().map(|c| c.multiplicity).sum::<usize>(), 6);
        for z in &planted {
            let best = clusters.iter().map(|c| (c.value - z).norm() / z.norm()).fold(f64::INFINITY, f64::min);
            prop_assert!(best <= 1e-7, "eigenvalue {} missed by {:e}", z, best);
        }
    }
}

#[test]
fn kernel_is_in_echelon_form() {
    let a = Matrix::<Exact>::from_i64(&[&[1, 1], &[2, 2]]);
    let SolutionSpace::Affine { particular, kernel } = solve_linear(&a, &Vector::from_i64(&[1, 2]), 0.0).unwrap()
    else {
        panic!("feasible system");
    };
    assert_eq!(particular, Vector::from_i64(&[1, 0]));
    assert_eq!(kernel, vec![Vector::from_i64(&[1, -1])]);
    let c = Matrix::<Complex64>::from_i64(&[&[1, 1], &[2, 2]]);
    assert!(!solve_linear(
        &c,
        &Vector::from_i64(&[1, 3]).map(|z: &Exact| orbit_embed::Scalar::to_c64(z)),
        1e-9
    )
    .unwrap()
    .is_feasible());
}
