use num_complex::Complex64;
use orbit_embed::random;
use orbit_embed::{primary_sqrt, sigma_fixed_sqrt, Approx, Exact, Matrix, SymplecticContext, Tolerances};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn approx_root(h: &Matrix<Approx>) -> (Matrix<Approx>, f64) {
    let out = primary_sqrt(h, &Tolerances::default()).unwrap().into_approx();
    (out.root, out.cert.residual)
}

fn commutator_norm(a: &Matrix<Approx>, b: &Matrix<Approx>) -> f64 {
    a.try_mul(b).unwrap().dist(&b.try_mul(a).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn root_squares_back_and_commutes(seed in any::<u64>(), dim in 1usize..=8, repeated in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random::sqrt_input(&mut rng, dim, repeated);
        let (s, cert) = approx_root(&h);
        let hn = h.norm();
        prop_assert!(s.try_mul(&s).unwrap().dist(&h) <= 1e-9 * hn);
        prop_assert!(commutator_norm(&s, &h) <= 1e-9 * hn * hn);
        prop_assert!(cert <= 1e-9 * (1.0 + hn));
    }

    #[test]
    fn root_preserves_commutant(seed in any::<u64>(), dim in 1usize..=8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let repeated = rng.gen_bool(0.5);
        let h = random::sqrt_input(&mut rng, dim, repeated);
        let (s, _) = approx_root(&h);
        // B = c0 + c1 h + c2 h^2
        let c: Vec<Complex64> = (0..3).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let b = Matrix::scalar(dim, c[0])
            .try_add(&h.scale(&c[1])).unwrap()
            .try_add(&h.try_mul(&h).unwrap().scale(&c[2])).unwrap();
        prop_assert!(commutator_norm(&s, &b) <= 1e-8 * b.norm() * s.norm());
    }

    #[test]
    fn root_fixes_fixed_vectors(seed in any::<u64>(), dim in 1usize..=8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut eig = random::separated_eigenvalues(&mut rng, dim, 1e-2);
        eig[0] = Complex64::new(1.0, 0.0);
        let p = random::well_conditioned(&mut rng, dim, 1e2);
        let h = p.try_mul(&Matrix::diag(&eig)).unwrap().try_mul(&p.inverse().unwrap()).unwrap();
        let w = p.col(0);
        let (s, _) = approx_root(&h);
        let sw = s.mul_vec(&w).unwrap();
        let err: f64 = sw.iter().zip(&w).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
        let wn: f64 = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        prop_assert!(err <= 1e-8 * wn);
    }

    #[test]
    fn sigma_fixed_inputs_have_sigma_fixed_roots(seed in any::<u64>(), n in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ctx = SymplecticContext::<Exact>::new(n);
        let h = random::sigma_fixed_input(&ctx, &mut rng).unwrap();
        let out = sigma_fixed_sqrt(&ctx, &h, &Tolerances::default()).unwrap();
        let root = out.root().to_approx();
        prop_assert!(out.sigma_residual().unwrap() <= 1e-8 * root.norm());
        let hn = h.norm();
        prop_assert!(root.try_mul(&root).unwrap().dist(&h.to_approx()) <= 1e-9 * hn);
    }
}

#[test]
fn negative_and_repeated_spectra() {
    let tol = Tolerances::default();
    // -1 with a Jordan block
    let h = Matrix::<Exact>::from_i64(&[&[-1, 1], &[0, -1]]);
    let out = primary_sqrt(&h, &tol).unwrap();
    assert!(!out.switched());
    // diag(-4, -4, 9) in approx mode
    let h = Matrix::<Approx>::diag(&[(-4.0).into(), (-4.0).into(), 9.0.into()]);
    let (s, _) = approx_root(&h);
    assert!((s[(0, 0)] - Complex64::new(0.0, 2.0)).norm() < 1e-12);
    assert!((s[(2, 2)] - Complex64::new(3.0, 0.0)).norm() < 1e-12);
}
