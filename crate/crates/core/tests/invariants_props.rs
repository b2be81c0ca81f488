use orbit_embed::random;
use orbit_embed::{gamma_big, gamma_small, restriction_identity_check, Exact, SymplecticContext, Vector};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn sp_matrix(ctx: &SymplecticContext<Exact>, rng: &mut ChaCha8Rng) -> orbit_embed::Matrix<Exact> {
    let m = random::matrix(rng, ctx.dim(), ctx.dim(), 4);
    ctx.cartan_split(&m).unwrap().0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn gamma_big_is_invariant(seed in any::<u64>(), n in 1usize..=3, k in 0usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ctx = SymplecticContext::<Exact>::new(n);
        let g = random::invertible(&mut rng, 2 * n, 3);
        let x = random::enhanced(&mut rng, 2 * n, 4);
        let y = ctx.act(&g, &x).unwrap();
        prop_assert_eq!(gamma_big(&x, k).unwrap(), gamma_big(&y, k).unwrap());
    }

    #[test]
    fn gamma_small_vanishes_in_even_degree(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ctx = SymplecticContext::<Exact>::new(n);
        let v = random::vector(&mut rng, 2 * n, 4);
        let a = sp_matrix(&ctx, &mut rng);
        for k in (0..=8).step_by(2) {
            prop_assert!(num_traits::Zero::is_zero(&gamma_small(&ctx, &v, &a, k, 0.0).unwrap()));
        }
    }

    #[test]
    fn gamma_small_is_symplectic_invariant(seed in any::<u64>(), n in 1usize..=3, k in 0usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ctx = SymplecticContext::<Exact>::new(n);
        let g = random::symplectic(&ctx, &mut rng, 3);
        let v = random::vector(&mut rng, 2 * n, 4);
        let a = sp_matrix(&ctx, &mut rng);
        let gv = Vector::new(g.matrix().mul_vec(&v.entries).unwrap());
        let ga = g.matrix().try_mul(&a).unwrap().try_mul(g.inverse()).unwrap();
        prop_assert_eq!(gamma_small(&ctx, &v, &a, k, 0.0).unwrap(), gamma_small(&ctx, &gv, &ga, k, 0.0).unwrap());
    }
}

#[test]
fn restriction_sign_is_constant() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut signs = Vec::new();
    for trial in 0..200 {
        let n = 1 + trial % 3;
        let ctx = SymplecticContext::<Exact>::new(n);
        let u = random::vector(&mut rng, 2 * n, 4);
        let a = sp_matrix(&ctx, &mut rng);
        for k in 0..=5 {
            let check = restriction_identity_check(&ctx, &u, &a, k, 0.0).unwrap();
            assert!(check.holds, "trial {trial} k {k}");
            signs.extend(check.sign);
        }
    }
    assert!(!signs.is_empty());
    assert!(signs.iter().all(|&s| s == signs[0]), "{signs:?}");
    assert_eq!(signs[0], -1);
}
