use orbit_embed::random;
use orbit_embed::{Exact, Scalar, SymplecticContext};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn sigma_is_an_involutive_anti_automorphism(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ctx = SymplecticContext::<Exact>::new(n);
        let a = random::matrix(&mut rng, 2 * n, 2 * n, 5);
        let b = random::matrix(&mut rng, 2 * n, 2 * n, 5);
        prop_assert_eq!(ctx.sigma_end(&ctx.sigma_end(&a).unwrap()).unwrap(), a.clone());
        let lhs = ctx.sigma_end(&a.try_mul(&b).unwrap()).unwrap();
        let rhs = ctx.sigma_end(&b).unwrap().try_mul(&ctx.sigma_end(&a).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        // agrees with J^{-1} A^T J
        let dense = ctx.j_inv().try_mul(&a.transpose()).unwrap().try_mul(ctx.j()).unwrap();
        prop_assert_eq!(ctx.sigma_end(&a).unwrap(), dense);
    }

    #[test]
    fn membership_matches_sigma(seed in any::<u64>(), n in 1usize..=3, k in 1usize..=10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ctx = SymplecticContext::<Exact>::new(n);
        let s = random::symplectic(&ctx, &mut rng, k);
        prop_assert!(ctx.is_symplectic(s.matrix(), 0.0).unwrap());
        prop_assert!(ctx.sigma_end(s.matrix()).unwrap().try_mul(s.matrix()).unwrap() == orbit_embed::Matrix::identity(2 * n));
        let g = random::non_symplectic(&ctx, &mut rng);
        prop_assert!(!ctx.is_symplectic(g.matrix(), 0.0).unwrap());
        prop_assert!(ctx.sigma_end(g.matrix()).unwrap().try_mul(g.matrix()).unwrap() != orbit_embed::Matrix::identity(2 * n));
    }

    #[test]
    fn cartan_parts(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ctx = SymplecticContext::<Exact>::new(n);
        let a = random::matrix(&mut rng, 2 * n, 2 * n, 5);
        let (k, p) = ctx.cartan_split(&a).unwrap();
        prop_assert_eq!(ctx.sigma_end(&k).unwrap(), k.scale(&Exact::from_i64(-1)));
        prop_assert_eq!(ctx.sigma_end(&p).unwrap(), p.clone());
        prop_assert_eq!(k.try_add(&p).unwrap(), a);
    }
}
