use orthinv_core::fields::select_lambda;
use orthinv_core::invariants::{act, is_invariant, relative_reynolds, reynolds, transfer};
use orthinv_core::matgroups::{orthogonal_group, special_subgroup};
use orthinv_core::polyring::{random_invertible, random_polynomial};
use orthinv_core::{MatrixGroup, OrthogonalType, PrimeField, ProductElement, ProductGroup};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn groups(p: u32) -> Vec<MatrixGroup> {
    let f = PrimeField::new(p as u64).unwrap();
    let plus = orthogonal_group(f, OrthogonalType::Plus, None).unwrap();
    let minus = orthogonal_group(f, OrthogonalType::Minus, Some(select_lambda(f))).unwrap();
    vec![special_subgroup(&plus), plus, minus]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reynolds_is_linear(p in prop::sample::select(vec![3u32, 5, 7]), seed: u64, which in 0usize..3) {
        let g = &groups(p)[which];
        let f = g.field();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_polynomial(f, 4, 5, &mut rng);
        let b = random_polynomial(f, 4, 5, &mut rng);
        let c = rng.random_range(0..p);
        let lhs = reynolds(g, &(&a + &b.scale(c))).unwrap();
        let rhs = &reynolds(g, &a).unwrap() + &reynolds(g, &b).unwrap().scale(c);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn reynolds_is_transfer_over_order(p in prop::sample::select(vec![3u32, 5, 7]), seed: u64, which in 0usize..3) {
        let g = &groups(p)[which];
        let f = g.field();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_polynomial(f, 5, 6, &mut rng);
        let order = (g.order() as u32) % p;
        prop_assert_eq!(reynolds(g, &a).unwrap().scale(order), transfer(g, &a).unwrap());
    }

    #[test]
    fn relative_reynolds_lands_in_big_invariants(p in prop::sample::select(vec![5u32, 7]), seed: u64) {
        let gs = groups(p);
        let (so, plus) = (&gs[0], &gs[1]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h_inv = reynolds(so, &random_polynomial(so.field(), 4, 6, &mut rng)).unwrap();
        let r = relative_reynolds(plus, so, &h_inv).unwrap();
        prop_assert!(is_invariant(plus, &r).unwrap());
        prop_assert_eq!(&r, &reynolds(plus, &h_inv).unwrap());
    }

    #[test]
    fn substitution_composes(p in prop::sample::select(vec![3u32, 5, 7]), seed: u64) {
        let f = PrimeField::new(p as u64).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_invertible(f, &mut rng);
        let b = random_invertible(f, &mut rng);
        let poly = random_polynomial(f, 4, 5, &mut rng);
        prop_assert_eq!(
            act(&a.mul(&b), &poly).unwrap(),
            act(&a, &act(&b, &poly).unwrap()).unwrap()
        );
    }

    #[test]
    fn product_action_composes(p in prop::sample::select(vec![3u32, 5]), seed: u64) {
        let g = groups(p).swap_remove(2);
        let product = ProductGroup::square(&g);
        let elements: Vec<ProductElement> = product.elements().collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e1 = elements[rng.random_range(0..elements.len())];
        let e2 = elements[rng.random_range(0..elements.len())];
        let poly = random_polynomial(g.field(), 4, 5, &mut rng);
        prop_assert_eq!(
            act(&e1.mul(&e2), &poly).unwrap(),
            act(&e1, &act(&e2, &poly).unwrap()).unwrap()
        );
        let t = transfer(&product, &poly).unwrap();
        prop_assert_eq!(act(&e1, &t).unwrap(), t);
    }
}
