mod support;

use proptest::prelude::*;
use rand::Rng;
use relk_core::algmodel::{FDAlgebra, Homomorphism, UnitizedElement};
use support::*;

fn random_element(r: &mut impl Rng, alg: &FDAlgebra, n: usize) -> UnitizedElement {
    let scalar = random_matrix(r, n);
    let blocks = alg.block_sizes.iter().map(|&nj| random_matrix(r, n * nj)).collect();
    UnitizedElement::from_full(alg, scalar, blocks).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn apply_is_a_star_homomorphism(seed in any::<u64>()) {
        let mut r = rng(seed);
        let h = random_fd_hom(&mut r, 4, 4);
        let n = r.gen_range(1..=2);
        let x = random_element(&mut r, &h.source, n);
        let y = random_element(&mut r, &h.source, n);
        let fxy = h.apply(&x.mul(&y).unwrap()).unwrap();
        let fx_fy = h.apply(&x).unwrap().mul(&h.apply(&y).unwrap()).unwrap();
        prop_assert!(fxy.dist(&fx_fy) <= 1e-8);
        prop_assert!(h.apply(&x.adjoint()).unwrap().dist(&h.apply(&x).unwrap().adjoint()) <= 1e-8);
    }

    #[test]
    fn multiplicities_compose(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_algebra(&mut r, 1..=3, 2, "A");
        let b = random_algebra(&mut r, 1..=3, 4, "B");
        let c = random_algebra(&mut r, 1..=3, 8, "C");
        let phi = random_hom(&mut r, &a, &b, true);
        let psi = random_hom(&mut r, &b, &c, true);
        let composed = Homomorphism::composed_multiplicity(&phi, &psi).unwrap();
        prop_assert_eq!(composed, psi.multiplicity_matrix().mul(&phi.multiplicity_matrix()).unwrap());
    }

    #[test]
    fn ladder_squares_commute(seed in any::<u64>()) {
        let mut r = rng(seed);
        let l = random_ladder(&mut r, 4, 4);
        prop_assert!(l.commutativity_defect().unwrap() <= 1e-9);
    }
}
