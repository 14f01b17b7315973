mod support;

use proptest::prelude::*;
use rand::Rng;
use relk_core::algmodel::UnitizedElement;
use relk_core::engine::cokernel_generator_triple;
use relk_core::intk::induced_k0;
use relk_core::maps::{bott, cone_delta1, mu0, nu0, p_v_path, theta};
use relk_core::matcore::Tolerance;
use relk_core::triples::{normalize_k0, normalize_k1};
use support::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn nu0_kills_mu0(seed in any::<u64>()) {
        let tol = Tolerance::default();
        let mut r = rng(seed);
        let h = random_fd_hom(&mut r, 4, 4);
        let n = r.gen_range(1..=2);
        let u = random_unitary_element(&mut r, &h.target, n);
        let t = mu0(&u, &h, tol).unwrap();
        prop_assert!(t.validate(tol).is_ok());
        prop_assert!(nu0(&t).iter().all(|&x| x == 0));
    }

    #[test]
    fn nu0_lands_in_the_kernel(seed in any::<u64>()) {
        let tol = Tolerance::default();
        let mut r = rng(seed);
        let h = random_fd_hom(&mut r, 3, 3);
        let (sigma, _) = random_k0_triple(&mut r, &h, tol);
        let (t, _) = normalize_k0(&similarity_twist(&mut r, &sigma), tol).unwrap();
        for x in [nu0(&sigma), nu0(&t)] {
            prop_assert!(induced_k0(&h).apply(&x).unwrap().iter().all(|&y| y == 0));
        }
    }

    #[test]
    fn p_v_runs_between_the_prescribed_projections(seed in any::<u64>()) {
        let tol = Tolerance::default();
        let mut r = rng(seed);
        let h = random_fd_hom(&mut r, 3, 3);
        let (sigma, _) = random_k0_triple(&mut r, &h, tol);
        let (t, _) = normalize_k0(&similarity_twist(&mut r, &sigma), tol).unwrap();
        let pv = p_v_path(&t, 129, tol).unwrap();
        let (d0, d1) = pv.endpoint_defects(&t).unwrap();
        prop_assert!(d0 <= 1e-7 && d1 <= 1e-7);
        prop_assert!(pv.max_projection_defect() <= 1e-7);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn bott_loops_are_based(seed in any::<u64>()) {
        let tol = Tolerance::default();
        let mut r = rng(seed);
        let h = random_fd_hom(&mut r, 2, 2);
        let (sigma, _) = random_k0_triple(&mut r, &h, tol);
        let (t, _) = normalize_k0(&sigma.to_raw(), tol).unwrap();
        let b = bott(&t, 129, tol).unwrap();
        prop_assert!(b.loop_defect() <= 1e-10);
        prop_assert!(b.validate(COMPOSITE).is_ok(), "{:?}", b.validate(COMPOSITE));
    }
}

const COMPOSITE: Tolerance = Tolerance { eps: relk_core::matcore::COMPOSITE_EPS };

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn theta_and_delta1_on_cokernel_loops(seed in any::<u64>()) {
        let tol = Tolerance::default();
        let mut r = rng(seed);
        let h = random_fd_hom(&mut r, 3, 3);
        let y: Vec<i64> = (0..h.target.block_count()).map(|_| r.gen_range(-1..=1)).collect();
        let sigma = cokernel_generator_triple(&h, &y, 257, tol).unwrap();
        let s = normalize_k1(&sigma.to_raw(), tol).unwrap();
        let th = theta(&s, tol).unwrap();
        prop_assert!(th.p.max_defect(UnitizedElement::projection_defect) <= 1e-7);
        prop_assert!(th.validate(COMPOSITE).is_ok(), "{:?}", th.validate(COMPOSITE));
        let cone = cone_delta1(&s, tol).unwrap();
        prop_assert!(cone.f.max_defect(UnitizedElement::unitary_defect) <= 1e-7);
    }
}
