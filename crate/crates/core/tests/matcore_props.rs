mod support;

use proptest::prelude::*;
use rand::Rng;
use relk_core::matcore::{
    corner_conditioning, herm_eig, herm_exp_2pi, polar_partial_isometry, projection_defect, rho_projection, CMatrix,
    Tolerance, C64, ONE,
};
use support::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rho_of_similar_idempotents(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=6);
        let k = r.gen_range(0..=n);
        let s = &random_matrix(&mut r, n) + &CMatrix::identity(n).scale_re(2.0);
        let s_inv = s.inverse().expect("diagonally dominant");
        let e = &(&s * &CMatrix::unit_corner(k, n)) * &s_inv;
        let p = rho_projection(&e, Tolerance::default()).unwrap();
        prop_assert!(projection_defect(&p) <= 1e-7);
        prop_assert!((&e * &p).dist(&p) <= 1e-7);
        prop_assert!((&p * &e).dist(&e) <= 1e-7);
    }

    #[test]
    fn polar_part_maps_source_onto_range(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=6);
        let k = r.gen_range(1..=n);
        let src = random_projection(&mut r, n, k);
        let dst = random_projection(&mut r, n, k);
        let b = &(&dst * &random_matrix(&mut r, n)) * &src;
        prop_assume!(corner_conditioning(&b, &src, &dst).unwrap() > 1e-3);
        let v = polar_partial_isometry(&b, &src, &dst, Tolerance::default()).unwrap();
        prop_assert!((&v.adjoint() * &v).dist(&src) <= 1e-7);
        prop_assert!((&v * &v.adjoint()).dist(&dst) <= 1e-7);
    }

    #[test]
    fn exponential_of_projection_has_closed_form(seed in any::<u64>(), t in 0.0f64..=1.0) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=6);
        let k = r.gen_range(0..=n);
        let p = random_projection(&mut r, n, k);
        let phase = C64::from_polar(1.0, 2.0 * std::f64::consts::PI * t) - ONE;
        let expected = &CMatrix::identity(n) + &p.scale(phase);
        prop_assert!(herm_exp_2pi(&p, t).unwrap().dist(&expected) <= 1e-12);
    }

    #[test]
    fn eigendecomposition_reconstructs(seed in any::<u64>(), scale in 0.01f64..100.0) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=16);
        let m = random_hermitian(&mut r, n).scale_re(scale);
        let (vals, v) = herm_eig(&m, Tolerance::default()).unwrap();
        prop_assert!(vals.windows(2).all(|w| w[0] >= w[1]));
        let d = CMatrix::from_real_diag(&vals);
        let back = &(&v * &d) * &v.adjoint();
        prop_assert!(back.dist(&m) <= 1e-8 * m.op_norm().max(1.0));
    }
}
