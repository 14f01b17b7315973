mod support;

use proptest::prelude::*;
use relk_core::algmodel::UnitizedElement;
use relk_core::engine::{rotating_loop_triple, shift_generator};
use relk_core::maps::nu0;
use relk_core::matcore::Tolerance;
use relk_core::triples::{
    add_k0, constant_certificate, negate_k0, normalize_k0, rotation_2x2, self_adjoint_unitary_path, swap_certificate,
    verify_elementary, verify_iso, whitehead_k1, CertificateReport, HomotopyCertificate, IsoCertificateK0, Triple,
};
use support::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn normalization_keeps_the_class(seed in any::<u64>()) {
        let tol = Tolerance::default();
        let mut r = rng(seed);
        let h = random_fd_hom(&mut r, 3, 3);
        let (sigma, x) = random_k0_triple(&mut r, &h, tol);
        let raw = similarity_twist(&mut r, &sigma);
        prop_assert!(raw.validate(tol).is_ok());
        let (t, _) = normalize_k0(&raw, tol).unwrap();
        prop_assert!(t.validate(tol).is_ok());
        prop_assert_eq!(nu0(&t), nu0(&sigma));
        prop_assert_eq!(nu0(&t), x);
    }

    #[test]
    fn addition_commutes_up_to_the_swap(seed in any::<u64>()) {
        let tol = Tolerance::default();
        let mut r = rng(seed);
        let h = random_fd_hom(&mut r, 3, 3);
        let (s, _) = random_k0_triple(&mut r, &h, tol);
        let (t, _) = random_k0_triple(&mut r, &h, tol);
        let st = add_k0(&s, &t).unwrap();
        let ts = add_k0(&t, &s).unwrap();
        let report = verify_iso(&st, &ts, &swap_certificate(&s, &t).unwrap(), tol).unwrap();
        prop_assert!(report.is_ok(), "{:?}", report);
    }

    #[test]
    fn double_negation_is_the_identity(seed in any::<u64>()) {
        let tol = Tolerance::default();
        let mut r = rng(seed);
        let h = random_fd_hom(&mut r, 3, 3);
        let (s, _) = random_k0_triple(&mut r, &h, tol);
        let back = negate_k0(&negate_k0(&s));
        let cert = IsoCertificateK0 { c: s.p.clone(), d: s.q.clone() };
        prop_assert!(verify_iso(&s, &back, &cert, tol).unwrap().is_ok());
    }
}

/// Runs a certificate family at grids 65, 257 and 1025: every level must
/// verify, and the largest step must shrink with the mesh.
fn check_refinement(make: impl Fn(usize) -> (Triple, HomotopyCertificate)) {
    let tol = Tolerance::default();
    let grids = [65usize, 257, 1025];
    let reports: Vec<CertificateReport> = grids
        .iter()
        .map(|&g| {
            let (t, c) = make(g);
            verify_elementary(&t, &c, tol).unwrap()
        })
        .collect();
    for (g, rep) in grids.iter().zip(&reports) {
        assert!(rep.is_ok(), "grid {g}: {:?}", rep.violations);
        assert!(rep.max_defect <= tol.eps, "grid {g}: defect {}", rep.max_defect);
    }
    for k in 1..grids.len() {
        let ratio = (grids[k - 1] - 1) as f64 / (grids[k] - 1) as f64;
        assert!(
            reports[k].max_step <= reports[k - 1].max_step * ratio * 1.01,
            "step {} at grid {} after {} at grid {}",
            reports[k].max_step,
            grids[k],
            reports[k - 1].max_step,
            grids[k - 1]
        );
    }
}

#[test]
fn rotation_certificate_refines() {
    let tol = Tolerance::default();
    check_refinement(|g| {
        let (t, c) = rotation_2x2(&shift_generator(), g, tol).unwrap();
        (Triple::K0(t), c)
    });
}

#[test]
fn self_adjoint_path_refines() {
    let tol = Tolerance::default();
    let sigma = shift_generator();
    // [[1 - v*v, v*], [v, 1 - vv*]] is a self-adjoint unitary.
    let v = &sigma.v;
    let one = UnitizedElement::identity(&sigma.hom.target, v.level);
    let u = UnitizedElement::from_grid(&[
        vec![one.sub(&v.adjoint().mul(v).unwrap()).unwrap(), v.adjoint()],
        vec![v.clone(), one.sub(&v.mul(&v.adjoint()).unwrap()).unwrap()],
    ])
    .unwrap();
    check_refinement(|g| {
        let (t, c) = self_adjoint_unitary_path(&u, &sigma.hom, g, tol).unwrap();
        (Triple::K0(t), c)
    });
}

#[test]
fn whitehead_certificate_refines() {
    let tol = Tolerance::default();
    check_refinement(|g| {
        let sigma = rotating_loop_triple(g, tol).unwrap();
        let (t, c) = whitehead_k1(&sigma, g, tol).unwrap();
        (Triple::K1(t), c)
    });
}

#[test]
fn constant_certificate_holds_at_every_grid() {
    let tol = Tolerance::default();
    let sigma = shift_generator();
    let p = sigma.p.clone();
    let fp = sigma.hom.apply(&p).unwrap();
    let trivial = relk_core::triples::K0Triple::new(p.clone(), p, fp, &sigma.hom).unwrap();
    for g in [65, 257, 1025] {
        let c = constant_certificate(&trivial, g).unwrap();
        let rep = verify_elementary(&Triple::K0(trivial.clone()), &c, tol).unwrap();
        assert!(rep.is_ok() && rep.max_step == 0.0);
    }
}
