//! The bundled problem files, generated from the worked examples of the
//! engine. `relk fixtures --export DIR` writes them; the copies shipped in
//! `fixtures/` must match byte for byte.

use std::collections::BTreeMap;

use relk_core::algmodel::{DEFAULT_GRID, FDAlgebra, Homomorphism, Ladder, SampledElement, UnitizedElement};
use relk_core::engine::{diagonal_embedding, diagonal_inclusion, relative_groups_fd, rotating_loop_triple, shift_generator, KData};
use relk_core::matcore::Tolerance;
use relk_core::triples::{K0Triple, K1Triple};

use crate::problem::{
    element_to_spec, hom_to_spec, kdata_to_spec, sampled_to_spec, AlgebraSpec, CertificateSpec, HomSpec, LadderSpec,
    ProblemFile, TripleSpec,
};

pub const BUNDLED: &[(&str, &str)] = &[
    ("ex2_5", include_str!("../fixtures/ex2_5.json")),
    ("ex2_6", include_str!("../fixtures/ex2_6.json")),
    ("ex2_7", include_str!("../fixtures/ex2_7.json")),
    ("ex2_8", include_str!("../fixtures/ex2_8.json")),
    ("ex2_9", include_str!("../fixtures/ex2_9.json")),
    ("ladders", include_str!("../fixtures/ladders.json")),
];

fn algebras(list: &[&FDAlgebra]) -> BTreeMap<String, AlgebraSpec> {
    list.iter().map(|a| (a.label.clone(), AlgebraSpec { blocks: a.block_sizes.clone() })).collect()
}

fn fd(h: &Homomorphism) -> HomSpec {
    hom_to_spec(h, &h.source.label, &h.target.label).expect("standard placements")
}

fn k0_spec(hom: &str, t: &K0Triple) -> TripleSpec {
    TripleSpec::K0 { hom: hom.into(), p: element_to_spec(&t.p), q: element_to_spec(&t.q), v: element_to_spec(&t.v) }
}

fn k1_spec(hom: &str, t: &K1Triple) -> TripleSpec {
    TripleSpec::K1 { hom: hom.into(), p: element_to_spec(&t.p), u: element_to_spec(&t.u), g: sampled_to_spec(&t.g) }
}

fn kdata_hom(a: &KData, b: &KData, phi0: Vec<Vec<i64>>, phi1: Vec<Vec<i64>>) -> HomSpec {
    HomSpec::Kdata { a: kdata_to_spec(a), b: kdata_to_spec(b), phi0, phi1 }
}

fn ex2_5() -> ProblemFile {
    let cm2 = FDAlgebra::new(vec![1, 2], "CM2").expect("algebra");
    let c = FDAlgebra::new(vec![1], "C").expect("algebra");
    let m2 = FDAlgebra::new(vec![2], "M2").expect("algebra");
    let quotient = Homomorphism::from_multiplicities(&cm2, &c, &[vec![1, 0]], "iii").expect("hom");
    let inclusion = Homomorphism::from_multiplicities(&m2, &cm2, &[vec![0], vec![1]], "iv").expect("hom");
    let circle = KData::circle("C(S^1)");
    let mut homs = BTreeMap::new();
    homs.insert("i".into(), kdata_hom(&circle, &KData::zero("B(H)"), vec![], vec![]));
    homs.insert("ii".into(), kdata_hom(&KData::zero("C_0(0,1]"), &circle, vec![vec![]], vec![vec![]]));
    homs.insert("iii".into(), fd(&quotient));
    homs.insert("iv".into(), fd(&inclusion));
    homs.insert("circle_identity".into(), kdata_hom(&circle, &circle, vec![vec![1]], vec![vec![1]]));
    ProblemFile {
        description: Some(
            "Relative groups when one side has vanishing K-theory (i, ii, from K-data), for a quotient map (iii) \
             and for an ideal inclusion (iv); circle_identity is outside the computable regime"
                .into(),
        ),
        algebras: algebras(&[&cm2, &c, &m2]),
        homomorphisms: homs,
        ..Default::default()
    }
}

/// The shift generator with v rescaled so that `v*v − φ(p)` has norm 0.41.
fn corrupted_shift() -> K0Triple {
    let mut t = shift_generator();
    t.v = t.v.scale(relk_core::matcore::C64::new(1.41f64.sqrt(), 0.0));
    t
}

fn ex2_6() -> ProblemFile {
    let h = diagonal_inclusion();
    let mut homs = BTreeMap::new();
    homs.insert("diag".into(), fd(&h));
    let mut id = Homomorphism::identity(&h.source);
    id.label = "id".into();
    homs.insert("id".into(), fd(&id));
    let mut triples = BTreeMap::new();
    triples.insert("generator".into(), k0_spec("diag", &shift_generator()));
    triples.insert("corrupted".into(), k0_spec("diag", &corrupted_shift()));
    let mut certificates = BTreeMap::new();
    certificates.insert("rotation".into(), CertificateSpec::Rotation {});
    ProblemFile {
        description: Some("Diagonal matrices in M2: K0 = Z generated by (v*v, vv*, v) with v = e12, K1 = 0".into()),
        algebras: algebras(&[&h.source, &h.target]),
        homomorphisms: homs,
        triples,
        certificates,
        ..Default::default()
    }
}

fn ex2_7() -> ProblemFile {
    let h = diagonal_embedding();
    let mut homs = BTreeMap::new();
    homs.insert("embed".into(), fd(&h));
    let mut triples = BTreeMap::new();
    let t = rotating_loop_triple(DEFAULT_GRID, Tolerance::default()).expect("loop triple");
    triples.insert("loop".into(), k1_spec("embed", &t));
    let mut certificates = BTreeMap::new();
    certificates.insert("whitehead".into(), CertificateSpec::Whitehead {});
    ProblemFile {
        description: Some("C embedded diagonally in C + C: K0 = 0, K1 = Z generated by (p, p, g)".into()),
        algebras: algebras(&[&h.source, &h.target]),
        homomorphisms: homs,
        triples,
        certificates,
        ..Default::default()
    }
}

fn ex2_8() -> ProblemFile {
    let mut ladders = BTreeMap::new();
    ladders.insert("disk".into(), LadderSpec::DiskBoundary {});
    let mut triples = BTreeMap::new();
    triples.insert("bott".into(), TripleSpec::Symbolic { description: "(1,z,g)".into() });
    ProblemFile {
        description: Some("Index map of C(S^1) -> C[0,1] computed over the disk".into()),
        ladders,
        triples,
        ..Default::default()
    }
}

fn ex2_9() -> ProblemFile {
    let mut gamma = diagonal_inclusion();
    gamma.label = "gamma".into();
    let mut homs = BTreeMap::new();
    homs.insert("gamma".into(), fd(&gamma));
    let mut ladders = BTreeMap::new();
    ladders.insert("endpoints".into(), LadderSpec::IntervalEndpoint { gamma: "gamma".into() });
    let mut triples = BTreeMap::new();
    triples.insert("generator".into(), k0_spec("gamma", &shift_generator()));
    ProblemFile {
        description: Some("C[0,1] -> M2 through the endpoint values: K0 = 0, K1 = Z/2, d0 = -2".into()),
        algebras: algebras(&[&gamma.source, &gamma.target]),
        homomorphisms: homs,
        ladders,
        triples,
        ..Default::default()
    }
}

fn ladders() -> ProblemFile {
    let tol = Tolerance::default();
    let a = FDAlgebra::new(vec![1, 1], "A").expect("algebra");
    let b = FDAlgebra::new(vec![1, 1], "B").expect("algebra");
    let shift = Homomorphism::from_multiplicities(&a, &b, &[vec![0, 1], vec![0, 0]], "shift").expect("hom");
    let id = Homomorphism::from_multiplicities(&a, &b, &[vec![1, 0], vec![0, 1]], "id").expect("hom");
    let mut homs = BTreeMap::new();
    homs.insert("shift".into(), fd(&shift));
    homs.insert("id".into(), fd(&id));
    let mut ladders = BTreeMap::new();
    ladders.insert("shift".into(), LadderSpec::Fd { phi: "shift".into(), ideal_a: vec![0], ideal_b: vec![0] });
    ladders.insert("trivial".into(), LadderSpec::Fd { phi: "id".into(), ideal_a: vec![0], ideal_b: vec![0] });
    let shift_ladder = Ladder::new(shift, vec![0], vec![0]).expect("ladder");
    let rg = relative_groups_fd(&shift_ladder.gamma, 65, tol).expect("groups");
    let trivial = Ladder::new(id, vec![0], vec![0]).expect("ladder");
    let p = UnitizedElement::minimal_projection(&trivial.gamma.source, 0);
    let fp = trivial.gamma.apply(&p).expect("image");
    let constant = SampledElement::from_fn(65, relk_core::algmodel::Boundary::None, |_| Ok(fp.clone()), tol).expect("path");
    let trivial_loop = K1Triple::new(p.clone(), p, constant, &trivial.gamma).expect("triple");
    let mut triples = BTreeMap::new();
    triples.insert("gamma_generator".into(), k0_spec("shift.gamma", &rg.k0_generators[0]));
    triples.insert("trivial_loop".into(), k1_spec("trivial.gamma", &trivial_loop));
    ProblemFile {
        description: Some(
            "Ladders of block ideals: shift has K0(gamma) = K1(psi) = Z joined by d0, trivial has every group zero".into(),
        ),
        algebras: algebras(&[&a, &b]),
        homomorphisms: homs,
        ladders,
        triples,
        ..Default::default()
    }
}

/// Every bundled problem file, by fixture name.
pub fn bundled_problems() -> Vec<(&'static str, ProblemFile)> {
    vec![
        ("ex2_5", ex2_5()),
        ("ex2_6", ex2_6()),
        ("ex2_7", ex2_7()),
        ("ex2_8", ex2_8()),
        ("ex2_9", ex2_9()),
        ("ladders", ladders()),
    ]
}
