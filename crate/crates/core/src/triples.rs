//! Relative K-cycles: raw and *-triples, their validity conditions, the
//! normalization pipelines, the group law and certificate checking.

use std::fmt;

use crate::algmodel::{Domain, FDAlgebra, Homomorphism, SampledElement, UnitizedElement};
use crate::matcore::{
    corner_conditioning, herm_eig, polar_partial_isometry, psd_corner_power, rho_projection, CMatrix, Tolerance,
    C64,
};
use crate::{Error, Result};

/// Corner singular values below this count as a loss of invertibility when
/// checking homotopy certificates.
pub const INVERTIBILITY_FLOOR: f64 = 1e-6;

/// One failed condition together with its numeric defect.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub kind: String,
    pub label: String,
    pub defect: f64,
}

impl Violation {
    pub fn new(kind: &str, label: &str, defect: f64) -> Self {
        Violation { kind: kind.into(), label: label.into(), defect }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.defect >= 0.01 || !self.defect.is_finite() {
            write!(f, "{}: {} defect {:.2}", self.kind, self.label, self.defect)
        } else {
            write!(f, "{}: {} defect {:.2e}", self.kind, self.label, self.defect)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn check(&mut self, kind: &str, label: &str, defect: f64, tol: Tolerance) {
        if !(defect <= tol.eps) {
            self.violations.push(Violation::new(kind, label, defect));
        }
    }

    pub fn merge(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
    }
}

/// `(e, f, b)` with idempotents e, f over Ã and b an invertible morphism
/// `φ(e) → φ(f)` over B̃.
#[derive(Debug, Clone, PartialEq)]
pub struct RawK0Triple {
    pub e: UnitizedElement,
    pub f: UnitizedElement,
    pub b: UnitizedElement,
    pub hom: Homomorphism,
}

/// `(p, q, v)` with projections p, q and `v*v = φ(p)`, `vv* = φ(q)`.
#[derive(Debug, Clone, PartialEq)]
pub struct K0Triple {
    pub p: UnitizedElement,
    pub q: UnitizedElement,
    pub v: UnitizedElement,
    pub hom: Homomorphism,
}

/// `(e, a, g)` with a invertible in `eM(Ã)e` and g a path of invertibles in
/// the `φ(e)` corner from `φ(e)` to `φ(a)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RawK1Triple {
    pub e: UnitizedElement,
    pub a: UnitizedElement,
    pub g: SampledElement,
    pub hom: Homomorphism,
}

/// `(p, u, g)` with u a unitary of the corner `pM(Ã)p` and g a unitary path
/// in the `φ(p)` corner from `φ(p)` to `φ(u)`.
#[derive(Debug, Clone, PartialEq)]
pub struct K1Triple {
    pub p: UnitizedElement,
    pub u: UnitizedElement,
    pub g: SampledElement,
    pub hom: Homomorphism,
}

/// Partial isometries `c: p → p'` and `d: q → q'` claimed to intertwine
/// `v` and `v'`.
#[derive(Debug, Clone, PartialEq)]
pub struct IsoCertificateK0 {
    pub c: UnitizedElement,
    pub d: UnitizedElement,
}

/// A homotopy witnessing that a triple is elementary. For K0 claims the
/// path runs from `φ(p)` to `v`; for K1 claims `a` runs from `p` to `u` and
/// `g[k]` is the s-path at the k-th node of `a`.
#[derive(Debug, Clone, PartialEq)]
pub enum HomotopyCertificate {
    K0 { path: SampledElement },
    K1 { a: SampledElement, g: Vec<SampledElement> },
}

/// Any triple accepted by [`validate`].
#[derive(Debug, Clone, PartialEq)]
pub enum Triple {
    RawK0(RawK0Triple),
    K0(K0Triple),
    RawK1(RawK1Triple),
    K1(K1Triple),
}

fn common_level(xs: &[&UnitizedElement]) -> usize {
    xs.iter().map(|x| x.level).max().unwrap_or(1)
}

fn check_source_target(hom: &Homomorphism, src: &[&UnitizedElement], dst: &[&UnitizedElement]) -> Result<()> {
    if src.iter().any(|x| !x.algebra.same_shape(&hom.source)) {
        return Err(Error::AlgebraMismatch(format!("triple entries must live over {}", hom.source.label)));
    }
    if dst.iter().any(|x| !x.algebra.same_shape(&hom.target)) {
        return Err(Error::AlgebraMismatch(format!("triple entries must live over {}", hom.target.label)));
    }
    Ok(())
}

/// Homomorphisms agree up to their labels.
pub fn same_hom(a: &Homomorphism, b: &Homomorphism) -> bool {
    a.source.same_shape(&b.source)
        && a.target.same_shape(&b.target)
        && a.placements == b.placements
        && a.unitaries.iter().zip(&b.unitaries).all(|(x, y)| x.dist(y) <= 1e-12)
}

fn check_hom(a: &Homomorphism, b: &Homomorphism) -> Result<()> {
    if same_hom(a, b) {
        Ok(())
    } else {
        Err(Error::HomMismatch(format!("{} vs {}", a.label, b.label)))
    }
}

impl RawK0Triple {
    pub fn new(e: UnitizedElement, f: UnitizedElement, b: UnitizedElement, hom: &Homomorphism) -> Result<Self> {
        check_source_target(hom, &[&e, &f], &[&b])?;
        let n = common_level(&[&e, &f, &b]);
        Ok(RawK0Triple { e: e.pad_to(n), f: f.pad_to(n), b: b.pad_to(n), hom: hom.clone() })
    }

    pub fn level(&self) -> usize {
        self.e.level
    }

    pub fn validate(&self, tol: Tolerance) -> ValidationReport {
        let mut r = ValidationReport::default();
        r.check("e not idempotent", "e^2 - e", self.e.idempotent_defect(), tol);
        r.check("f not idempotent", "f^2 - f", self.f.idempotent_defect(), tol);
        let (fe, ff) = match (self.hom.apply(&self.e), self.hom.apply(&self.f)) {
            (Ok(a), Ok(b)) => (a, b),
            _ => {
                r.violations.push(Violation::new("algebra mismatch", "phi(e), phi(f)", f64::INFINITY));
                return r;
            }
        };
        let corner = ff.mul(&self.b).and_then(|x| x.mul(&fe)).map(|x| x.dist(&self.b));
        r.check("not a morphism", "b - phi(f) b phi(e)", corner.unwrap_or(f64::INFINITY), tol);
        let cond = UnitizedElement::min_over_components(&[&self.b, &fe, &ff], |c| corner_conditioning(c[0], c[1], c[2]))
            .unwrap_or(0.0);
        if !(cond > tol.eps) {
            r.violations.push(Violation::new("not invertible", "corner inverse of b", cond));
        }
        r
    }
}

impl K0Triple {
    pub fn new(p: UnitizedElement, q: UnitizedElement, v: UnitizedElement, hom: &Homomorphism) -> Result<Self> {
        check_source_target(hom, &[&p, &q], &[&v])?;
        let n = common_level(&[&p, &q, &v]);
        Ok(K0Triple { p: p.pad_to(n), q: q.pad_to(n), v: v.pad_to(n), hom: hom.clone() })
    }

    pub fn level(&self) -> usize {
        self.p.level
    }

    pub fn validate(&self, tol: Tolerance) -> ValidationReport {
        let mut r = ValidationReport::default();
        r.check("p not a projection", "p* = p = p^2", self.p.projection_defect(), tol);
        r.check("q not a projection", "q* = q = q^2", self.q.projection_defect(), tol);
        let (fp, fq) = match (self.hom.apply(&self.p), self.hom.apply(&self.q)) {
            (Ok(a), Ok(b)) => (a, b),
            _ => {
                r.violations.push(Violation::new("algebra mismatch", "phi(p), phi(q)", f64::INFINITY));
                return r;
            }
        };
        let vs = self.v.adjoint();
        let src = vs.mul(&self.v).map(|x| x.dist(&fp)).unwrap_or(f64::INFINITY);
        let dst = self.v.mul(&vs).map(|x| x.dist(&fq)).unwrap_or(f64::INFINITY);
        r.check("source mismatch", "v*v - phi(p)", src, tol);
        r.check("range mismatch", "vv* - phi(q)", dst, tol);
        r
    }

    /// The same triple viewed in the idempotent picture.
    pub fn to_raw(&self) -> RawK0Triple {
        RawK0Triple { e: self.p.clone(), f: self.q.clone(), b: self.v.clone(), hom: self.hom.clone() }
    }
}

impl RawK1Triple {
    pub fn new(e: UnitizedElement, a: UnitizedElement, g: SampledElement, hom: &Homomorphism) -> Result<Self> {
        check_source_target(hom, &[&e, &a], &[g.first()])?;
        if g.domain != Domain::Interval {
            return Err(Error::DomainMismatch("the path of a K1 triple lives on the interval".into()));
        }
        let n = common_level(&[&e, &a, g.first()]);
        let g = if g.level() < n { g.map(|x| Ok(x.pad_to(n)))? } else { g };
        Ok(RawK1Triple { e: e.pad_to(n), a: a.pad_to(n), g, hom: hom.clone() })
    }

    pub fn validate(&self, tol: Tolerance) -> ValidationReport {
        let mut r = ValidationReport::default();
        r.check("e not idempotent", "e^2 - e", self.e.idempotent_defect(), tol);
        let fe = match self.hom.apply(&self.e) {
            Ok(x) => x,
            Err(_) => {
                r.violations.push(Violation::new("algebra mismatch", "phi(e)", f64::INFINITY));
                return r;
            }
        };
        r.merge(invertible_in_corner("a", &self.a, &self.e, tol));
        let mut worst_corner: f64 = 0.0;
        let mut worst_cond = f64::INFINITY;
        for x in &self.g.samples {
            let corner = fe.mul(x).and_then(|y| y.mul(&fe)).map(|y| y.dist(x)).unwrap_or(f64::INFINITY);
            worst_corner = worst_corner.max(corner);
            let cond = UnitizedElement::min_over_components(&[x, &fe, &fe], |c| corner_conditioning(c[0], c[1], c[2]))
                .unwrap_or(0.0);
            worst_cond = worst_cond.min(cond);
        }
        r.check("not in corner", "g(s) - phi(e) g(s) phi(e)", worst_corner, tol);
        if !(worst_cond > tol.eps) {
            r.violations.push(Violation::new("not invertible", "corner inverse of g(s)", worst_cond));
        }
        r.check("start mismatch", "g(0) - phi(e)", self.g.first().dist(&fe), tol);
        let end = self.hom.apply(&self.a).map(|x| self.g.last().dist(&x)).unwrap_or(f64::INFINITY);
        r.check("end mismatch", "g(1) - phi(a)", end, tol);
        r
    }
}

fn invertible_in_corner(name: &str, a: &UnitizedElement, e: &UnitizedElement, tol: Tolerance) -> ValidationReport {
    let mut r = ValidationReport::default();
    let corner = e.mul(a).and_then(|y| y.mul(e)).map(|y| y.dist(a)).unwrap_or(f64::INFINITY);
    r.check("not in corner", &format!("{name} - e {name} e"), corner, tol);
    let cond = UnitizedElement::min_over_components(&[a, e, e], |c| corner_conditioning(c[0], c[1], c[2])).unwrap_or(0.0);
    if !(cond > tol.eps) {
        r.violations.push(Violation::new("not invertible", &format!("corner inverse of {name}"), cond));
    }
    r
}

impl K1Triple {
    pub fn new(p: UnitizedElement, u: UnitizedElement, g: SampledElement, hom: &Homomorphism) -> Result<Self> {
        let raw = RawK1Triple::new(p, u, g, hom)?;
        Ok(K1Triple { p: raw.e, u: raw.a, g: raw.g, hom: raw.hom })
    }

    pub fn level(&self) -> usize {
        self.p.level
    }

    pub fn validate(&self, tol: Tolerance) -> ValidationReport {
        let mut r = ValidationReport::default();
        r.check("p not a projection", "p* = p = p^2", self.p.projection_defect(), tol);
        let fp = match self.hom.apply(&self.p) {
            Ok(x) => x,
            Err(_) => {
                r.violations.push(Violation::new("algebra mismatch", "phi(p)", f64::INFINITY));
                return r;
            }
        };
        let us = self.u.adjoint();
        r.check("not a corner unitary", "u*u - p", us.mul(&self.u).map(|x| x.dist(&self.p)).unwrap_or(f64::INFINITY), tol);
        r.check("not a corner unitary", "uu* - p", self.u.mul(&us).map(|x| x.dist(&self.p)).unwrap_or(f64::INFINITY), tol);
        let mut worst: f64 = 0.0;
        for x in &self.g.samples {
            let xs = x.adjoint();
            let a = xs.mul(x).map(|y| y.dist(&fp)).unwrap_or(f64::INFINITY);
            let b = x.mul(&xs).map(|y| y.dist(&fp)).unwrap_or(f64::INFINITY);
            worst = worst.max(a).max(b);
        }
        r.check("path not unitary", "g(s)*g(s) - phi(p)", worst, tol);
        r.check("start mismatch", "g(0) - phi(p)", self.g.first().dist(&fp), tol);
        let end = self.hom.apply(&self.u).map(|x| self.g.last().dist(&x)).unwrap_or(f64::INFINITY);
        r.check("end mismatch", "g(1) - phi(u)", end, tol);
        r
    }

    pub fn to_raw(&self) -> RawK1Triple {
        RawK1Triple { e: self.p.clone(), a: self.u.clone(), g: self.g.clone(), hom: self.hom.clone() }
    }
}

/// Lists every violated invariant of a triple.
pub fn validate(sigma: &Triple, tol: Tolerance) -> ValidationReport {
    match sigma {
        Triple::RawK0(t) => t.validate(tol),
        Triple::K0(t) => t.validate(tol),
        Triple::RawK1(t) => t.validate(tol),
        Triple::K1(t) => t.validate(tol),
    }
}

/// `Some(k)` when x is the scalar projection `1_k ⊕ 0`.
pub fn is_unit_corner(x: &UnitizedElement, tol: Tolerance) -> Option<usize> {
    let n = x.level;
    let k = x.scalar.trace().re.round();
    if k < 0.0 || k > n as f64 {
        return None;
    }
    let k = k as usize;
    let target = UnitizedElement::unit_corner(&x.algebra, k, n);
    (x.dist(&target) <= tol.eps).then_some(k)
}

fn is_normalized_k0(sigma: &RawK0Triple, tol: Tolerance) -> bool {
    let t = K0Triple { p: sigma.e.clone(), q: sigma.f.clone(), v: sigma.b.clone(), hom: sigma.hom.clone() };
    is_unit_corner(&sigma.f, tol).is_some()
        && sigma.e.scalar.dist(&sigma.f.scalar) <= tol.eps
        && sigma.b.scalar.dist(&sigma.f.scalar) <= tol.eps
        && t.validate(tol).is_ok()
}

/// Normalization of a raw K0 triple: the output has
/// `q = 1_n ⊕ 0_n` and scalar parts `ṗ = q̇ = v̇ = 1_n ⊕ 0_n`. Each step is
/// recorded in the log.
pub fn normalize_k0(sigma: &RawK0Triple, tol: Tolerance) -> Result<(K0Triple, Vec<String>)> {
    let mut log = Vec::new();
    if is_normalized_k0(sigma, tol) {
        log.push("already normalized".to_string());
        let t = K0Triple { p: sigma.e.clone(), q: sigma.f.clone(), v: sigma.b.clone(), hom: sigma.hom.clone() };
        return Ok((t, log));
    }
    let hom = &sigma.hom;
    let n = sigma.level();
    let p = sigma.e.try_map(|m| rho_projection(m, tol))?;
    let q = sigma.f.try_map(|m| rho_projection(m, tol))?;
    log.push("replaced e, f by the projections rho(e), rho(f)".to_string());
    let fp = hom.apply(&p)?;
    let fq = hom.apply(&q)?;
    let b1 = hom.apply(&sigma.f)?.mul(&sigma.b)?.mul(&fp)?;
    log.push("conjugated b into a morphism phi(rho(e)) -> phi(rho(f))".to_string());
    let v = UnitizedElement::zip_components(&[&b1, &fp, &fq], |c| polar_partial_isometry(c[0], c[1], c[2], tol))?;
    log.push("polar decomposition (b b*)^(-1/2) b".to_string());

    let a_alg = &hom.source;
    let b_alg = &hom.target;
    let one_a = UnitizedElement::identity(a_alg, n);
    let one_b = UnitizedElement::identity(b_alg, n);
    let zero_b = UnitizedElement::zero(b_alg, n);
    let p1 = p.direct_sum(&one_a.sub(&q)?)?;
    let q1 = UnitizedElement::unit_corner(a_alg, n, 2 * n);
    let v1 = UnitizedElement::from_grid(&[vec![v, one_b.sub(&fq)?], vec![zero_b.clone(), zero_b]])?;
    log.push(format!("added the complement 1_{n} - q to reach q = 1_{n} + 0_{n}"));

    let (vals, vecs) = herm_eig(&p1.scalar, tol)?;
    let rank = vals.iter().filter(|&&x| x > 0.5).count();
    if rank != n {
        return Err(Error::InvalidTriple(format!("scalar parts of e and f have different ranks ({rank} vs {n})")));
    }
    let w = vecs.adjoint();
    let p2 = p1.scalar_mul_left(&w)?.scalar_mul_right(&vecs)?;
    let v2 = v1.scalar_mul_right(&vecs)?;
    log.push("conjugated by a scalar unitary so that the scalar part of p is 1_n + 0_n".to_string());

    let vdot = v2.scalar.adjoint();
    let v3 = v2.scalar_mul_left(&vdot)?;
    log.push("multiplied v by the adjoint of its scalar part (scalar unitaries are connected)".to_string());
    Ok((K0Triple { p: p2, q: q1, v: v3, hom: hom.clone() }, log))
}

pub(crate) fn polar_unitary(x: &CMatrix, tol: Tolerance) -> Result<CMatrix> {
    let n = x.rows();
    let xxs = x * &x.adjoint();
    Ok(&psd_corner_power(&xxs, &CMatrix::identity(n), -0.5, tol)? * x)
}

fn is_normalized_k1(sigma: &RawK1Triple, tol: Tolerance) -> bool {
    let n = sigma.e.level;
    let one = CMatrix::identity(n);
    sigma.e.dist(&UnitizedElement::identity(&sigma.e.algebra, n)) <= tol.eps
        && sigma.a.scalar.dist(&one) <= tol.eps
        && sigma.g.samples.iter().all(|x| x.scalar.dist(&one) <= tol.eps)
        && K1Triple { p: sigma.e.clone(), u: sigma.a.clone(), g: sigma.g.clone(), hom: sigma.hom.clone() }
            .validate(tol)
            .is_ok()
}

/// Normalization of K1 data: the output has `p = 1_n`, u unitary and
/// `u̇ = ġ(s) = 1_n`.
pub fn normalize_k1(sigma: &RawK1Triple, tol: Tolerance) -> Result<K1Triple> {
    if is_normalized_k1(sigma, tol) {
        return Ok(K1Triple { p: sigma.e.clone(), u: sigma.a.clone(), g: sigma.g.clone(), hom: sigma.hom.clone() });
    }
    let hom = &sigma.hom;
    let n = sigma.e.level;
    let one_a = UnitizedElement::identity(&hom.source, n);
    let one_b = UnitizedElement::identity(&hom.target, n);
    let comp_b = one_b.sub(&hom.apply(&sigma.e)?)?;
    let u1 = sigma.a.add(&one_a.sub(&sigma.e)?)?;
    let g1 = sigma.g.map(|x| x.add(&comp_b))?;
    let u2 = u1.try_map(|m| polar_unitary(m, tol))?;
    let g2 = g1.map(|x| x.try_map(|m| polar_unitary(m, tol)))?;
    let u3 = u2.scalar_mul_left(&u2.scalar.adjoint())?;
    let g3 = g2.map(|x| x.scalar_mul_left(&x.scalar.adjoint()))?;
    Ok(K1Triple { p: one_a, u: u3, g: g3, hom: hom.clone() })
}

/// Direct sum of K0 triples.
pub fn add_k0(s: &K0Triple, t: &K0Triple) -> Result<K0Triple> {
    check_hom(&s.hom, &t.hom)?;
    Ok(K0Triple { p: s.p.direct_sum(&t.p)?, q: s.q.direct_sum(&t.q)?, v: s.v.direct_sum(&t.v)?, hom: s.hom.clone() })
}

/// `(q, p, v*)`.
pub fn negate_k0(s: &K0Triple) -> K0Triple {
    K0Triple { p: s.q.clone(), q: s.p.clone(), v: s.v.adjoint(), hom: s.hom.clone() }
}

/// `(p, q', v'v)` for triples with `q = p'`.
pub fn compose_k0(s: &K0Triple, t: &K0Triple, tol: Tolerance) -> Result<K0Triple> {
    check_hom(&s.hom, &t.hom)?;
    let n = s.level().max(t.level());
    let (sp, sq, sv) = (s.p.pad_to(n), s.q.pad_to(n), s.v.pad_to(n));
    let (tp, tq, tv) = (t.p.pad_to(n), t.q.pad_to(n), t.v.pad_to(n));
    let d = sq.dist(&tp);
    if d > tol.eps {
        return Err(Error::HypothesisViolated(format!("composition needs q = p' (defect {d:.3e})")));
    }
    Ok(K0Triple { p: sp, q: tq, v: tv.mul(&sv)?, hom: s.hom.clone() })
}

pub fn add_k1(s: &K1Triple, t: &K1Triple) -> Result<K1Triple> {
    check_hom(&s.hom, &t.hom)?;
    Ok(K1Triple { p: s.p.direct_sum(&t.p)?, u: s.u.direct_sum(&t.u)?, g: s.g.direct_sum(&t.g)?, hom: s.hom.clone() })
}

/// `(p, u*, g*)`: in the unitary picture the corner inverse is the adjoint.
pub fn negate_k1(s: &K1Triple) -> K1Triple {
    K1Triple { p: s.p.clone(), u: s.u.adjoint(), g: s.g.adjoint(), hom: s.hom.clone() }
}

/// Checks `c*c = p`, `cc* = p'`, `d*d = q`, `dd* = q'` and
/// `φ(d)v = v'φ(c)`. Everything is padded to a common level first.
pub fn verify_iso(s: &K0Triple, t: &K0Triple, cert: &IsoCertificateK0, tol: Tolerance) -> Result<ValidationReport> {
    check_hom(&s.hom, &t.hom)?;
    let n = [s.level(), t.level(), cert.c.level, cert.d.level].into_iter().max().unwrap_or(1);
    let pad = |x: &UnitizedElement| x.pad_to(n);
    let (p, q, v) = (pad(&s.p), pad(&s.q), pad(&s.v));
    let (p2, q2, v2) = (pad(&t.p), pad(&t.q), pad(&t.v));
    let (c, d) = (pad(&cert.c), pad(&cert.d));
    let mut r = ValidationReport::default();
    r.check("certificate", "c*c - p", c.adjoint().mul(&c)?.dist(&p), tol);
    r.check("certificate", "cc* - p'", c.mul(&c.adjoint())?.dist(&p2), tol);
    r.check("certificate", "d*d - q", d.adjoint().mul(&d)?.dist(&q), tol);
    r.check("certificate", "dd* - q'", d.mul(&d.adjoint())?.dist(&q2), tol);
    let lhs = s.hom.apply(&d)?.mul(&v)?;
    let rhs = v2.mul(&s.hom.apply(&c)?)?;
    r.check("not intertwining", "phi(d)v - v'phi(c)", lhs.dist(&rhs), tol);
    Ok(r)
}

/// Outcome of checking a homotopy certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct CertificateReport {
    pub violations: Vec<Violation>,
    /// Largest pointwise defect over endpoint and membership conditions.
    pub max_defect: f64,
    /// Smallest corner singular value met along the path.
    pub min_conditioning: f64,
    /// Largest distance between adjacent nodes of the path.
    pub max_step: f64,
}

impl CertificateReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    fn new() -> Self {
        CertificateReport { violations: Vec::new(), max_defect: 0.0, min_conditioning: f64::INFINITY, max_step: 0.0 }
    }

    fn defect(&mut self, label: &str, d: f64, tol: Tolerance) {
        self.max_defect = self.max_defect.max(d);
        if !(d <= tol.eps) {
            self.violations.push(Violation::new("certificate", label, d));
        }
    }

    fn conditioning(&mut self, label: &str, c: f64) {
        if c < self.min_conditioning {
            self.min_conditioning = c;
        }
        if !(c > INVERTIBILITY_FLOOR) && !self.violations.iter().any(|v| v.label == label) {
            self.violations.push(Violation::new("not invertible", label, c));
        }
    }
}

fn corner_check(x: &UnitizedElement, e: &UnitizedElement) -> Result<(f64, f64)> {
    let corner = e.mul(x)?.mul(e)?.dist(x);
    let cond = UnitizedElement::min_over_components(&[x, e, e], |c| corner_conditioning(c[0], c[1], c[2]))?;
    Ok((corner, cond))
}

/// Checks an elementary-ness claim at the certificate's own grid nodes.
pub fn verify_elementary(sigma: &Triple, cert: &HomotopyCertificate, tol: Tolerance) -> Result<CertificateReport> {
    match (sigma, cert) {
        (Triple::K0(t), HomotopyCertificate::K0 { path }) => verify_elementary_k0(&t.to_raw(), path, tol),
        (Triple::RawK0(t), HomotopyCertificate::K0 { path }) => verify_elementary_k0(t, path, tol),
        (Triple::K1(t), HomotopyCertificate::K1 { a, g }) => verify_elementary_k1(&t.to_raw(), a, g, tol),
        (Triple::RawK1(t), HomotopyCertificate::K1 { a, g }) => verify_elementary_k1(t, a, g, tol),
        _ => Err(Error::CertificateInvalid("certificate degree does not match the triple".into())),
    }
}

fn verify_elementary_k0(s: &RawK0Triple, path: &SampledElement, tol: Tolerance) -> Result<CertificateReport> {
    if path.domain != Domain::Interval {
        return Err(Error::CertificateInvalid("homotopies live on the interval".into()));
    }
    let mut r = CertificateReport::new();
    r.defect("e - f", s.e.dist(&s.f), tol);
    let fe = s.hom.apply(&s.e)?;
    let n = fe.level.max(path.level());
    let fe = fe.pad_to(n);
    r.defect("b_0 - phi(e)", path.first().pad_to(n).dist(&fe), tol);
    r.defect("b_1 - b", path.last().pad_to(n).dist(&s.b.pad_to(n)), tol);
    for x in &path.samples {
        let (corner, cond) = corner_check(&x.pad_to(n), &fe)?;
        r.defect("b_t - phi(e) b_t phi(e)", corner, tol);
        r.conditioning("corner inverse of b_t", cond);
    }
    r.max_step = path.max_step();
    Ok(r)
}

fn verify_elementary_k1(s: &RawK1Triple, a: &SampledElement, g: &[SampledElement], tol: Tolerance) -> Result<CertificateReport> {
    if a.domain != Domain::Interval || g.len() != a.samples.len() {
        return Err(Error::CertificateInvalid("need one s-path for every node of the a-path".into()));
    }
    let mut r = CertificateReport::new();
    let e = &s.e;
    let fe = s.hom.apply(e)?;
    r.defect("a_0 - e", a.first().dist(e), tol);
    r.defect("a_1 - a", a.last().dist(&s.a), tol);
    for (k, (at, gt)) in a.samples.iter().zip(g).enumerate() {
        let (corner, cond) = corner_check(at, e)?;
        r.defect("a_t - e a_t e", corner, tol);
        r.conditioning("corner inverse of a_t", cond);
        r.defect("g_t(0) - phi(e)", gt.first().dist(&fe), tol);
        r.defect("g_t(1) - phi(a_t)", gt.last().dist(&s.hom.apply(at)?), tol);
        for x in &gt.samples {
            let (corner, cond) = corner_check(x, &fe)?;
            r.defect("g_t(s) - phi(e) g_t(s) phi(e)", corner, tol);
            r.conditioning("corner inverse of g_t(s)", cond);
        }
        if k == 0 {
            let d = gt.samples.iter().map(|x| x.dist(&fe)).fold(0.0, f64::max);
            r.defect("g_0(s) - phi(e)", d, tol);
        }
        r.max_step = r.max_step.max(gt.max_step());
    }
    let last = g.last().expect("nonempty");
    if last.grid != s.g.grid {
        r.defect("g_1 - g", f64::INFINITY, tol);
    } else {
        let d = last.samples.iter().zip(&s.g.samples).map(|(x, y)| x.dist(y)).fold(0.0, f64::max);
        r.defect("g_1 - g", d, tol);
    }
    // The t-direction of the g family is checked here as well.
    for w in g.windows(2) {
        let d = w[0].samples.iter().zip(&w[1].samples).map(|(x, y)| x.dist(y)).fold(0.0, f64::max);
        r.max_step = r.max_step.max(d);
    }
    r.max_step = r.max_step.max(a.max_step());
    Ok(r)
}

/// `(p, p, φ(p))` is elementary through the constant path.
pub fn constant_certificate(sigma: &K0Triple, grid: usize) -> Result<HomotopyCertificate> {
    let fp = sigma.hom.apply(&sigma.p)?;
    Ok(HomotopyCertificate::K0 { path: SampledElement::constant(&fp, grid) })
}

pub(crate) fn ensure_valid(report: ValidationReport) -> Result<()> {
    if report.is_ok() {
        Ok(())
    } else {
        let msg = report.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ");
        Err(Error::HypothesisViolated(msg))
    }
}

fn block2(a: &UnitizedElement, b: &UnitizedElement, c: &UnitizedElement, d: &UnitizedElement) -> Result<UnitizedElement> {
    UnitizedElement::from_grid(&[vec![a.clone(), b.clone()], vec![c.clone(), d.clone()]])
}

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// The triple `(p⊕q, p⊕q, [[0, v*], [−v, 0]])` together with the rotation
/// homotopy `[[φp, tv*],[0, φq]]·[[φp, 0],[−tv, φq]]·[[φp, tv*],[0, φq]]`
/// from `φ(p⊕q)` to it.
pub fn rotation_2x2(sigma: &K0Triple, grid: usize, tol: Tolerance) -> Result<(K0Triple, HomotopyCertificate)> {
    ensure_valid(sigma.validate(tol))?;
    let hom = &sigma.hom;
    let fp = hom.apply(&sigma.p)?;
    let fq = hom.apply(&sigma.q)?;
    let v = &sigma.v;
    let vs = v.adjoint();
    let z = UnitizedElement::zero(&hom.target, v.level);
    let at = |t: f64| -> Result<UnitizedElement> {
        let upper = block2(&fp, &vs.scale(real(t)), &z, &fq)?;
        let lower = block2(&fp, &z, &v.scale(real(-t)), &fq)?;
        upper.mul(&lower)?.mul(&upper)
    };
    let path = SampledElement::from_fn(grid, crate::algmodel::Boundary::None, at, tol)?;
    let pq = sigma.p.direct_sum(&sigma.q)?;
    let rot = block2(&z, &vs, &v.scale(real(-1.0)), &z)?;
    let target = K0Triple { p: pq.clone(), q: pq, v: rot, hom: hom.clone() };
    Ok((target, HomotopyCertificate::K0 { path }))
}

/// Certificate for `σ ⊕ (−σ) ≅ (p⊕q, p⊕q, [[0, v*], [−v, 0]])`:
/// `c = p⊕q`, `d = [[0, p], [−q, 0]]`.
pub fn inverse_iso_certificate(sigma: &K0Triple) -> Result<IsoCertificateK0> {
    let z = UnitizedElement::zero(&sigma.hom.source, sigma.level());
    let c = sigma.p.direct_sum(&sigma.q)?;
    let d = block2(&z, &sigma.p, &sigma.q.scale(real(-1.0)), &z)?;
    Ok(IsoCertificateK0 { c, d })
}

/// Certificate for `σ ⊕ τ ≅ τ ⊕ σ` by the block swap.
pub fn swap_certificate(s: &K0Triple, t: &K0Triple) -> Result<IsoCertificateK0> {
    let (n, m) = (s.level(), t.level());
    let swap = CMatrix::from_fn(n + m, n + m, |i, j| {
        let hit = if i < m { j == n + i } else { j == i - m };
        if hit {
            real(1.0)
        } else {
            real(0.0)
        }
    });
    let c = s.p.direct_sum(&t.p)?.scalar_mul_left(&swap)?;
    let d = s.q.direct_sum(&t.q)?.scalar_mul_left(&swap)?;
    Ok(IsoCertificateK0 { c, d })
}

/// For a self-adjoint unitary u over B̃, the triple `(1_n, 1_n, u)` and the
/// path `exp(iπt(1 − u)/2)` from 1 to u.
pub fn self_adjoint_unitary_path(
    u: &UnitizedElement,
    hom: &Homomorphism,
    grid: usize,
    tol: Tolerance,
) -> Result<(K0Triple, HomotopyCertificate)> {
    let sa = u.self_adjoint_defect();
    let un = u.unitary_defect();
    if sa > tol.eps || un > tol.eps {
        return Err(Error::HypothesisViolated(format!(
            "not a self-adjoint unitary (defects {sa:.3e}, {un:.3e})"
        )));
    }
    let path = SampledElement::from_fn(
        grid,
        crate::algmodel::Boundary::None,
        |t| Ok(u.map(|m| crate::matcore::self_adjoint_unitary_path(m, t))),
        tol,
    )?;
    let one = UnitizedElement::identity(&hom.source, u.level);
    let triple = K0Triple::new(one.clone(), one, u.clone(), hom)?;
    Ok((triple, HomotopyCertificate::K0 { path }))
}

/// `σ ⊕ (−σ)` for a K1 triple together with the six-factor homotopy
/// `F(t)·F(t)^{-1}`-type path: the first three factors
/// `[[e, −tx],[0, e]]·[[e, 0],[tx*, e]]·[[e, −tx],[0, e]]` are followed by
/// `[[e, te],[0, e]]·[[e, 0],[−te, e]]·[[e, te],[0, e]]`, which at t = 1 is
/// the rotation needed to land on `x ⊕ x*` and at `x = e` inverts the first
/// three, so `g_t(0) = φ(e ⊕ e)` throughout.
pub fn whitehead_k1(sigma: &K1Triple, grid: usize, tol: Tolerance) -> Result<(K1Triple, HomotopyCertificate)> {
    ensure_valid(sigma.validate(tol))?;
    let hom = &sigma.hom;
    let sum = add_k1(sigma, &negate_k1(sigma))?;
    let path_at = |e: &UnitizedElement, x: &UnitizedElement, t: f64| -> Result<UnitizedElement> {
        let z = UnitizedElement::zero(&e.algebra, e.level);
        let xs = x.adjoint();
        let f1 = block2(e, &x.scale(real(-t)), &z, e)?;
        let f2 = block2(e, &z, &xs.scale(real(t)), e)?;
        let f4 = block2(e, &e.scale(real(t)), &z, e)?;
        let f5 = block2(e, &z, &e.scale(real(-t)), e)?;
        f1.mul(&f2)?.mul(&f1)?.mul(&f4)?.mul(&f5)?.mul(&f4)
    };
    let p = &sigma.p;
    let fp = hom.apply(p)?;
    let mut g_family = Vec::with_capacity(grid);
    let mut a_samples = Vec::with_capacity(grid);
    for k in 0..grid {
        let t = k as f64 / (grid - 1) as f64;
        a_samples.push(path_at(p, &sigma.u, t)?);
        let gt = sigma.g.map(|x| path_at(&fp, x, t))?;
        g_family.push(gt);
    }
    let a = SampledElement::new(Domain::Interval, crate::algmodel::Boundary::None, a_samples, tol)?;
    Ok((sum, HomotopyCertificate::K1 { a, g: g_family }))
}

/// The algebra a triple's entries live over, for reporting.
pub fn source_algebra(sigma: &Triple) -> &FDAlgebra {
    match sigma {
        Triple::RawK0(t) => &t.hom.source,
        Triple::K0(t) => &t.hom.source,
        Triple::RawK1(t) => &t.hom.source,
        Triple::K1(t) => &t.hom.source,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algmodel::Boundary;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn m2_identity() -> Homomorphism {
        Homomorphism::identity(&FDAlgebra::matrix(2))
    }

    /// Example-2.6-style generator: ℂ⊕ℂ → M₂ diagonal, v the shift e₁₂.
    fn shift_triple() -> K0Triple {
        let a = FDAlgebra::new(vec![1, 1], "C+C").unwrap();
        let b = FDAlgebra::matrix(2);
        let phi = Homomorphism::from_multiplicities(&a, &b, &[vec![1, 1]], "diag").unwrap();
        let one = CMatrix::identity(1);
        let zero = CMatrix::zeros(1, 1);
        let p = UnitizedElement::from_blocks(&a, vec![zero.clone(), one.clone()]).unwrap();
        let q = UnitizedElement::from_blocks(&a, vec![one, zero]).unwrap();
        let v = UnitizedElement::from_blocks(&b, vec![CMatrix::unit(2, 0, 1)]).unwrap();
        K0Triple::new(p, q, v, &phi).unwrap()
    }

    #[test]
    fn trivial_and_shift_triples_validate() {
        let phi = m2_identity();
        let one = UnitizedElement::identity(&phi.source, 1);
        let t = K0Triple::new(one.clone(), one.clone(), one, &phi).unwrap();
        assert!(t.validate(tol()).is_ok());
        assert!(shift_triple().validate(tol()).is_ok());
    }

    #[test]
    fn range_mismatch_is_reported() {
        let mut t = shift_triple();
        t.q = t.p.clone();
        let r = t.validate(tol());
        assert!(r.violations.iter().any(|v| v.kind == "range mismatch"));
    }

    #[test]
    fn normalize_skew_idempotent() {
        let phi = m2_identity();
        let a = &phi.source;
        let e = UnitizedElement::from_blocks(a, vec![CMatrix::from_real(&[&[1.0, 1.0], &[0.0, 0.0]])]).unwrap();
        let b = phi.apply(&e).unwrap();
        let raw = RawK0Triple::new(e.clone(), e, b, &phi).unwrap();
        assert!(raw.validate(tol()).is_ok());
        let (t, log) = normalize_k0(&raw, tol()).unwrap();
        assert!(t.validate(tol()).is_ok(), "{:?}", t.validate(tol()));
        assert!(!log.is_empty());
        assert_eq!(t.q.dist(&UnitizedElement::unit_corner(a, 1, 2)), 0.0);
        assert!(t.p.scalar.dist(&CMatrix::unit_corner(1, 2)) < 1e-9);
    }

    #[test]
    fn positive_scalar_multiple_gives_same_partial_isometry() {
        let phi = m2_identity();
        let a = &phi.source;
        let e = UnitizedElement::from_blocks(a, vec![CMatrix::from_real(&[&[1.0, 1.0], &[0.0, 0.0]])]).unwrap();
        let b = phi.apply(&e).unwrap();
        let r1 = RawK0Triple::new(e.clone(), e.clone(), b.clone(), &phi).unwrap();
        let r2 = RawK0Triple::new(e.clone(), e, b.scale(real(2.0)), &phi).unwrap();
        let (t1, _) = normalize_k0(&r1, tol()).unwrap();
        let (t2, _) = normalize_k0(&r2, tol()).unwrap();
        assert!(t1.v.dist(&t2.v) < 1e-9);
    }

    #[test]
    fn normalized_input_is_returned_unchanged() {
        let phi = m2_identity();
        let one = UnitizedElement::identity(&phi.source, 1);
        let raw = RawK0Triple::new(one.clone(), one.clone(), one, &phi).unwrap();
        let (t, log) = normalize_k0(&raw, tol()).unwrap();
        assert_eq!(log, vec!["already normalized".to_string()]);
        assert_eq!(t.to_raw(), raw);
    }

    #[test]
    fn rotation_and_inverse_certificates() {
        let s = shift_triple();
        let sum = add_k0(&s, &negate_k0(&s)).unwrap();
        assert!(sum.validate(tol()).is_ok());
        let (rot, cert) = rotation_2x2(&s, 65, tol()).unwrap();
        assert!(rot.validate(tol()).is_ok());
        let iso = inverse_iso_certificate(&s).unwrap();
        assert!(verify_iso(&sum, &rot, &iso, tol()).unwrap().is_ok());
        let r = verify_elementary(&Triple::K0(rot), &cert, tol()).unwrap();
        assert!(r.is_ok(), "{:?}", r.violations);
    }

    #[test]
    fn swap_and_wrong_certificates() {
        let s = shift_triple();
        let phi = s.hom.clone();
        let one = UnitizedElement::identity(&phi.source, 1);
        let t = K0Triple::new(one.clone(), one.clone(), UnitizedElement::identity(&phi.target, 1), &phi).unwrap();
        let st = add_k0(&s, &t).unwrap();
        let ts = add_k0(&t, &s).unwrap();
        let cert = swap_certificate(&s, &t).unwrap();
        assert!(verify_iso(&st, &ts, &cert, tol()).unwrap().is_ok());
        let bad = IsoCertificateK0 { c: s.p.clone(), d: s.p.clone() };
        let r = verify_iso(&s, &s, &bad, tol()).unwrap();
        assert!(!r.is_ok());
    }

    #[test]
    fn self_adjoint_path_certificate() {
        let phi = m2_identity();
        let u = UnitizedElement::from_full(&phi.target, CMatrix::identity(1), vec![CMatrix::from_real_diag(&[1.0, -1.0])]).unwrap();
        let (t, cert) = self_adjoint_unitary_path(&u, &phi, 65, tol()).unwrap();
        assert!(t.validate(tol()).is_ok());
        assert!(verify_elementary(&Triple::K0(t), &cert, tol()).unwrap().is_ok());
    }

    #[test]
    fn broken_endpoint_is_reported() {
        let s = shift_triple();
        let (rot, cert) = rotation_2x2(&s, 33, tol()).unwrap();
        let HomotopyCertificate::K0 { mut path } = cert else { unreachable!() };
        path.samples.pop();
        let path = SampledElement::new(Domain::Interval, Boundary::None, path.samples, tol()).unwrap();
        let r = verify_elementary(&Triple::K0(rot), &HomotopyCertificate::K0 { path }, tol()).unwrap();
        assert!(r.violations.iter().any(|v| v.label == "b_1 - b"));
    }

    #[test]
    fn whitehead_certificate_for_a_loop() {
        let phi = Homomorphism::identity(&FDAlgebra::complex());
        let b = &phi.target;
        let g = SampledElement::from_fn(
            129,
            Boundary::None,
            |s| UnitizedElement::from_full(b, CMatrix::identity(1), vec![CMatrix::from_diag(&[crate::algmodel::circle(s)])]),
            tol(),
        )
        .unwrap();
        let one = UnitizedElement::identity(&phi.source, 1);
        let sigma = K1Triple::new(one.clone(), one, g, &phi).unwrap();
        assert!(sigma.validate(tol()).is_ok());
        let (sum, cert) = whitehead_k1(&sigma, 65, tol()).unwrap();
        assert!(sum.validate(tol()).is_ok());
        let r = verify_elementary(&Triple::K1(sum), &cert, tol()).unwrap();
        assert!(r.is_ok(), "{:?}", r.violations);
    }

    #[test]
    fn normalize_k1_positive_scalar() {
        let phi = Homomorphism::identity(&FDAlgebra::complex());
        let a = UnitizedElement::identity(&phi.source, 1).scale(real(2.0));
        let g = SampledElement::from_fn(
            33,
            Boundary::None,
            |s| Ok(UnitizedElement::identity(&phi.target, 1).scale(real(1.0 + s))),
            tol(),
        )
        .unwrap();
        let raw = RawK1Triple::new(UnitizedElement::identity(&phi.source, 1), a, g, &phi).unwrap();
        assert!(raw.validate(tol()).is_ok());
        let t = normalize_k1(&raw, tol()).unwrap();
        assert!(t.validate(tol()).is_ok());
        assert!(t.u.dist(&UnitizedElement::identity(&phi.source, 1)) < 1e-12);
        assert!(t.g.max_defect(|x| x.dist(&UnitizedElement::identity(&phi.target, 1))) < 1e-12);
    }
}
