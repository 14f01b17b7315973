//! The on-disk problem format: a JSON document of named algebras,
//! homomorphisms, ladders, triples and certificates.
//!
//! Complex numbers are `[re, im]` pairs and matrices are row-major nested
//! arrays. Elements over the unitization are `{scalar, blocks}` where
//! `blocks[i]` is the full value `ṡ⊗1 + body` in block i.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use relk_core::algmodel::{Boundary, Domain, FDAlgebra, Homomorphism, Ladder, SampledElement, UnitizedElement};
use relk_core::engine::{IntervalEndpointLadder, KData};
use relk_core::intk::{GroupPresentation, IntMatrix};
use relk_core::matcore::{CMatrix, Tolerance, C64};
use relk_core::triples::{K0Triple, K1Triple, RawK0Triple, RawK1Triple, Triple};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

pub type MatrixSpec = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub algebras: BTreeMap<String, AlgebraSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub homomorphisms: BTreeMap<String, HomSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub ladders: BTreeMap<String, LadderSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub triples: BTreeMap<String, TripleSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub certificates: BTreeMap<String, CertificateSpec>,
    #[serde(default, skip_serializing_if = "Settings::is_empty")]
    pub settings: Settings,
    /// Present on machine output only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub results: Option<Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    pub blocks: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HomSpec {
    /// Target block i receives `multiplicities[i][j]` copies of source block
    /// j, in order, then is conjugated by `unitaries[i]`.
    Fd {
        source: String,
        target: String,
        multiplicities: Vec<Vec<usize>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        unitaries: Option<Vec<MatrixSpec>>,
    },
    /// A homomorphism known only through its effect on K-theory.
    Kdata { a: KDataSpec, b: KDataSpec, phi0: Vec<Vec<i64>>, phi1: Vec<Vec<i64>> },
}

/// Invariant factors of K0 and K1, with 0 standing for a copy of Z.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KDataSpec {
    pub label: String,
    pub k0: Vec<i64>,
    pub k1: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LadderSpec {
    /// Ideals are given as block indices of the source and target of phi.
    Fd { phi: String, ideal_a: Vec<usize>, ideal_b: Vec<usize> },
    IntervalEndpoint { gamma: String },
    DiskBoundary {},
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementSpec {
    pub scalar: MatrixSpec,
    pub blocks: Vec<MatrixSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampledSpec {
    pub domain: String,
    pub boundary: String,
    pub samples: Vec<ElementSpec>,
}

/// Triple entries refer to a homomorphism by name, or to one of the maps of
/// a ladder as `LADDER.phi`, `LADDER.psi` or `LADDER.gamma`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TripleSpec {
    K0 { hom: String, p: ElementSpec, q: ElementSpec, v: ElementSpec },
    K1 { hom: String, p: ElementSpec, u: ElementSpec, g: SampledSpec },
    RawK0 { hom: String, e: ElementSpec, f: ElementSpec, b: ElementSpec },
    RawK1 { hom: String, e: ElementSpec, a: ElementSpec, g: SampledSpec },
    /// A triple over function algebras, named for the boundary commands.
    Symbolic { description: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CertificateSpec {
    /// `σ ⊕ (−σ)` is elementary through the 2×2 rotation.
    Rotation {},
    /// `(p, p, φ(p))` is elementary through the constant path.
    Constant {},
    /// `σ ⊕ (−σ)` of a K1 triple is elementary through the Whitehead path.
    Whitehead {},
    /// A path from `φ(p)` to v.
    HomotopyK0 { path: SampledSpec },
    /// A path from p to u through the corner invertibles, used in place of
    /// the logarithm path when reading off a K1 class.
    K1Path { path: SampledSpec },
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
}

impl Settings {
    pub fn is_empty(&self) -> bool {
        self.tolerance.is_none() && self.grid.is_none()
    }
}

pub fn parse(text: &str) -> Result<ProblemFile, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::resolution(format!("malformed problem file: {e}")))
}

/// Canonical text: sorted keys, two-space indentation, floats with 17
/// significant digits, arrays without objects kept on one line when short.
pub fn to_canonical(value: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, value, 0);
    out.push('\n');
    out
}

pub fn serialize(p: &ProblemFile) -> String {
    to_canonical(&serde_json::to_value(p).expect("problem files serialize"))
}

fn write_number(out: &mut String, n: &serde_json::Number) {
    if n.is_f64() {
        let x = n.as_f64().expect("f64");
        let _ = write!(out, "{x:.16e}");
    } else {
        let _ = write!(out, "{n}");
    }
}

fn inline(value: &Value) -> Option<String> {
    match value {
        Value::Object(m) if !m.is_empty() => None,
        Value::Array(a) => {
            let parts = a.iter().map(inline).collect::<Option<Vec<_>>>()?;
            Some(format!("[{}]", parts.join(", ")))
        }
        _ => {
            let mut s = String::new();
            write_value(&mut s, value, 0);
            Some(s)
        }
    }
}

const INLINE_WIDTH: usize = 100;

fn write_value(out: &mut String, value: &Value, depth: usize) {
    let pad = |d: usize| "  ".repeat(d);
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => write_number(out, n),
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(a) => {
            if a.is_empty() {
                out.push_str("[]");
                return;
            }
            if let Some(s) = inline(value) {
                if s.len() <= INLINE_WIDTH {
                    out.push_str(&s);
                    return;
                }
            }
            out.push_str("[\n");
            for (k, x) in a.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                write_value(out, x, depth + 1);
                out.push_str(if k + 1 < a.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push(']');
        }
        Value::Object(m) => {
            if m.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push_str("{\n");
            let mut keys: Vec<&String> = m.keys().collect();
            keys.sort();
            for (k, key) in keys.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                out.push_str(&Value::String((*key).clone()).to_string());
                out.push_str(": ");
                write_value(out, &m[*key], depth + 1);
                out.push_str(if k + 1 < keys.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push('}');
        }
    }
}

pub fn matrix_from_spec(m: &MatrixSpec, what: &str) -> Result<CMatrix, CliError> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    if m.iter().any(|r| r.len() != cols) || rows == 0 || cols == 0 {
        return Err(CliError::resolution(format!("{what}: matrix rows must be nonempty and of equal length")));
    }
    let data = m.iter().flatten().map(|&[re, im]| C64::new(re, im)).collect();
    CMatrix::from_vec(rows, cols, data).map_err(|e| CliError::resolution(format!("{what}: {e}")))
}

pub fn matrix_to_spec(m: &CMatrix) -> MatrixSpec {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| [clean(m[(i, j)].re), clean(m[(i, j)].im)]).collect()).collect()
}

/// Drops negative zeros so that exported files do not depend on them.
fn clean(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x
    }
}

pub fn element_to_spec(x: &UnitizedElement) -> ElementSpec {
    ElementSpec { scalar: matrix_to_spec(&x.scalar), blocks: x.blocks.iter().map(matrix_to_spec).collect() }
}

pub fn sampled_to_spec(s: &SampledElement) -> SampledSpec {
    SampledSpec {
        domain: domain_name(s.domain).into(),
        boundary: boundary_name(s.boundary).into(),
        samples: s.samples.iter().map(element_to_spec).collect(),
    }
}

pub fn domain_name(d: Domain) -> &'static str {
    match d {
        Domain::Interval => "interval",
        Domain::Circle => "circle",
        Domain::PolarSquare => "polar_square",
    }
}

pub fn boundary_name(b: Boundary) -> &'static str {
    match b {
        Boundary::None => "none",
        Boundary::EndpointsEqual => "endpoints_equal",
        Boundary::VanishesAtEnds => "vanishes_at_ends",
        Boundary::VanishesOnBoundary => "vanishes_on_boundary",
    }
}

fn parse_domain(s: &str) -> Result<Domain, CliError> {
    match s {
        "interval" => Ok(Domain::Interval),
        "circle" => Ok(Domain::Circle),
        "polar_square" => Ok(Domain::PolarSquare),
        _ => Err(CliError::resolution(format!("unknown domain {s:?}"))),
    }
}

fn parse_boundary(s: &str) -> Result<Boundary, CliError> {
    match s {
        "none" => Ok(Boundary::None),
        "endpoints_equal" => Ok(Boundary::EndpointsEqual),
        "vanishes_at_ends" => Ok(Boundary::VanishesAtEnds),
        "vanishes_on_boundary" => Ok(Boundary::VanishesOnBoundary),
        _ => Err(CliError::resolution(format!("unknown boundary condition {s:?}"))),
    }
}

/// Multiplicities and unitaries of a homomorphism whose placements follow
/// the standard order, or None when they do not.
pub fn hom_to_spec(h: &Homomorphism, source: &str, target: &str) -> Option<HomSpec> {
    let mult = h.multiplicity_matrix();
    let multiplicities: Vec<Vec<usize>> =
        mult.to_rows().iter().map(|r| r.iter().map(|&x| x as usize).collect()).collect();
    let rebuilt = Homomorphism::with_unitaries(&h.source, &h.target, &multiplicities, h.unitaries.clone(), &h.label).ok()?;
    if rebuilt.placements != h.placements {
        return None;
    }
    let trivial = h.unitaries.iter().all(|u| u.dist(&CMatrix::identity(u.rows())) == 0.0);
    Some(HomSpec::Fd {
        source: source.into(),
        target: target.into(),
        multiplicities,
        unitaries: if trivial { None } else { Some(h.unitaries.iter().map(matrix_to_spec).collect()) },
    })
}

pub fn kdata_to_spec(k: &KData) -> KDataSpec {
    KDataSpec { label: k.label.clone(), k0: k.k0.nontrivial_factors(), k1: k.k1.nontrivial_factors() }
}

/// A homomorphism after resolution.
#[allow(clippy::large_enum_variant)]
#[derive(Debug, Clone)]
pub enum ResolvedHom {
    Fd(Homomorphism),
    Kdata { a: KData, b: KData, phi0: IntMatrix, phi1: IntMatrix },
}

#[derive(Debug, Clone)]
pub enum ResolvedLadder {
    Fd(Box<Ladder>),
    IntervalEndpoint(IntervalEndpointLadder),
    DiskBoundary,
}

#[allow(clippy::large_enum_variant)]
#[derive(Debug, Clone)]
pub enum ResolvedTriple {
    Fd(Triple),
    Symbolic(String),
}

#[derive(Debug, Clone)]
pub enum ResolvedCertificate {
    Rotation,
    Constant,
    Whitehead,
    HomotopyK0(SampledElement),
    K1Path(SampledElement),
}

/// Every entity of a problem file, resolved and validated.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub file: ProblemFile,
    pub algebras: BTreeMap<String, FDAlgebra>,
    pub homs: BTreeMap<String, ResolvedHom>,
    pub ladders: BTreeMap<String, ResolvedLadder>,
    pub triples: BTreeMap<String, ResolvedTriple>,
    pub certificates: BTreeMap<String, ResolvedCertificate>,
}

fn in_entity<T>(what: &str, r: relk_core::Result<T>) -> Result<T, CliError> {
    r.map_err(|e| CliError::resolution(format!("{what}: {e}")))
}

fn kdata_from_spec(k: &KDataSpec) -> Result<KData, CliError> {
    let group = |f: &[i64], name: &str| {
        let tags = (0..f.len()).map(|i| format!("{name} generator {}", i + 1)).collect();
        in_entity(&k.label, GroupPresentation::cyclic(f, tags))
    };
    Ok(KData::new(&k.label, group(&k.k0, "K0")?, group(&k.k1, "K1")?))
}

fn int_matrix(rows: &[Vec<i64>], r: usize, c: usize, what: &str) -> Result<IntMatrix, CliError> {
    if rows.len() != r || rows.iter().any(|x| x.len() != c) {
        return Err(CliError::resolution(format!("{what}: expected a {r} x {c} integer matrix")));
    }
    let mut m = IntMatrix::zeros(r, c);
    for (i, row) in rows.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            m.set(i, j, x);
        }
    }
    Ok(m)
}

impl Loaded {
    pub fn new(file: ProblemFile, tol: Tolerance) -> Result<Self, CliError> {
        let mut l = Loaded {
            file: file.clone(),
            algebras: BTreeMap::new(),
            homs: BTreeMap::new(),
            ladders: BTreeMap::new(),
            triples: BTreeMap::new(),
            certificates: BTreeMap::new(),
        };
        for (name, a) in &file.algebras {
            l.algebras.insert(name.clone(), in_entity(&format!("algebra {name}"), FDAlgebra::new(a.blocks.clone(), name.clone()))?);
        }
        for (name, h) in &file.homomorphisms {
            let r = match h {
                HomSpec::Fd { source, target, multiplicities, unitaries } => {
                    let s = l.algebra(source)?.clone();
                    let t = l.algebra(target)?.clone();
                    let us = match unitaries {
                        Some(us) => us
                            .iter()
                            .map(|u| matrix_from_spec(u, &format!("homomorphism {name}")))
                            .collect::<Result<Vec<_>, _>>()?,
                        None => t.block_sizes.iter().map(|&m| CMatrix::identity(m)).collect(),
                    };
                    let what = format!("homomorphism {name}");
                    ResolvedHom::Fd(in_entity(&what, Homomorphism::with_unitaries(&s, &t, multiplicities, us, name))?)
                }
                HomSpec::Kdata { a, b, phi0, phi1 } => {
                    let a = kdata_from_spec(a)?;
                    let b = kdata_from_spec(b)?;
                    let what = format!("homomorphism {name}");
                    let phi0 = int_matrix(phi0, b.k0.generator_count, a.k0.generator_count, &what)?;
                    let phi1 = int_matrix(phi1, b.k1.generator_count, a.k1.generator_count, &what)?;
                    ResolvedHom::Kdata { a, b, phi0, phi1 }
                }
            };
            l.homs.insert(name.clone(), r);
        }
        for (name, lad) in &file.ladders {
            let what = format!("ladder {name}");
            let r = match lad {
                LadderSpec::Fd { phi, ideal_a, ideal_b } => {
                    let phi = l.fd_hom(phi)?.clone();
                    ResolvedLadder::Fd(Box::new(in_entity(&what, Ladder::new(phi, ideal_a.clone(), ideal_b.clone()))?))
                }
                LadderSpec::IntervalEndpoint { gamma } => {
                    let g = l.fd_hom(gamma)?.clone();
                    ResolvedLadder::IntervalEndpoint(in_entity(&what, IntervalEndpointLadder::new(g))?)
                }
                LadderSpec::DiskBoundary {} => ResolvedLadder::DiskBoundary,
            };
            l.ladders.insert(name.clone(), r);
        }
        for (name, t) in &file.triples {
            let r = l.resolve_triple(name, t, tol)?;
            l.triples.insert(name.clone(), r);
        }
        for (name, c) in &file.certificates {
            let what = format!("certificate {name}");
            let r = match c {
                CertificateSpec::Rotation {} => ResolvedCertificate::Rotation,
                CertificateSpec::Constant {} => ResolvedCertificate::Constant,
                CertificateSpec::Whitehead {} => ResolvedCertificate::Whitehead,
                CertificateSpec::HomotopyK0 { path } => ResolvedCertificate::HomotopyK0(l.sampled_any(path, &what, tol)?),
                CertificateSpec::K1Path { path } => ResolvedCertificate::K1Path(l.sampled_any(path, &what, tol)?),
            };
            l.certificates.insert(name.clone(), r);
        }
        Ok(l)
    }

    pub fn algebra(&self, name: &str) -> Result<&FDAlgebra, CliError> {
        self.algebras.get(name).ok_or_else(|| CliError::resolution(format!("no algebra named {name:?}")))
    }

    pub fn hom(&self, name: &str) -> Result<&ResolvedHom, CliError> {
        self.homs.get(name).ok_or_else(|| CliError::resolution(format!("no homomorphism named {name:?}")))
    }

    pub fn ladder(&self, name: &str) -> Result<&ResolvedLadder, CliError> {
        self.ladders.get(name).ok_or_else(|| CliError::resolution(format!("no ladder named {name:?}")))
    }

    pub fn triple(&self, name: &str) -> Result<&ResolvedTriple, CliError> {
        self.triples.get(name).ok_or_else(|| CliError::resolution(format!("no triple named {name:?}")))
    }

    pub fn certificate(&self, name: &str) -> Result<&ResolvedCertificate, CliError> {
        self.certificates.get(name).ok_or_else(|| CliError::resolution(format!("no certificate named {name:?}")))
    }

    /// A finite-dimensional homomorphism by name, or a map of a ladder as
    /// `LADDER.phi|psi|gamma`.
    pub fn fd_hom(&self, name: &str) -> Result<&Homomorphism, CliError> {
        if let Some((lad, part)) = name.split_once('.') {
            return match (self.ladder(lad)?, part) {
                (ResolvedLadder::Fd(l), "phi") => Ok(&l.phi),
                (ResolvedLadder::Fd(l), "psi") => Ok(&l.psi),
                (ResolvedLadder::Fd(l), "gamma") => Ok(&l.gamma),
                (ResolvedLadder::IntervalEndpoint(l), "gamma") => Ok(&l.gamma),
                _ => Err(CliError::resolution(format!("ladder {lad:?} has no finite-dimensional map {part:?}"))),
            };
        }
        match self.hom(name)? {
            ResolvedHom::Fd(h) => Ok(h),
            ResolvedHom::Kdata { .. } => {
                Err(CliError::resolution(format!("homomorphism {name:?} is given by K-data only")))
            }
        }
    }

    fn element(&self, e: &ElementSpec, alg: &FDAlgebra, what: &str) -> Result<UnitizedElement, CliError> {
        let scalar = matrix_from_spec(&e.scalar, what)?;
        let blocks = e.blocks.iter().map(|b| matrix_from_spec(b, what)).collect::<Result<Vec<_>, _>>()?;
        in_entity(what, UnitizedElement::from_full(alg, scalar, blocks))
    }

    fn sampled(&self, s: &SampledSpec, alg: &FDAlgebra, what: &str, tol: Tolerance) -> Result<SampledElement, CliError> {
        if s.samples.is_empty() {
            return Err(CliError::resolution(format!("{what}: a sampled element needs samples")));
        }
        let samples = s.samples.iter().map(|e| self.element(e, alg, what)).collect::<Result<Vec<_>, _>>()?;
        in_entity(what, SampledElement::new(parse_domain(&s.domain)?, parse_boundary(&s.boundary)?, samples, tol))
    }

    /// Certificates carry their own block structure: the algebra is read off
    /// the first sample.
    fn sampled_any(&self, s: &SampledSpec, what: &str, tol: Tolerance) -> Result<SampledElement, CliError> {
        let first = s.samples.first().ok_or_else(|| CliError::resolution(format!("{what}: no samples")))?;
        let level = first.scalar.len();
        if level == 0 {
            return Err(CliError::resolution(format!("{what}: empty scalar part")));
        }
        let sizes = first.blocks.iter().map(|b| b.len() / level).collect();
        let alg = in_entity(what, FDAlgebra::new(sizes, "certificate"))?;
        self.sampled(s, &alg, what, tol)
    }

    fn resolve_triple(&self, name: &str, t: &TripleSpec, tol: Tolerance) -> Result<ResolvedTriple, CliError> {
        let what = format!("triple {name}");
        let t = match t {
            TripleSpec::K0 { hom, p, q, v } => {
                let h = self.fd_hom(hom)?;
                let p = self.element(p, &h.source, &what)?;
                let q = self.element(q, &h.source, &what)?;
                let v = self.element(v, &h.target, &what)?;
                Triple::K0(in_entity(&what, K0Triple::new(p, q, v, h))?)
            }
            TripleSpec::K1 { hom, p, u, g } => {
                let h = self.fd_hom(hom)?;
                let p = self.element(p, &h.source, &what)?;
                let u = self.element(u, &h.source, &what)?;
                let g = self.sampled(g, &h.target, &what, tol)?;
                Triple::K1(in_entity(&what, K1Triple::new(p, u, g, h))?)
            }
            TripleSpec::RawK0 { hom, e, f, b } => {
                let h = self.fd_hom(hom)?;
                let e = self.element(e, &h.source, &what)?;
                let f = self.element(f, &h.source, &what)?;
                let b = self.element(b, &h.target, &what)?;
                Triple::RawK0(in_entity(&what, RawK0Triple::new(e, f, b, h))?)
            }
            TripleSpec::RawK1 { hom, e, a, g } => {
                let h = self.fd_hom(hom)?;
                let e = self.element(e, &h.source, &what)?;
                let a = self.element(a, &h.source, &what)?;
                let g = self.sampled(g, &h.target, &what, tol)?;
                Triple::RawK1(in_entity(&what, RawK1Triple::new(e, a, g, h))?)
            }
            TripleSpec::Symbolic { description } => return Ok(ResolvedTriple::Symbolic(description.clone())),
        };
        Ok(ResolvedTriple::Fd(t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form_round_trips() {
        let text = r#"{"algebras": {"M2": {"blocks": [2]}, "CC": {"blocks": [1, 1]}},
            "settings": {"tolerance": 1e-9}}"#;
        let p = parse(text).unwrap();
        let once = serialize(&p);
        let twice = serialize(&parse(&once).unwrap());
        assert_eq!(once, twice);
        assert!(once.find("\"CC\"").unwrap() < once.find("\"M2\"").unwrap());
        assert!(once.contains("1.0000000000000001e-9") || once.contains("1.0000000000000000e-9"));
    }

    #[test]
    fn unknown_fields_are_rejected() {
        assert!(parse(r#"{"algebra": {}}"#).is_err());
    }

    #[test]
    fn floats_keep_seventeen_digits() {
        let v: Value = serde_json::json!({"x": 0.1, "n": 3});
        let s = to_canonical(&v);
        assert!(s.contains("1.0000000000000001e-1"));
        assert!(s.contains("\"n\": 3"));
    }
}
