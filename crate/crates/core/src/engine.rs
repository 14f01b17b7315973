//! Exact group computations in the finite-dimensional regime: relative
//! groups with explicit generator triples, class decision for triples, the
//! two six-term sequences, and the worked examples as fixtures.

use std::f64::consts::PI;

use crate::algmodel::{Boundary, Domain, FDAlgebra, Homomorphism, Ladder, SampledElement, UnitizedElement};
use crate::intk::{
    check_exact, cokernel, induced_k0, k_groups, kernel, Cokernel, GroupMap, GroupPresentation, IntMatrix, Kernel,
    NodeVerdict,
};
use crate::maps::{exp_map, index_map, mu1, nu0, p_v_path, range_isometry, LiftData};
use crate::matcore::{corner_conditioning, exp_i, herm_exp_2pi, unitary_log, CMatrix, Tolerance, COMPOSITE_EPS, C64};
use crate::triples::{
    ensure_valid, normalize_k0, normalize_k1, polar_unitary, same_hom, K0Triple, K1Triple, Triple, INVERTIBILITY_FLOOR,
};
use crate::{Error, Result};

/// Determinant winding numbers of a loop: one for the scalar part and one
/// per block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Winding {
    pub scalar: i64,
    pub blocks: Vec<i64>,
}

impl Winding {
    /// The class in `K₀(B) = ℤ^k`: block i contributes its winding minus
    /// `n_i` times the scalar winding (the unit of B̃ has rank `n_i` there).
    pub fn reduced(&self, alg: &FDAlgebra) -> Vec<i64> {
        self.blocks.iter().zip(&alg.block_sizes).map(|(&w, &n)| w - n as i64 * self.scalar).collect()
    }
}

fn det_winding<'a>(mats: impl Iterator<Item = &'a CMatrix>) -> Result<i64> {
    let mut total = 0.0;
    let mut prev: Option<C64> = None;
    for m in mats {
        let d = m.det();
        if d.norm() < 1e-12 {
            return Err(Error::NotUnitary(1.0 - d.norm()));
        }
        if let Some(p) = prev {
            let step = (d / p).arg();
            if step.abs() >= PI / 2.0 {
                return Err(Error::StepTooCoarse(step.abs()));
            }
            total += step;
        }
        prev = Some(d);
    }
    let w = total / (2.0 * PI);
    let r = w.round();
    if (w - r).abs() >= 0.01 {
        return Err(Error::HypothesisViolated(format!("determinant loop does not close (residual {:.3})", w - r)));
    }
    Ok(r as i64)
}

/// Unwrapped determinant phase of a based loop, divided by 2π, per block.
pub fn winding_number(l: &SampledElement) -> Result<Winding> {
    if l.domain == Domain::PolarSquare {
        return Err(Error::DomainMismatch("winding numbers need a one-dimensional loop".into()));
    }
    let d = l.first().dist(l.last());
    if d > COMPOSITE_EPS {
        return Err(Error::HypothesisViolated(format!("loop is not based (endpoint gap {d:.3e})")));
    }
    let scalar = det_winding(l.samples.iter().map(|x| &x.scalar))?;
    let blocks = (0..l.algebra().block_count())
        .map(|i| det_winding(l.samples.iter().map(|x| &x.blocks[i])))
        .collect::<Result<Vec<_>>>()?;
    Ok(Winding { scalar, blocks })
}

/// `K₀(φ) = ker φ*` and `K₁(φ) = coker φ*` with explicit generator triples.
#[derive(Debug, Clone)]
pub struct RelativeGroups {
    pub hom: Homomorphism,
    pub k0: Kernel,
    pub k1: Cokernel,
    pub k0_generators: Vec<K0Triple>,
    pub k1_generators: Vec<K1Triple>,
}

fn projection_from_counts(alg: &FDAlgebra, counts: &[i64]) -> Result<UnitizedElement> {
    let mut out: Option<UnitizedElement> = None;
    for (j, &c) in counts.iter().enumerate() {
        for _ in 0..c.max(0) {
            let e = UnitizedElement::minimal_projection(alg, j);
            out = Some(match out {
                None => e,
                Some(x) => x.direct_sum(&e)?,
            });
        }
    }
    Ok(out.unwrap_or_else(|| UnitizedElement::zero(alg, 1)))
}

fn split_signs(x: &[i64]) -> (Vec<i64>, Vec<i64>) {
    (x.iter().map(|&v| v.max(0)).collect(), x.iter().map(|&v| (-v).max(0)).collect())
}

/// The triple `(p, q, v)` with p (q) a sum of minimal projections counted by
/// the positive (negative) part of x, and v built blockwise from the ranges
/// of φ(p) and φ(q). Requires `φ*(x) = 0`.
pub fn kernel_generator_triple(hom: &Homomorphism, x: &[i64], tol: Tolerance) -> Result<K0Triple> {
    let (pos, neg) = split_signs(x);
    let p = projection_from_counts(&hom.source, &pos)?;
    let q = projection_from_counts(&hom.source, &neg)?;
    let l = p.level.max(q.level);
    let (p, q) = (p.pad_to(l), q.pad_to(l));
    let fp = hom.apply(&p)?;
    let fq = hom.apply(&q)?;
    let blocks = fp
        .blocks
        .iter()
        .zip(&fq.blocks)
        .map(|(a, b)| range_isometry(a, b, tol))
        .collect::<Result<Vec<_>>>()
        .map_err(|_| Error::NotInKernel(format!("{x:?}")))?;
    let v = UnitizedElement::from_body_only(&hom.target, l, blocks)?;
    let t = K0Triple::new(p, q, v, hom)?;
    ensure_valid(t.validate(tol))?;
    Ok(t)
}

/// `μ₁` applied to the positive and negative parts of `y ∈ K₀(B)`.
pub fn cokernel_generator_triple(hom: &Homomorphism, y: &[i64], grid: usize, tol: Tolerance) -> Result<K1Triple> {
    let (pos, neg) = split_signs(y);
    let p = projection_from_counts(&hom.target, &pos)?;
    let q = projection_from_counts(&hom.target, &neg)?;
    mu1(&p, &q, hom, grid, tol)
}

pub fn relative_groups_fd(hom: &Homomorphism, grid: usize, tol: Tolerance) -> Result<RelativeGroups> {
    let map = induced_k0(hom);
    let k0 = kernel(&map)?;
    let k1 = cokernel(&map)?;
    let k0_generators = (0..k0.inclusion.matrix.cols())
        .map(|j| kernel_generator_triple(hom, &k0.inclusion.matrix.col(j), tol))
        .collect::<Result<Vec<_>>>()?;
    let k1_generators = (0..k1.lifts.cols())
        .map(|j| cokernel_generator_triple(hom, &k1.lifts.col(j), grid, tol))
        .collect::<Result<Vec<_>>>()?;
    Ok(RelativeGroups { hom: hom.clone(), k0, k1, k0_generators, k1_generators })
}

fn check_groups_hom(hom: &Homomorphism, groups: &RelativeGroups) -> Result<()> {
    if same_hom(hom, &groups.hom) {
        Ok(())
    } else {
        Err(Error::HomMismatch(format!("triple over {} read in the groups of {}", hom.label, groups.hom.label)))
    }
}

/// Coordinates of `[σ]` in `K₀(φ)`, read off from `ν₀(σ) ∈ ker φ*`.
pub fn class_of_k0_triple_fd(sigma: &K0Triple, groups: &RelativeGroups) -> Result<Vec<i64>> {
    check_groups_hom(&sigma.hom, groups)?;
    let x = nu0(sigma);
    groups.k0.coordinates(&x)?.ok_or_else(|| Error::NotInKernel(format!("{x:?}")))
}

fn certificate_error(msg: String) -> Error {
    Error::CertificateInvalid(msg)
}

/// Carries a path from p to u through the same steps as the K1
/// normalization, giving a unitary path from 1 to the normalized u.
fn normalize_certificate(sigma: &K1Triple, cert: &SampledElement, tol: Tolerance) -> Result<SampledElement> {
    if cert.domain != Domain::Interval || cert.level() != sigma.level() || !cert.algebra().same_shape(&sigma.hom.source) {
        return Err(certificate_error("path must be an interval path at the level of the triple, over A".into()));
    }
    let d0 = cert.first().dist(&sigma.p);
    let d1 = cert.last().dist(&sigma.u);
    if d0 > tol.eps || d1 > tol.eps {
        return Err(certificate_error(format!("path must run from p to u (defects {d0:.3e}, {d1:.3e})")));
    }
    let mut worst = f64::INFINITY;
    for x in &cert.samples {
        let c = UnitizedElement::min_over_components(&[x, &sigma.p, &sigma.p], |c| corner_conditioning(c[0], c[1], c[2]))?;
        worst = worst.min(c);
    }
    if worst < INVERTIBILITY_FLOOR {
        return Err(certificate_error(format!("path leaves the invertibles of the corner ({worst:.3e})")));
    }
    let comp = UnitizedElement::identity(&sigma.hom.source, sigma.level()).sub(&sigma.p)?;
    cert.map(|x| {
        let y = x.add(&comp)?.try_map(|m| polar_unitary(m, tol))?;
        y.scalar_mul_left(&y.scalar.adjoint())
    })
}

/// The based loop over B̃ representing the class of σ: the path g of the
/// normalized triple followed by φ of a path from u back to 1. Without a
/// certificate the path `exp(i t log u)` (componentwise) is used.
pub fn k1_class_loop(sigma: &K1Triple, cert: Option<&SampledElement>, tol: Tolerance) -> Result<SampledElement> {
    ensure_valid(sigma.validate(tol))?;
    let s = normalize_k1(&sigma.to_raw(), tol)?;
    let path = match cert {
        Some(c) => normalize_certificate(sigma, c, tol)?,
        None => {
            let h = s.u.try_map(unitary_log)?;
            let samples = (0..s.g.grid)
                .map(|k| h.try_map(|m| exp_i(m, k as f64 / (s.g.grid - 1) as f64)))
                .collect::<Result<Vec<_>>>()?;
            SampledElement { domain: Domain::Interval, boundary: Boundary::None, grid: s.g.grid, samples }
        }
    };
    let one = UnitizedElement::identity(&s.hom.source, s.level());
    let d0 = path.first().dist(&one);
    let d1 = path.last().dist(&s.u);
    if d0 > COMPOSITE_EPS || d1 > COMPOSITE_EPS {
        return Err(certificate_error(format!("normalized path misses 1 or u (defects {d0:.3e}, {d1:.3e})")));
    }
    let back = path.apply(&s.hom)?.reversed();
    let mut samples = s.g.samples.clone();
    samples.extend(back.samples.into_iter().skip(1));
    Ok(SampledElement { domain: Domain::Interval, boundary: Boundary::EndpointsEqual, grid: samples.len(), samples })
}

/// Coordinates of `[σ]` in `K₁(φ)`: the winding class of [`k1_class_loop`]
/// in `K₀(B)`, projected to the cokernel.
pub fn class_of_k1_triple_fd(
    sigma: &K1Triple,
    cert: Option<&SampledElement>,
    groups: &RelativeGroups,
    tol: Tolerance,
) -> Result<Vec<i64>> {
    check_groups_hom(&sigma.hom, groups)?;
    let l = k1_class_loop(sigma, cert, tol)?;
    let c = winding_number(&l)?.reduced(&sigma.hom.target);
    groups.k1.coordinates(&c)
}

/// A six-term cyclic sequence: `maps[k]` runs from `groups[k]` to
/// `groups[(k+1) % 6]` and `exactness[k]` is the verdict at `groups[k]`.
#[derive(Debug, Clone)]
pub struct SixTermReport {
    pub labels: Vec<String>,
    pub groups: Vec<GroupPresentation>,
    pub map_labels: Vec<String>,
    pub maps: Vec<GroupMap>,
    pub exactness: Vec<NodeVerdict>,
    pub generators: Vec<(String, Triple)>,
}

impl SixTermReport {
    pub fn all_exact(&self) -> bool {
        self.exactness.iter().all(|v| *v == NodeVerdict::Exact)
    }
}

/// Builds the six maps from their matrices and runs the exactness check
/// around the cycle.
pub fn assemble_report(
    labels: &[&str],
    groups: Vec<GroupPresentation>,
    map_labels: &[&str],
    matrices: Vec<IntMatrix>,
    generators: Vec<(String, Triple)>,
) -> Result<SixTermReport> {
    if groups.len() != 6 || matrices.len() != 6 || labels.len() != 6 || map_labels.len() != 6 {
        return Err(Error::Shape("a six-term sequence needs six groups and six maps".into()));
    }
    let maps = matrices
        .into_iter()
        .enumerate()
        .map(|(k, m)| GroupMap::new(groups[k].clone(), groups[(k + 1) % 6].clone(), m))
        .collect::<Result<Vec<_>>>()?;
    let mut seq = maps.clone();
    seq.push(maps[0].clone());
    let rep = check_exact(&seq)?;
    let mut exactness = vec![NodeVerdict::Exact; 6];
    for (k, v) in rep.nodes.into_iter().enumerate() {
        exactness[(k + 1) % 6] = v;
    }
    Ok(SixTermReport {
        labels: labels.iter().map(|s| s.to_string()).collect(),
        groups,
        map_labels: map_labels.iter().map(|s| s.to_string()).collect(),
        maps,
        exactness,
        generators,
    })
}

fn columns(rows: usize, cols: Vec<Vec<i64>>) -> IntMatrix {
    IntMatrix::from_cols(rows, &cols)
}

fn generator_list(prefix: &str, g: &RelativeGroups) -> Vec<(String, Triple)> {
    let mut out = Vec::new();
    for (k, t) in g.k0_generators.iter().enumerate() {
        out.push((format!("K0({prefix}) generator {}", k + 1), Triple::K0(t.clone())));
    }
    for (k, t) in g.k1_generators.iter().enumerate() {
        out.push((format!("K1({prefix}) generator {}", k + 1), Triple::K1(t.clone())));
    }
    out
}

/// The sequence `K₁(B) → K₀(φ) → K₀(A) → K₀(B) → K₁(φ) → K₁(A) → K₁(B)`
/// with μ₀, ν₀, φ*, μ₁, ν₁, φ*, each evaluated on generators.
pub fn six_term_thm1(hom: &Homomorphism, grid: usize, tol: Tolerance) -> Result<SixTermReport> {
    let rg = relative_groups_fd(hom, grid, tol)?;
    let (k0a, k1a) = k_groups(&hom.source);
    let (k0b, k1b) = k_groups(&hom.target);
    let nu0_cols = rg.k0_generators.iter().map(nu0).collect();
    let mut mu1_cols = Vec::new();
    for i in 0..hom.target.block_count() {
        let e = UnitizedElement::minimal_projection(&hom.target, i);
        let t = mu1(&e, &UnitizedElement::zero(&hom.target, 1), hom, grid, tol)?;
        mu1_cols.push(class_of_k1_triple_fd(&t, None, &rg, tol)?);
    }
    let matrices = vec![
        IntMatrix::zeros(rg.k0.group.generator_count, 0),
        columns(k0a.generator_count, nu0_cols),
        hom.multiplicity_matrix(),
        columns(rg.k1.group.generator_count, mu1_cols),
        IntMatrix::zeros(0, rg.k1.group.generator_count),
        IntMatrix::zeros(0, 0),
    ];
    let groups = vec![k1b, rg.k0.group.clone(), k0a, k0b, rg.k1.group.clone(), k1a];
    assemble_report(
        &["K1(B)", "K0(phi)", "K0(A)", "K0(B)", "K1(phi)", "K1(A)"],
        groups,
        &["mu0", "nu0", "phi*", "mu1", "nu1", "phi*"],
        matrices,
        generator_list("phi", &rg),
    )
}

fn image_k0(t: &K0Triple, on_a: &Homomorphism, on_b: &Homomorphism, hom: &Homomorphism) -> Result<K0Triple> {
    K0Triple::new(on_a.apply(&t.p)?, on_a.apply(&t.q)?, on_b.apply(&t.v)?, hom)
}

fn image_k1(t: &K1Triple, on_a: &Homomorphism, on_b: &Homomorphism, hom: &Homomorphism) -> Result<K1Triple> {
    K1Triple::new(on_a.apply(&t.p)?, on_a.apply(&t.u)?, t.g.apply(on_b)?, hom)
}

/// The sequence `K₀(ψ) → K₀(φ) → K₀(γ) → K₁(ψ) → K₁(φ) → K₁(γ) → K₀(ψ)` of a
/// ladder of block-subset ideals: ι*, π* by functoriality, ∂₀ through the
/// exponential map and ∂₁ through the index map.
pub fn six_term_thm2(ladder: &Ladder, grid: usize, tol: Tolerance) -> Result<SixTermReport> {
    let rpsi = relative_groups_fd(&ladder.psi, grid, tol)?;
    let rphi = relative_groups_fd(&ladder.phi, grid, tol)?;
    let rgam = relative_groups_fd(&ladder.gamma, grid, tol)?;

    let mut iota0 = Vec::new();
    for t in &rpsi.k0_generators {
        let img = image_k0(t, &ladder.iota_a, &ladder.iota_b, &ladder.phi)?;
        iota0.push(class_of_k0_triple_fd(&img, &rphi)?);
    }
    let mut pi0 = Vec::new();
    for t in &rphi.k0_generators {
        let img = image_k0(t, &ladder.pi_a, &ladder.pi_b, &ladder.gamma)?;
        pi0.push(class_of_k0_triple_fd(&img, &rgam)?);
    }
    let mut d0 = Vec::new();
    for t in &rgam.k0_generators {
        let (n, _) = normalize_k0(&t.to_raw(), tol)?;
        let out = exp_map(&n, ladder, &LiftData::default(), grid, tol)?;
        let c = class_of_k1_triple_fd(&out.triple, None, &rpsi, tol)?;
        let c = if out.negated { c.iter().map(|x| -x).collect() } else { c };
        d0.push(rpsi.k1.group.canonical(&c));
    }
    let mut iota1 = Vec::new();
    for t in &rpsi.k1_generators {
        let img = image_k1(t, &ladder.iota_a, &ladder.iota_b, &ladder.phi)?;
        iota1.push(class_of_k1_triple_fd(&img, None, &rphi, tol)?);
    }
    let mut pi1 = Vec::new();
    for t in &rphi.k1_generators {
        let img = image_k1(t, &ladder.pi_a, &ladder.pi_b, &ladder.gamma)?;
        pi1.push(class_of_k1_triple_fd(&img, None, &rgam, tol)?);
    }
    let mut d1 = Vec::new();
    for t in &rgam.k1_generators {
        let out = index_map(t, ladder, &LiftData::default(), tol)?;
        d1.push(class_of_k0_triple_fd(&out, &rpsi)?);
    }

    let groups = vec![
        rpsi.k0.group.clone(),
        rphi.k0.group.clone(),
        rgam.k0.group.clone(),
        rpsi.k1.group.clone(),
        rphi.k1.group.clone(),
        rgam.k1.group.clone(),
    ];
    let matrices = vec![
        columns(groups[1].generator_count, iota0),
        columns(groups[2].generator_count, pi0),
        columns(groups[3].generator_count, d0),
        columns(groups[4].generator_count, iota1),
        columns(groups[5].generator_count, pi1),
        columns(groups[0].generator_count, d1),
    ];
    let mut generators = generator_list("psi", &rpsi);
    generators.extend(generator_list("phi", &rphi));
    generators.extend(generator_list("gamma", &rgam));
    assemble_report(
        &["K0(psi)", "K0(phi)", "K0(gamma)", "K1(psi)", "K1(phi)", "K1(gamma)"],
        groups,
        &["iota*", "pi*", "d0", "iota*", "pi*", "d1"],
        matrices,
        generators,
    )
}

/// K-groups of an algebra known only through its K-theory.
#[derive(Debug, Clone, PartialEq)]
pub struct KData {
    pub label: String,
    pub k0: GroupPresentation,
    pub k1: GroupPresentation,
}

impl KData {
    pub fn new(label: &str, k0: GroupPresentation, k1: GroupPresentation) -> Self {
        KData { label: label.into(), k0, k1 }
    }

    pub fn zero(label: &str) -> Self {
        Self::new(label, GroupPresentation::trivial(), GroupPresentation::trivial())
    }

    /// `K₀ = ℤ`, `K₁ = 0`: ℂ, matrix algebras, `C[0,1]`, `C(𝔻)`.
    pub fn contractible_unital(label: &str) -> Self {
        Self::new(label, GroupPresentation::free(vec!["[1]".into()]), GroupPresentation::trivial())
    }

    /// `K₀ = K₁ = ℤ`: the circle.
    pub fn circle(label: &str) -> Self {
        Self::new(label, GroupPresentation::free(vec!["[1]".into()]), GroupPresentation::free(vec!["[z]".into()]))
    }
}

fn direct_sum_group(sub: &GroupPresentation, quot: &GroupPresentation) -> Result<GroupPresentation> {
    let mut factors = sub.nontrivial_factors();
    factors.extend(quot.nontrivial_factors());
    let tags = (0..factors.len()).map(|k| format!("generator {}", k + 1)).collect();
    GroupPresentation::cyclic(&factors, tags)
}

fn extension(sub: &GroupPresentation, quot: &GroupPresentation, what: &str) -> Result<GroupPresentation> {
    if sub.is_trivial() || quot.torsion().is_empty() {
        direct_sum_group(sub, quot)
    } else {
        Err(Error::NotComputable(format!(
            "{what}: the extension of {} by {} is not determined by K-data",
            quot.describe(),
            sub.describe()
        )))
    }
}

/// Relative groups from K-data alone, through
/// `0 → coker φ*₁ → K₀(φ) → ker φ*₀ → 0` and
/// `0 → coker φ*₀ → K₁(φ) → ker φ*₁ → 0`. Refused when both K₁ groups are
/// nonzero or an extension is not split.
pub fn relative_groups_kdata(
    a: &KData,
    b: &KData,
    phi0: &IntMatrix,
    phi1: &IntMatrix,
) -> Result<(GroupPresentation, GroupPresentation)> {
    if !a.k1.is_trivial() && !b.k1.is_trivial() {
        return Err(Error::NotComputable(format!(
            "both K1({}) and K1({}) are nonzero",
            a.label, b.label
        )));
    }
    let f0 = GroupMap::new(a.k0.clone(), b.k0.clone(), phi0.clone())?;
    let f1 = GroupMap::new(a.k1.clone(), b.k1.clone(), phi1.clone())?;
    let k0 = extension(&cokernel(&f1)?.group, &kernel(&f0)?.group, "K0")?;
    let k1 = extension(&cokernel(&f0)?.group, &kernel(&f1)?.group, "K1")?;
    Ok((k0, k1))
}

/// The ladder `0 → C₀(0,1) → C[0,1] → ℂ⊕ℂ → 0` over `0 → 0 → B → B → 0`,
/// where the quotient is evaluation at the endpoints, γ: ℂ⊕ℂ → B is a
/// nonzero homomorphism and `φ(f) = γ(f(0), f(1))`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalEndpointLadder {
    pub gamma: Homomorphism,
}

/// `∂₀` of a triple over γ, with the loop u over `C₀(0,1)~` it produces.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalExpBoundary {
    pub u: SampledElement,
    pub winding: i64,
    pub class: i64,
}

impl IntervalEndpointLadder {
    pub fn new(gamma: Homomorphism) -> Result<Self> {
        if gamma.source.block_sizes != [1, 1] {
            return Err(Error::InvalidLadder("gamma must be defined on C + C".into()));
        }
        if gamma.is_zero() {
            return Err(Error::InvalidLadder("gamma must be nonzero".into()));
        }
        Ok(IntervalEndpointLadder { gamma })
    }

    /// `φ*: K₀(C[0,1]) = ℤ → K₀(B)`, sending `[1]` to `γ*(1, 1)`.
    pub fn phi_star(&self) -> Result<GroupMap> {
        let (k0b, _) = k_groups(&self.gamma.target);
        let m = self.gamma.multiplicity_matrix();
        let col: Vec<i64> = (0..m.rows()).map(|i| m.get(i, 0) + m.get(i, 1)).collect();
        GroupMap::new(GroupPresentation::free(vec!["[1]".into()]), k0b, IntMatrix::from_cols(col.len(), &[col]))
    }

    pub fn k0_phi(&self) -> Result<Kernel> {
        kernel(&self.phi_star()?)
    }

    pub fn k1_phi(&self) -> Result<Cokernel> {
        cokernel(&self.phi_star()?)
    }

    /// `K₁(ψ) = K₁(C₀(0,1)) = ℤ`, generated by `z(x) = e^{2πix}`.
    pub fn k1_psi() -> GroupPresentation {
        GroupPresentation::free(vec!["[z]".into()])
    }

    /// `−[1_{2m}, exp(2πi(a⊕0_m)), exp(2πif)]` for the normalized σ, with
    /// the lift `a(x) = (1−x)p₀ + x p₁` of `p = (p₀, p₁)`. Since `J = 0` the
    /// path part is scalar and trivial, and the class is minus the winding
    /// of `det u`.
    pub fn exp_boundary(&self, sigma: &K0Triple, grid: usize, tol: Tolerance) -> Result<IntervalExpBoundary> {
        if !same_hom(&sigma.hom, &self.gamma) {
            return Err(Error::HomMismatch("expected a triple over gamma".into()));
        }
        let (s, _) = normalize_k0(&sigma.to_raw(), tol)?;
        let m = s.level();
        let pv = p_v_path(&s, grid, tol)?;
        let g_defect = pv
            .samples
            .samples
            .iter()
            .map(|x| herm_exp_2pi(&x.scalar, 1.0).map(|e| e.dist(&CMatrix::identity(2 * m))))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        if g_defect > tol.eps {
            return Err(Error::LiftInvalid(format!("exp(2 pi i f) is not scalar 1 (defect {g_defect:.3e})")));
        }
        let (p0, p1) = (&s.p.blocks[0], &s.p.blocks[1]);
        let alg = FDAlgebra::complex();
        let one = CMatrix::identity(2 * m);
        let u = SampledElement::from_fn(
            grid,
            Boundary::VanishesAtEnds,
            |x| {
                let a = &p0.scale_re(1.0 - x) + &p1.scale_re(x);
                let e = herm_exp_2pi(&a.pad_to(2 * m), 1.0)?;
                UnitizedElement::from_full(&alg, one.clone(), vec![e])
            },
            tol,
        )?;
        let w = winding_number(&u)?.reduced(&alg)[0];
        Ok(IntervalExpBoundary { u, winding: w, class: -w })
    }

    /// Class in `K₁(φ)` of a triple `(1_n, u, g)` given g over B̃ and a path
    /// from 1 to `(u(0), u(1))` over the unitization of ℂ⊕ℂ; only the
    /// endpoint values of a path from 1 to u enter the loop.
    pub fn k1_phi_class(&self, g: &SampledElement, endpoint_path: &SampledElement, tol: Tolerance) -> Result<Vec<i64>> {
        let n = g.level();
        let one = UnitizedElement::identity(&self.gamma.target, n);
        let d0 = g.first().dist(&one);
        let image = endpoint_path.apply(&self.gamma)?;
        let d1 = g.last().dist(image.last());
        let d2 = endpoint_path.first().dist(&UnitizedElement::identity(&self.gamma.source, n));
        if d0.max(d1).max(d2) > tol.eps {
            return Err(Error::CertificateInvalid(format!(
                "endpoint path does not match g (defects {d0:.3e}, {d1:.3e}, {d2:.3e})"
            )));
        }
        let mut samples = g.samples.clone();
        samples.extend(image.reversed().samples.into_iter().skip(1));
        let l = SampledElement { domain: Domain::Interval, boundary: Boundary::EndpointsEqual, grid: samples.len(), samples };
        let c = winding_number(&l)?.reduced(&self.gamma.target);
        self.k1_phi()?.coordinates(&c)
    }

    /// The six-term sequence of the ladder.
    pub fn report(&self, grid: usize, tol: Tolerance) -> Result<SixTermReport> {
        let rgam = relative_groups_fd(&self.gamma, grid, tol)?;
        let k0phi = self.k0_phi()?;
        let k1phi = self.k1_phi()?;
        let d = &self.gamma.source;

        let mut d0 = Vec::new();
        for t in &rgam.k0_generators {
            d0.push(vec![self.exp_boundary(t, grid, tol)?.class]);
        }
        // ι*[z]: the triple (1, z, 1) with the path u_t(x) = e^{2πitx},
        // whose endpoint values are (1, e^{2πit}).
        let g = SampledElement::constant(&UnitizedElement::identity(&self.gamma.target, 1), grid);
        let ends = SampledElement::from_fn(
            grid,
            Boundary::None,
            |t| {
                let blocks = vec![CMatrix::identity(1), CMatrix::identity(1).scale(crate::algmodel::circle(t))];
                UnitizedElement::from_full(d, CMatrix::identity(1), blocks)
            },
            tol,
        )?;
        let iota1 = vec![self.k1_phi_class(&g, &ends, tol)?];
        let mut pi1 = Vec::new();
        for j in 0..k1phi.lifts.cols() {
            let t = cokernel_generator_triple(&self.gamma, &k1phi.lifts.col(j), grid, tol)?;
            pi1.push(class_of_k1_triple_fd(&t, None, &rgam, tol)?);
        }
        let groups = vec![
            GroupPresentation::trivial(),
            k0phi.group.clone(),
            rgam.k0.group.clone(),
            Self::k1_psi(),
            k1phi.group.clone(),
            rgam.k1.group.clone(),
        ];
        let matrices = vec![
            IntMatrix::zeros(groups[1].generator_count, 0),
            IntMatrix::zeros(groups[2].generator_count, groups[1].generator_count),
            columns(1, d0),
            columns(groups[4].generator_count, iota1),
            columns(groups[5].generator_count, pi1),
            IntMatrix::zeros(0, groups[5].generator_count),
        ];
        assemble_report(
            &["K0(psi)", "K0(phi)", "K0(gamma)", "K1(psi)", "K1(phi)", "K1(gamma)"],
            groups,
            &["iota*", "pi*", "d0", "iota*", "pi*", "d1"],
            matrices,
            generator_list("gamma", &rgam),
        )
    }
}

/// Pointwise check of the index map on the disk: w is the displayed unitary
/// over `C(𝔻)`, P = w(1⊕0)w* is compared with the expected projection.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskIndexReport {
    pub grid: usize,
    pub max_defect: f64,
    pub unitary_defect: f64,
    pub lift_defect: f64,
    pub projection_defect: f64,
    pub p: SampledElement,
}

impl DiskIndexReport {
    pub fn passes(&self, bound: f64) -> bool {
        [self.max_defect, self.unitary_defect, self.lift_defect, self.projection_defect].iter().all(|&d| d <= bound)
    }
}

fn disk_sqrt(r: f64) -> f64 {
    ((1.0 - r) * (1.0 + r)).max(0.0).sqrt()
}

fn disk_w(r: f64, th: f64) -> CMatrix {
    let z = C64::from_polar(r, th);
    let s = C64::new(disk_sqrt(r), 0.0);
    CMatrix::from_vec(2, 2, vec![z, -s, s, z.conj()]).expect("2x2")
}

/// The expected first entry `[[|z|², z√(1−|z|²)], [z̄√(1−|z|²), 1−|z|²]]` at
/// `z = r e^{iθ}`.
pub fn disk_expected_projection(r: f64, th: f64) -> CMatrix {
    let z = C64::from_polar(r, th);
    let s = disk_sqrt(r);
    let a = r * r;
    CMatrix::from_vec(2, 2, vec![C64::new(a, 0.0), z * s, z.conj() * s, C64::new((1.0 - r) * (1.0 + r), 0.0)])
        .expect("2x2")
}

pub fn disk_index_check(grid: usize, tol: Tolerance) -> Result<DiskIndexReport> {
    let alg = FDAlgebra::complex();
    let corner = CMatrix::unit_corner(1, 2);
    let p = SampledElement::polar_from_fn(
        grid,
        Boundary::VanishesOnBoundary,
        |r, th| {
            let w = disk_w(r, th);
            let pz = &(&w * &corner) * &w.adjoint();
            UnitizedElement::from_full(&alg, corner.clone(), vec![pz])
        },
        tol,
    )?;
    let (mut unitary, mut lift, mut worst) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..grid {
        for j in 0..grid {
            let r = i as f64 / (grid - 1) as f64;
            let th = 2.0 * PI * j as f64 / (grid - 1) as f64;
            let w = disk_w(r, th);
            unitary = unitary.max(crate::matcore::unitary_defect(&w));
            worst = worst.max(p.at(i, j).blocks[0].dist(&disk_expected_projection(r, th)));
            if i == grid - 1 {
                // On the circle the lift satisfies w(1⊕0) = z⊕0.
                let mut target = CMatrix::zeros(2, 2);
                target[(0, 0)] = C64::from_polar(r, th);
                lift = lift.max((&w * &corner).dist(&target));
            }
        }
    }
    let projection_defect = p.max_defect(UnitizedElement::projection_defect);
    Ok(DiskIndexReport { grid, max_defect: worst, unitary_defect: unitary, lift_defect: lift, projection_defect, p })
}

/// What a fixture is built from.
#[allow(clippy::large_enum_variant)]
#[derive(Debug, Clone, PartialEq)]
pub enum FixtureData {
    KData { a: KData, b: KData, phi0: IntMatrix, phi1: IntMatrix },
    FiniteDimensional { hom: Homomorphism, triple: Option<(Triple, Vec<i64>)> },
    Disk,
    IntervalEndpoint(IntervalEndpointLadder),
}

/// A worked example with its expected relative groups, given as nontrivial
/// invariant factors (0 for ℤ).
#[derive(Debug, Clone, PartialEq)]
pub struct Fixture {
    pub name: String,
    pub title: String,
    pub data: FixtureData,
    pub expected_k0: Option<Vec<i64>>,
    pub expected_k1: Option<Vec<i64>>,
}

/// One expectation of a fixture run.
#[derive(Debug, Clone, PartialEq)]
pub struct FixtureCheck {
    pub what: String,
    pub expected: String,
    pub actual: String,
    pub ok: bool,
}

fn check(what: &str, expected: impl Into<String>, actual: impl Into<String>, ok: bool) -> FixtureCheck {
    FixtureCheck { what: what.into(), expected: expected.into(), actual: actual.into(), ok }
}

fn describe_factors(f: &[i64]) -> String {
    GroupPresentation::cyclic(f, (0..f.len()).map(|k| k.to_string()).collect())
        .map(|g| g.describe())
        .unwrap_or_else(|_| "?".into())
}

/// The diagonal inclusion `ℂ⊕ℂ → M₂`.
pub fn diagonal_inclusion() -> Homomorphism {
    let a = FDAlgebra::new(vec![1, 1], "C+C").expect("algebra");
    let b = FDAlgebra::new(vec![2], "M2").expect("algebra");
    Homomorphism::from_multiplicities(&a, &b, &[vec![1, 1]], "diag").expect("hom")
}

/// The diagonal embedding `ℂ → ℂ⊕ℂ`, `d ↦ (d, d)`.
pub fn diagonal_embedding() -> Homomorphism {
    let a = FDAlgebra::new(vec![1], "C").expect("algebra");
    let b = FDAlgebra::new(vec![1, 1], "C+C").expect("algebra");
    Homomorphism::from_multiplicities(&a, &b, &[vec![1], vec![1]], "embed").expect("hom")
}

/// `(v*v, vv*, v)` for the diagonal inclusion with v the matrix unit e₁₂.
pub fn shift_generator() -> K0Triple {
    let hom = diagonal_inclusion();
    let p = UnitizedElement::minimal_projection(&hom.source, 1);
    let q = UnitizedElement::minimal_projection(&hom.source, 0);
    let v = UnitizedElement::from_blocks(&hom.target, vec![CMatrix::unit(2, 0, 1)]).expect("element");
    K0Triple::new(p, q, v, &hom).expect("triple")
}

/// `(p, p, g)` for the diagonal embedding with p = 1 ∈ ℂ (scalar part 0)
/// and `g(s) = (e^{2πis}p, p)`.
pub fn rotating_loop_triple(grid: usize, tol: Tolerance) -> Result<K1Triple> {
    let hom = diagonal_embedding();
    let p = UnitizedElement::minimal_projection(&hom.source, 0);
    let g = SampledElement::from_fn(
        grid,
        Boundary::EndpointsEqual,
        |s| {
            let blocks = vec![CMatrix::identity(1).scale(crate::algmodel::circle(s)), CMatrix::identity(1)];
            UnitizedElement::from_blocks(&hom.target, blocks)
        },
        tol,
    )?;
    K1Triple::new(p.clone(), p, g, &hom)
}

fn quotient_onto_first_block() -> Homomorphism {
    let a = FDAlgebra::new(vec![1, 2], "C+M2").expect("algebra");
    let q = FDAlgebra::new(vec![1], "C").expect("algebra");
    Homomorphism::from_multiplicities(&a, &q, &[vec![1, 0]], "quotient").expect("hom")
}

fn ideal_inclusion() -> Homomorphism {
    let i = FDAlgebra::new(vec![2], "M2").expect("algebra");
    let a = FDAlgebra::new(vec![1, 2], "C+M2").expect("algebra");
    Homomorphism::from_multiplicities(&i, &a, &[vec![0], vec![1]], "inclusion").expect("hom")
}

pub fn fixtures() -> Vec<Fixture> {
    let tol = Tolerance::default();
    let mut out = vec![
        Fixture {
            name: "ex2_5_i".into(),
            title: "K*(B) = 0: relative groups equal K*(A) (A = C(S^1), B with vanishing K-theory)".into(),
            data: FixtureData::KData {
                a: KData::circle("C(S^1)"),
                b: KData::zero("B(H)"),
                phi0: IntMatrix::zeros(0, 1),
                phi1: IntMatrix::zeros(0, 1),
            },
            expected_k0: Some(vec![0]),
            expected_k1: Some(vec![0]),
        },
        Fixture {
            name: "ex2_5_ii".into(),
            title: "K*(A) = 0: K_j(phi) equals K_{1-j}(B) (A with vanishing K-theory, B = C(S^1))".into(),
            data: FixtureData::KData {
                a: KData::zero("C_0(0,1]"),
                b: KData::circle("C(S^1)"),
                phi0: IntMatrix::zeros(1, 0),
                phi1: IntMatrix::zeros(1, 0),
            },
            expected_k0: Some(vec![0]),
            expected_k1: Some(vec![0]),
        },
        Fixture {
            name: "ex2_5_iii".into(),
            title: "quotient map A -> A/I: K_j(phi) equals K_j(I) (instance A = C+M2, I = M2)".into(),
            data: FixtureData::FiniteDimensional { hom: quotient_onto_first_block(), triple: None },
            expected_k0: Some(vec![0]),
            expected_k1: Some(vec![]),
        },
        Fixture {
            name: "ex2_5_iv".into(),
            title: "ideal inclusion I -> A: K_j(I;A) equals K_{1-j}(A/I) (instance I = M2, A = C+M2)".into(),
            data: FixtureData::FiniteDimensional { hom: ideal_inclusion(), triple: None },
            expected_k0: Some(vec![]),
            expected_k1: Some(vec![0]),
        },
        Fixture {
            name: "ex2_6".into(),
            title: "diagonal matrices in M2(C): K0(A;B) = Z generated by (v*v, vv*, v), K1(A;B) = 0".into(),
            data: FixtureData::FiniteDimensional {
                hom: diagonal_inclusion(),
                triple: Some((Triple::K0(shift_generator()), vec![1])),
            },
            expected_k0: Some(vec![0]),
            expected_k1: Some(vec![]),
        },
    ];
    let ex27 = rotating_loop_triple(crate::algmodel::DEFAULT_GRID, tol).ok().map(|t| (Triple::K1(t), vec![1]));
    out.push(Fixture {
        name: "ex2_7".into(),
        title: "C embedded diagonally in C+C: K0 = 0, K1 = Z generated by (p, p, g)".into(),
        data: FixtureData::FiniteDimensional { hom: diagonal_embedding(), triple: ex27 },
        expected_k0: Some(vec![]),
        expected_k1: Some(vec![0]),
    });
    out.push(Fixture {
        name: "ex2_8".into(),
        title: "index map C(S^1) -> C[0,1] over the disk: displayed Bott-type projection".into(),
        data: FixtureData::Disk,
        expected_k0: None,
        expected_k1: None,
    });
    out.push(Fixture {
        name: "ex2_9".into(),
        title: "C[0,1] -> M2 through the endpoints: K0(phi) = 0, K1(phi) = Z/2, d0 = -2".into(),
        data: FixtureData::IntervalEndpoint(IntervalEndpointLadder::new(diagonal_inclusion()).expect("ladder")),
        expected_k0: Some(vec![]),
        expected_k1: Some(vec![2]),
    });
    out
}

fn group_checks(f: &Fixture, k0: &GroupPresentation, k1: &GroupPresentation) -> Vec<FixtureCheck> {
    let mut out = Vec::new();
    if let Some(e) = &f.expected_k0 {
        out.push(check("K0(phi)", describe_factors(e), k0.describe(), k0.is_isomorphic_to(e)));
    }
    if let Some(e) = &f.expected_k1 {
        out.push(check("K1(phi)", describe_factors(e), k1.describe(), k1.is_isomorphic_to(e)));
    }
    out
}

/// Runs every expectation of a fixture.
pub fn run_fixture(f: &Fixture, grid: usize, tol: Tolerance) -> Result<Vec<FixtureCheck>> {
    match &f.data {
        FixtureData::KData { a, b, phi0, phi1 } => {
            let (k0, k1) = relative_groups_kdata(a, b, phi0, phi1)?;
            Ok(group_checks(f, &k0, &k1))
        }
        FixtureData::FiniteDimensional { hom, triple } => {
            let rg = relative_groups_fd(hom, grid, tol)?;
            let mut out = group_checks(f, &rg.k0.group, &rg.k1.group);
            let rep = six_term_thm1(hom, grid, tol)?;
            out.push(check("six-term sequence", "exact", if rep.all_exact() { "exact" } else { "not exact" }, rep.all_exact()));
            if let Some((t, expected)) = triple {
                let (valid, class) = match t {
                    Triple::K0(t) => (t.validate(tol).is_ok(), class_of_k0_triple_fd(t, &rg)?),
                    Triple::K1(t) => (t.validate(tol).is_ok(), class_of_k1_triple_fd(t, None, &rg, tol)?),
                    _ => (false, Vec::new()),
                };
                out.push(check("displayed triple validates", "ok", if valid { "ok" } else { "invalid" }, valid));
                out.push(check("class of displayed triple", format!("{expected:?}"), format!("{class:?}"), class == *expected));
            }
            Ok(out)
        }
        FixtureData::Disk => {
            let r = disk_index_check(grid, tol)?;
            let ok = r.passes(1e-6);
            Ok(vec![check("index map first entry vs displayed matrix", "max defect <= 1e-6", format!("{:.2e}", r.max_defect.max(r.projection_defect).max(r.lift_defect)), ok)])
        }
        FixtureData::IntervalEndpoint(lad) => {
            let k0 = lad.k0_phi()?;
            let k1 = lad.k1_phi()?;
            let mut out = group_checks(f, &k0.group, &k1.group);
            let n = 1;
            let g = SampledElement::from_fn(
                grid,
                Boundary::EndpointsEqual,
                |s| {
                    let m = CMatrix::from_diag(&[crate::algmodel::circle(s), C64::new(1.0, 0.0)]);
                    UnitizedElement::from_full(&lad.gamma.target, CMatrix::identity(n), vec![m])
                },
                tol,
            )?;
            let one_d = SampledElement::constant(&UnitizedElement::identity(&lad.gamma.source, n), grid);
            let c = lad.k1_phi_class(&g, &one_d, tol)?;
            let nonzero = !k1.group.is_zero(&c)?;
            out.push(check("class of (1,1,g)", "nonzero", format!("{c:?}"), nonzero));
            let gg = g.direct_sum(&g)?;
            let one2 = SampledElement::constant(&UnitizedElement::identity(&lad.gamma.source, 2), grid);
            let c2 = lad.k1_phi_class(&gg, &one2, tol)?;
            let zero = k1.group.is_zero(&c2)?;
            out.push(check("class of (1,1,g) + (1,1,g)", "0", format!("{c2:?}"), zero));
            let b = lad.exp_boundary(&shift_generator(), grid, tol)?;
            out.push(check("d0 of the generator", "-2", b.class.to_string(), b.class == -2));
            let rep = lad.report(grid, tol)?;
            out.push(check("six-term sequence", "exact", if rep.all_exact() { "exact" } else { "not exact" }, rep.all_exact()));
            Ok(out)
        }
    }
}
