//! The explicit maps between ordinary and relative K-groups, on concrete
//! representatives: μ₀, ν₀, μ₁, ν₁, the splittings λ when φ = 0, the p_v
//! path, the boundary maps of a ladder, the Bott map, θ and the two cone
//! comparison maps Δ₀, Δ₁.

use crate::algmodel::{cone_element, Boundary, ConeElement, Domain, Homomorphism, Ladder, SampledElement, UnitizedElement};
use crate::matcore::{herm_eig, herm_exp_2pi, self_adjoint_unitary_path, unitary_log, exp_i, CMatrix, Tolerance};
use crate::triples::{ensure_valid, is_unit_corner, same_hom, K0Triple, K1Triple, ValidationReport, Violation};
use crate::{Error, Result};


fn node(k: usize, grid: usize) -> f64 {
    k as f64 / (grid - 1) as f64
}

/// Orthonormal basis of the range of a projection, one column per vector.
/// Each vector's largest entry (the first one on ties) is made real and
/// positive, so the result does not depend on eigensolver phases.
pub fn range_basis(p: &CMatrix, tol: Tolerance) -> Result<Vec<CMatrix>> {
    let n = p.rows();
    let (vals, vecs) = herm_eig(&p.hermitian_part(), tol)?;
    let mut out = Vec::new();
    for (k, &lam) in vals.iter().enumerate() {
        if lam <= 0.5 {
            continue;
        }
        let col = vecs.block(0, k, n, 1);
        let big = (0..n).map(|i| col[(i, 0)].norm()).fold(0.0, f64::max);
        let i = (0..n).find(|&i| col[(i, 0)].norm() >= big - 1e-9).unwrap_or(0);
        let z = col[(i, 0)];
        out.push(col.scale(z.conj() / z.norm()));
    }
    Ok(out)
}

/// The partial isometry `Σ_k |y_k⟩⟨x_k|` from the range of p onto the range
/// of q, with bases from [`range_basis`].
pub fn range_isometry(p: &CMatrix, q: &CMatrix, tol: Tolerance) -> Result<CMatrix> {
    let xs = range_basis(p, tol)?;
    let ys = range_basis(q, tol)?;
    if xs.len() != ys.len() {
        return Err(Error::Shape(format!("ranks {} and {} differ", xs.len(), ys.len())));
    }
    let mut v = CMatrix::zeros(p.rows(), p.rows());
    for (x, y) in xs.iter().zip(&ys) {
        v += &(y * &x.adjoint());
    }
    Ok(v)
}

/// `μ₀(u) = (1_n, 1_n, u)` for a unitary u over B̃.
pub fn mu0(u: &UnitizedElement, hom: &Homomorphism, tol: Tolerance) -> Result<K0Triple> {
    let d = u.unitary_defect();
    if d > tol.eps {
        return Err(Error::NotUnitary(d));
    }
    let one = UnitizedElement::identity(&hom.source, u.level);
    K0Triple::new(one.clone(), one, u.clone(), hom)
}

/// `ν₀(p, q, v) = [p] − [q]` as a rank vector in `K₀(A) = ℤ^k`. The scalar
/// parts contribute `n_j([ṗ] − [q̇])` to block j, which is subtracted.
pub fn nu0(sigma: &K0Triple) -> Vec<i64> {
    let (pb, ps) = sigma.p.ranks();
    let (qb, qs) = sigma.q.ranks();
    sigma
        .hom
        .source
        .block_sizes
        .iter()
        .enumerate()
        .map(|(j, &nj)| (pb[j] - qb[j]) - nj as i64 * (ps - qs))
        .collect()
}

/// `μ₁([p] − [q]) = (1_n, 1_n, f_p f_q*)` with `f_p(s) = exp(2πisp)`, a loop
/// based at 1.
pub fn mu1(p: &UnitizedElement, q: &UnitizedElement, hom: &Homomorphism, grid: usize, tol: Tolerance) -> Result<K1Triple> {
    for x in [p, q] {
        let d = x.projection_defect();
        if d > tol.eps {
            return Err(Error::NotProjection(d));
        }
        if !x.algebra.same_shape(&hom.target) {
            return Err(Error::AlgebraMismatch(format!("mu1 takes projections over {}", hom.target.label)));
        }
    }
    let n = p.level.max(q.level);
    let (p, q) = (p.pad_to(n), q.pad_to(n));
    let g = SampledElement::from_fn(
        grid,
        Boundary::EndpointsEqual,
        |s| {
            let fp = p.try_map(|m| herm_exp_2pi(m, s))?;
            let fq = q.try_map(|m| herm_exp_2pi(m, s))?;
            fp.mul(&fq.adjoint())
        },
        tol,
    )?;
    let one = UnitizedElement::identity(&hom.source, n);
    K1Triple::new(one.clone(), one, g, hom)
}

/// `ν₁(p, u, g) = u + 1_n − p`.
pub fn nu1(sigma: &K1Triple) -> Result<UnitizedElement> {
    let one = UnitizedElement::identity(&sigma.hom.source, sigma.level());
    sigma.u.add(&one)?.sub(&sigma.p)
}

/// `λ₀([p] − [q]) = (p, q, v)` for φ = 0, with v the scalar partial
/// isometry from the range of ṗ onto the range of q̇.
pub fn lambda0(p: &UnitizedElement, q: &UnitizedElement, hom: &Homomorphism, tol: Tolerance) -> Result<K0Triple> {
    if !hom.is_zero() {
        return Err(Error::NotZeroHom);
    }
    for x in [p, q] {
        let d = x.projection_defect();
        if d > tol.eps {
            return Err(Error::NotProjection(d));
        }
    }
    let n = p.level.max(q.level);
    let (p, q) = (p.pad_to(n), q.pad_to(n));
    let v = range_isometry(&p.scalar, &q.scalar, tol).map_err(|_| Error::ScalarClassMismatch)?;
    let sigma = K0Triple::new(p, q, UnitizedElement::scalar(&hom.target, v), hom)?;
    ensure_valid(sigma.validate(tol))?;
    Ok(sigma)
}

/// `λ₁([u]) = (1_n, u, g)` for φ = 0, with `g(s) = exp(i s log u̇)` a scalar
/// path from 1 to `u̇ = φ(u)`.
pub fn lambda1(u: &UnitizedElement, hom: &Homomorphism, grid: usize, tol: Tolerance) -> Result<K1Triple> {
    if !hom.is_zero() {
        return Err(Error::NotZeroHom);
    }
    let d = u.unitary_defect();
    if d > tol.eps {
        return Err(Error::NotUnitary(d));
    }
    let h = unitary_log(&u.scalar)?;
    let g = SampledElement::from_fn(grid, Boundary::None, |s| Ok(UnitizedElement::scalar(&hom.target, exp_i(&h, s)?)), tol)?;
    let one = UnitizedElement::identity(&hom.source, u.level);
    K1Triple::new(one, u.clone(), g, hom)
}

/// `[[v, 1 − vv*], [1 − v*v, v*]]`, a unitary at twice the level of the
/// partial isometry v.
pub fn doubling_unitary(v: &UnitizedElement, tol: Tolerance) -> Result<UnitizedElement> {
    let d = v.partial_isometry_defect();
    if d > tol.eps {
        return Err(Error::NotPartialIsometry(d));
    }
    let one = UnitizedElement::identity(&v.algebra, v.level);
    let vs = v.adjoint();
    UnitizedElement::from_grid(&[
        vec![v.clone(), one.sub(&v.mul(&vs)?)?],
        vec![one.sub(&vs.mul(v)?)?, vs],
    ])
}

/// The unitary path `w(s) = exp(iπs(1−S)/2)·exp(iπs(1−T)/2)` from 1 to
/// [`doubling_unitary`], where `S = [[0,1],[1,0]]` and
/// `T = [[1−v*v, v*],[v, 1−vv*]]` are self-adjoint unitaries with `ST` the
/// doubling unitary.
pub fn doubling_path(v: &UnitizedElement, s: f64) -> Result<UnitizedElement> {
    let m = v.level;
    let one = UnitizedElement::identity(&v.algebra, m);
    let zero = UnitizedElement::zero(&v.algebra, m);
    let vs = v.adjoint();
    let swap = UnitizedElement::from_grid(&[vec![zero.clone(), one.clone()], vec![one.clone(), zero]])?;
    let t = UnitizedElement::from_grid(&[
        vec![one.sub(&vs.mul(v)?)?, vs.clone()],
        vec![v.clone(), one.sub(&v.mul(&vs)?)?],
    ])?;
    let a = swap.map(|x| self_adjoint_unitary_path(x, s));
    let b = t.map(|x| self_adjoint_unitary_path(x, s));
    a.mul(&b)
}

/// The projection path `p_v(s) = w(s)*(1_n ⊕ 0_{2m−n})w(s)` over B̃ from the
/// scalar `1_n ⊕ 0` to `φ(p) ⊕ 0_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionPath {
    pub samples: SampledElement,
    pub n: usize,
    pub m: usize,
}

impl ProjectionPath {
    pub fn level(&self) -> usize {
        2 * self.m
    }

    /// Distances of the two endpoints from their prescribed values.
    pub fn endpoint_defects(&self, sigma: &K0Triple) -> Result<(f64, f64)> {
        let start = UnitizedElement::unit_corner(self.samples.algebra(), self.n, 2 * self.m);
        let end = sigma.hom.apply(&sigma.p)?.pad_to(2 * self.m);
        Ok((self.samples.first().dist(&start), self.samples.last().dist(&end)))
    }

    pub fn max_projection_defect(&self) -> f64 {
        self.samples.max_defect(UnitizedElement::projection_defect)
    }
}

/// `n` with `q = 1_n ⊕ 0_{m−n}`, or a hypothesis violation.
fn unit_corner_rank(q: &UnitizedElement, tol: Tolerance) -> Result<usize> {
    is_unit_corner(q, tol).ok_or_else(|| Error::HypothesisViolated("expected q = 1_n + 0 (normalize first)".into()))
}

pub fn p_v_path(sigma: &K0Triple, grid: usize, tol: Tolerance) -> Result<ProjectionPath> {
    ensure_valid(sigma.validate(tol))?;
    let n = unit_corner_rank(&sigma.q, tol)?;
    let m = sigma.level();
    let b = &sigma.hom.target;
    let corner = UnitizedElement::unit_corner(b, n, 2 * m);
    let samples = SampledElement::from_fn(
        grid,
        Boundary::None,
        |s| {
            let w = doubling_path(&sigma.v, s)?;
            w.adjoint().mul(&corner)?.mul(&w)
        },
        tol,
    )?;
    Ok(ProjectionPath { samples, n, m })
}

/// User-supplied lifts for the boundary maps. Missing entries are built by
/// the default constructions.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LiftData {
    pub l: Option<usize>,
    pub w: Option<UnitizedElement>,
    pub h: Option<SampledElement>,
    pub a: Option<UnitizedElement>,
    pub f: Option<SampledElement>,
}

fn lift_check(what: &str, defect: f64, tol: Tolerance) -> Result<()> {
    if defect <= tol.eps {
        Ok(())
    } else {
        Err(Error::LiftInvalid(format!("{what} defect {defect:.3e}")))
    }
}

fn to_lift_error(what: &str) -> impl Fn(Error) -> Error + '_ {
    move |e| Error::LiftInvalid(format!("{what}: {e}"))
}

/// The index map `∂₁: K₁(γ) → K₀(ψ)`:
/// `(1_n, u, g) ↦ (w(1_n⊕0_l)w*, 1_n⊕0_l, (h(1)⊕0_l)φ(w*))`, with w a
/// unitary lift of `u ⊕ u*` (l = n by default) and h a lift of g to the
/// cone of B. Inputs that are not normalized are normalized first.
pub fn index_map(sigma: &K1Triple, ladder: &Ladder, lifts: &LiftData, tol: Tolerance) -> Result<K0Triple> {
    if !same_hom(&sigma.hom, &ladder.gamma) {
        return Err(Error::HomMismatch("index map input must be a triple over gamma".into()));
    }
    ensure_valid(sigma.validate(tol))?;
    let sigma = crate::triples::normalize_k1(&sigma.to_raw(), tol)?;
    let n = sigma.level();
    let a = ladder.a();
    let b = ladder.b();

    let w = match (&lifts.w, lifts.l) {
        (Some(w), _) => w.clone(),
        (None, l) => {
            let l = l.unwrap_or(n);
            if l < n {
                return Err(Error::LiftInvalid(format!("default lift needs l >= n (got l = {l}, n = {n})")));
            }
            let uu = sigma.u.direct_sum(&sigma.u.adjoint())?;
            let w = ladder.lift_from_quotient_a(&uu)?;
            w.direct_sum(&UnitizedElement::identity(a, l - n))?
        }
    };
    if w.level < n || !w.algebra.same_shape(a) {
        return Err(Error::LiftInvalid("w must be over the unitization of A at level n + l".into()));
    }
    let level = w.level;
    lift_check("w unitary", w.unitary_defect(), tol)?;
    let corner_a = UnitizedElement::unit_corner(a, n, level);
    let lhs = ladder.pi_a.apply(&w)?.mul(&UnitizedElement::unit_corner(&ladder.qa_alg, n, level))?;
    lift_check("pi_A(w)(1_n + 0_l) - u + 0_l", lhs.dist(&sigma.u.pad_to(level)), tol)?;

    let h = match &lifts.h {
        Some(h) => h.clone(),
        None => sigma.g.map(|x| ladder.lift_from_quotient_b(x))?,
    };
    if h.grid != sigma.g.grid || h.level() != n || !h.algebra().same_shape(b) {
        return Err(Error::LiftInvalid("h must be sampled like g, over the unitization of B".into()));
    }
    lift_check("h unitary", h.max_defect(UnitizedElement::unitary_defect), tol)?;
    let mut worst: f64 = 0.0;
    for (x, y) in h.samples.iter().zip(&sigma.g.samples) {
        worst = worst.max(ladder.pi_b.apply(x)?.dist(y));
    }
    lift_check("pi_B(h) - g", worst, tol)?;
    lift_check("h(0) scalar", h.first().body_norm(), tol)?;

    let p = w.mul(&corner_a)?.mul(&w.adjoint())?;
    let v = h.last().pad_to(level).mul(&ladder.phi.apply(&w.adjoint())?)?;
    let p = ladder.restrict_to_ideal_a(&p, tol).map_err(to_lift_error("w(1+0)w* is not in the ideal"))?;
    let v = ladder.restrict_to_ideal_b(&v, tol).map_err(to_lift_error("(h(1)+0)phi(w*) is not in the ideal"))?;
    let q = UnitizedElement::unit_corner(&ladder.i_alg, n, level);
    let out = K0Triple::new(p, q, v, &ladder.psi)?;
    ensure_valid(out.validate(tol))?;
    Ok(out)
}

/// Output of [`exp_map`]: the class of the boundary is the negative of the
/// class of `triple`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpMapOutput {
    pub triple: K1Triple,
    pub negated: bool,
}

/// The exponential map `∂₀: K₀(γ) → K₁(ψ)`:
/// `(p, 1_n, v) ↦ −(1_{2m}, exp(2πi(a⊕0_m)), exp(2πif))`, with a a
/// self-adjoint lift of p and f a self-adjoint path over B̃ lifting p_v and
/// ending at `φ(a) ⊕ 0_m`.
pub fn exp_map(sigma: &K0Triple, ladder: &Ladder, lifts: &LiftData, grid: usize, tol: Tolerance) -> Result<ExpMapOutput> {
    if !same_hom(&sigma.hom, &ladder.gamma) {
        return Err(Error::HomMismatch("exponential map input must be a triple over gamma".into()));
    }
    let pv = p_v_path(sigma, grid, tol)?;
    let m = sigma.level();
    let a = match &lifts.a {
        Some(a) => a.clone(),
        None => ladder.lift_from_quotient_a(&sigma.p)?,
    };
    if a.level != m || !a.algebra.same_shape(ladder.a()) {
        return Err(Error::LiftInvalid("a must be over the unitization of A at the level of p".into()));
    }
    lift_check("a self-adjoint", a.self_adjoint_defect(), tol)?;
    lift_check("pi_A(a) - p", ladder.pi_a.apply(&a)?.dist(&sigma.p), tol)?;
    let end = ladder.phi.apply(&a)?.pad_to(2 * m);

    let f = match &lifts.f {
        Some(f) => f.clone(),
        None => {
            let mut samples = Vec::with_capacity(grid);
            for (k, x) in pv.samples.samples.iter().enumerate() {
                let s = node(k, grid);
                let mut y = ladder.lift_from_quotient_b(x)?;
                for &j in &ladder.ideal_b {
                    y.blocks[j] = &y.blocks[j].scale_re(1.0 - s) + &end.blocks[j].scale_re(s);
                }
                samples.push(y);
            }
            SampledElement::new(Domain::Interval, Boundary::None, samples, tol)?
        }
    };
    if f.grid != grid || f.level() != 2 * m || !f.algebra().same_shape(ladder.b()) {
        return Err(Error::LiftInvalid("f must be sampled on the p_v grid at level 2m over B".into()));
    }
    lift_check("f self-adjoint", f.max_defect(UnitizedElement::self_adjoint_defect), tol)?;
    let mut worst: f64 = 0.0;
    for (x, y) in f.samples.iter().zip(&pv.samples.samples) {
        worst = worst.max(ladder.pi_b.apply(x)?.dist(y));
    }
    lift_check("pi_B(f) - p_v", worst, tol)?;
    lift_check("f(1) - phi(a) + 0_m", f.last().dist(&end), tol)?;
    lift_check("f(0) scalar", f.first().body_norm(), tol)?;

    let u = a.pad_to(2 * m).try_map(|x| herm_exp_2pi(x, 1.0))?;
    let u = ladder.restrict_to_ideal_a(&u, tol).map_err(to_lift_error("exp(2 pi i (a + 0)) is not in the ideal"))?;
    let g = f.map(|x| {
        let e = x.try_map(|c| herm_exp_2pi(c, 1.0))?;
        ladder.restrict_to_ideal_b(&e, tol)
    });
    let g = g.map_err(to_lift_error("exp(2 pi i f) is not in the ideal"))?;
    let one = UnitizedElement::identity(&ladder.i_alg, 2 * m);
    let triple = K1Triple::new(one, u, g, &ladder.psi)?;
    ensure_valid(triple.validate(tol))?;
    Ok(ExpMapOutput { triple, negated: true })
}

/// A K1 triple over the suspension of φ: `u(t)` over SÃ and, for each node
/// s of the outer grid, the t-loop `g(s, ·)` over SB̃.
#[derive(Debug, Clone, PartialEq)]
pub struct SuspendedK1Triple {
    pub u: SampledElement,
    pub g: Vec<SampledElement>,
    pub hom: Homomorphism,
}

impl SuspendedK1Triple {
    /// Largest distance from 1 of u and g at t ∈ {0, 1}.
    pub fn loop_defect(&self) -> f64 {
        let n = self.u.level();
        let one_a = UnitizedElement::identity(self.u.algebra(), n);
        let one_b = UnitizedElement::identity(&self.hom.target, n);
        let mut d = self.u.first().dist(&one_a).max(self.u.last().dist(&one_a));
        for gs in &self.g {
            d = d.max(gs.first().dist(&one_b)).max(gs.last().dist(&one_b));
        }
        d
    }

    pub fn validate(&self, tol: Tolerance) -> ValidationReport {
        let mut r = ValidationReport::default();
        let n = self.u.level();
        let one_b = UnitizedElement::identity(&self.hom.target, n);
        r.check("not unitary", "u(t)*u(t) - 1", self.u.max_defect(UnitizedElement::unitary_defect), tol);
        let gu = self.g.iter().map(|gs| gs.max_defect(UnitizedElement::unitary_defect)).fold(0.0, f64::max);
        r.check("not unitary", "g(s,t)*g(s,t) - 1", gu, tol);
        r.check("loop not based", "u(0), u(1), g(s,0), g(s,1) - 1", self.loop_defect(), tol);
        let start = self.g.first().map(|g0| g0.max_defect(|x| x.dist(&one_b))).unwrap_or(f64::INFINITY);
        r.check("start mismatch", "g(0,t) - 1", start, tol);
        let end = match (self.g.last(), self.u.apply(&self.hom)) {
            (Some(g1), Ok(fu)) => g1.samples.iter().zip(&fu.samples).map(|(x, y)| x.dist(y)).fold(0.0, f64::max),
            _ => f64::INFINITY,
        };
        r.check("end mismatch", "g(1,t) - phi(u(t))", end, tol);
        r
    }
}

/// The Bott map `β_φ(p, 1_n, v) = (1_{2m}, u, g)` with
/// `u(t) = exp(2πit(p⊕0_m))·exp(−2πit(1_n⊕0))` and
/// `g(s,t) = exp(2πit·p_v(s))·exp(−2πit(1_n⊕0))`.
pub fn bott(sigma: &K0Triple, grid: usize, tol: Tolerance) -> Result<SuspendedK1Triple> {
    let pv = p_v_path(sigma, grid, tol)?;
    let (n, m) = (pv.n, pv.m);
    let pp = sigma.p.pad_to(2 * m);
    let base = CMatrix::unit_corner(n, 2 * m);
    let unwind = |t: f64| -> Result<CMatrix> { herm_exp_2pi(&base, -t) };
    let u = SampledElement::from_fn(
        grid,
        Boundary::EndpointsEqual,
        |t| pp.try_map(|x| herm_exp_2pi(x, t))?.scalar_mul_right(&unwind(t)?),
        tol,
    )?;
    let mut g = Vec::with_capacity(grid);
    for ps in &pv.samples.samples {
        let loop_s = SampledElement::from_fn(
            grid,
            Boundary::EndpointsEqual,
            |t| ps.try_map(|x| herm_exp_2pi(x, t))?.scalar_mul_right(&unwind(t)?),
            tol,
        )?;
        g.push(loop_s);
    }
    Ok(SuspendedK1Triple { u, g, hom: sigma.hom.clone() })
}

/// A K0 triple over the suspension of φ: P and V are t-paths whose endpoints
/// are the scalar Q.
#[derive(Debug, Clone, PartialEq)]
pub struct SuspendedK0Triple {
    pub p: SampledElement,
    pub q: UnitizedElement,
    pub v: SampledElement,
    pub hom: Homomorphism,
}

impl SuspendedK0Triple {
    pub fn validate(&self, tol: Tolerance) -> ValidationReport {
        let mut r = ValidationReport::default();
        r.check("p not a projection", "P(t)* = P(t) = P(t)^2", self.p.max_defect(UnitizedElement::projection_defect), tol);
        r.check("q not a projection", "q* = q = q^2", self.q.projection_defect(), tol);
        let fq = match self.hom.apply(&self.q) {
            Ok(x) => x,
            Err(_) => {
                r.violations.push(Violation::new("algebra mismatch", "phi(q)", f64::INFINITY));
                return r;
            }
        };
        let mut src: f64 = 0.0;
        let mut dst: f64 = 0.0;
        for (p, v) in self.p.samples.iter().zip(&self.v.samples) {
            let vs = v.adjoint();
            src = src.max(self.hom.apply(p).and_then(|fp| vs.mul(v).map(|x| x.dist(&fp))).unwrap_or(f64::INFINITY));
            dst = dst.max(v.mul(&vs).map(|x| x.dist(&fq)).unwrap_or(f64::INFINITY));
        }
        r.check("source mismatch", "V(t)*V(t) - phi(P(t))", src, tol);
        r.check("range mismatch", "V(t)V(t)* - phi(q)", dst, tol);
        let ends = [self.p.first().dist(&self.q), self.p.last().dist(&self.q)];
        r.check("not suspended", "P(0), P(1) - q", ends[0].max(ends[1]), tol);
        let vends = [self.v.first().dist(&fq), self.v.last().dist(&fq)];
        r.check("not suspended", "V(0), V(1) - phi(q)", vends[0].max(vends[1]), tol);
        r
    }
}

/// `θ_φ(1_n, u, g) = (w(1_n⊕0_n)w*, 1_n⊕0_n, (g⊕0_n)φ(w*))` with w the
/// doubling path from 1 to `u ⊕ u*`, sampled on the grid of g.
pub fn theta(sigma: &K1Triple, tol: Tolerance) -> Result<SuspendedK0Triple> {
    ensure_valid(sigma.validate(tol))?;
    let n = sigma.level();
    let one = UnitizedElement::identity(&sigma.hom.source, n);
    if sigma.p.dist(&one) > tol.eps {
        return Err(Error::HypothesisViolated("theta expects p = 1_n (normalize first)".into()));
    }
    let a = &sigma.hom.source;
    let grid = sigma.g.grid;
    let corner = UnitizedElement::unit_corner(a, n, 2 * n);
    let mut ps = Vec::with_capacity(grid);
    let mut vs = Vec::with_capacity(grid);
    for (k, gk) in sigma.g.samples.iter().enumerate() {
        let w = doubling_path(&sigma.u, node(k, grid))?;
        ps.push(w.mul(&corner)?.mul(&w.adjoint())?);
        vs.push(gk.pad_to(2 * n).mul(&sigma.hom.apply(&w.adjoint())?)?);
    }
    let p = SampledElement::new(Domain::Interval, Boundary::None, ps, tol)?;
    let v = SampledElement::new(Domain::Interval, Boundary::None, vs, tol)?;
    Ok(SuspendedK0Triple { p, q: corner, v, hom: sigma.hom.clone() })
}

/// `Δ₀(p, 1_n, v) = [(p⊕0_m, p_v)] − [1_n ⊕ 0_{2m−n}]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Delta0 {
    pub cone: ConeElement,
    pub subtracted_rank: usize,
    pub level: usize,
}

pub fn cone_delta0(sigma: &K0Triple, grid: usize, tol: Tolerance) -> Result<Delta0> {
    let pv = p_v_path(sigma, grid, tol)?;
    let a = sigma.p.pad_to(2 * pv.m);
    let cone = cone_element(&sigma.hom, &a, &pv.samples, tol)?;
    let d = cone.f.max_defect(UnitizedElement::projection_defect).max(cone.a.projection_defect());
    if d > tol.eps {
        return Err(Error::NotProjection(d));
    }
    Ok(Delta0 { cone, subtracted_rank: pv.n, level: 2 * pv.m })
}

/// `Δ₁(1_n, u, g) = [(u, g)]`.
pub fn cone_delta1(sigma: &K1Triple, tol: Tolerance) -> Result<ConeElement> {
    ensure_valid(sigma.validate(tol))?;
    let one = UnitizedElement::identity(&sigma.hom.source, sigma.level());
    if sigma.p.dist(&one) > tol.eps {
        return Err(Error::HypothesisViolated("Delta_1 expects p = 1_n (normalize first)".into()));
    }
    cone_element(&sigma.hom, &sigma.u, &sigma.g, tol)
}
