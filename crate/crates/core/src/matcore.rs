//! Dense complex matrices and the spectral primitives used by every
//! constructive formula: Hermitian eigensolver, corner inverse square roots,
//! exponentials, polar decomposition and the projection attached to an
//! idempotent.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Tolerance for composite post-conditions (products of inverse square roots
/// and the like accumulate more rounding than single identities).
pub const COMPOSITE_EPS: f64 = 1e-7;

/// Absolute entrywise bound used by membership predicates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub eps: f64,
}

impl Tolerance {
    pub fn new(eps: f64) -> Result<Self> {
        if eps > 0.0 && eps.is_finite() {
            Ok(Tolerance { eps })
        } else {
            Err(Error::Shape(format!("tolerance must be positive, got {eps}")))
        }
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { eps: 1e-9 }
    }
}

/// Row-major dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CMatrix { rows, cols, data }
    }

    /// Builds a matrix from row-major data, rejecting non-finite entries.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Shape("non-finite entry".into()));
        }
        Ok(CMatrix { rows, cols, data })
    }

    pub fn from_real(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        Self::from_fn(r, c, |i, j| C64::new(rows[i][j], 0.0))
    }

    pub fn from_diag(d: &[C64]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, &z) in d.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    pub fn from_real_diag(d: &[f64]) -> Self {
        Self::from_diag(&d.iter().map(|&x| C64::new(x, 0.0)).collect::<Vec<_>>())
    }

    /// `1_k ⊕ 0_{n-k}`.
    pub fn unit_corner(k: usize, n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..k.min(n) {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Matrix unit e_{ij} in M_n.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m[(i, j)] = ONE;
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, z: C64) -> Self {
        CMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| x * z).collect() }
    }

    pub fn scale_re(&self, x: f64) -> Self {
        self.scale(C64::new(x, 0.0))
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn fro_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Operator norm, via the top eigenvalue of m*m.
    pub fn op_norm(&self) -> f64 {
        if self.data.is_empty() {
            return 0.0;
        }
        let g = &self.adjoint() * self;
        match herm_eig(&g.hermitian_part(), Tolerance { eps: 1.0 }) {
            Ok((vals, _)) => vals.first().copied().unwrap_or(0.0).max(0.0).sqrt(),
            Err(_) => self.fro_norm(),
        }
    }

    /// Max entry distance; infinite on shape mismatch.
    pub fn dist(&self, other: &CMatrix) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn hermitian_part(&self) -> Self {
        (self + &self.adjoint()).scale_re(0.5)
    }

    pub fn kron(&self, other: &CMatrix) -> Self {
        let (r2, c2) = (other.rows, other.cols);
        Self::from_fn(self.rows * r2, self.cols * c2, |i, j| {
            self[(i / r2, j / c2)] * other[(i % r2, j % c2)]
        })
    }

    pub fn direct_sum(&self, other: &CMatrix) -> Self {
        let mut m = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        m.set_block(0, 0, self);
        m.set_block(self.rows, self.cols, other);
        m
    }

    pub fn block_diag(blocks: &[CMatrix]) -> Self {
        let r = blocks.iter().map(|b| b.rows).sum();
        let c = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(r, c);
        let (mut i, mut j) = (0, 0);
        for b in blocks {
            m.set_block(i, j, b);
            i += b.rows;
            j += b.cols;
        }
        m
    }

    /// Assembles a matrix from a rectangular grid of blocks.
    pub fn from_blocks(grid: &[Vec<CMatrix>]) -> Self {
        let rows: usize = grid.iter().map(|row| row[0].rows).sum();
        let cols: usize = grid[0].iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(rows, cols);
        let mut i = 0;
        for row in grid {
            let mut j = 0;
            for b in row {
                m.set_block(i, j, b);
                j += b.cols;
            }
            i += row[0].rows;
        }
        m
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)])
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &CMatrix) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(r0 + i, c0 + j)] = b[(i, j)];
            }
        }
    }

    /// Embeds into the top-left corner of an n×n zero matrix.
    pub fn pad_to(&self, n: usize) -> Self {
        let mut m = Self::zeros(n.max(self.rows), n.max(self.cols));
        m.set_block(0, 0, self);
        m
    }

    /// LU with partial pivoting; `None` when a pivot falls below 1e-14 relative
    /// to the largest entry.
    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let piv = (col..n).max_by(|&x, &y| a[(x, col)].norm().total_cmp(&a[(y, col)].norm()))?;
            if a[(piv, col)].norm() <= 1e-14 * scale {
                return None;
            }
            if piv != col {
                for k in 0..n {
                    a.data.swap(piv * n + k, col * n + k);
                    inv.data.swap(piv * n + k, col * n + k);
                }
            }
            let d = a[(col, col)].inv();
            for k in 0..n {
                a[(col, k)] *= d;
                inv[(col, k)] *= d;
            }
            for r in 0..n {
                if r != col {
                    let f = a[(r, col)];
                    if f != ZERO {
                        for k in 0..n {
                            let ack = a[(col, k)];
                            let ick = inv[(col, k)];
                            a[(r, k)] -= f * ack;
                            inv[(r, k)] -= f * ick;
                        }
                    }
                }
            }
        }
        Some(inv)
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn det(&self) -> C64 {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut det = ONE;
        for col in 0..n {
            let piv = (col..n)
                .max_by(|&x, &y| a[(x, col)].norm().total_cmp(&a[(y, col)].norm()))
                .unwrap();
            if a[(piv, col)].norm() == 0.0 {
                return ZERO;
            }
            if piv != col {
                for k in 0..n {
                    a.data.swap(piv * n + k, col * n + k);
                }
                det = -det;
            }
            let d = a[(col, col)];
            det *= d;
            for r in col + 1..n {
                let f = a[(r, col)] / d;
                for k in col..n {
                    let ack = a[(col, k)];
                    a[(r, k)] -= f * ack;
                }
            }
        }
        det
    }

    pub fn classify(&self, tol: Tolerance) -> Flags {
        classify(self, tol)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }
}

impl Mul for CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: CMatrix) -> CMatrix {
        &self * &rhs
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix sum shape mismatch");
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Add for CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: CMatrix) -> CMatrix {
        &self + &rhs
    }
}

impl AddAssign<&CMatrix> for CMatrix {
    fn add_assign(&mut self, rhs: &CMatrix) {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix sum shape mismatch");
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix difference shape mismatch");
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Sub for CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: CMatrix) -> CMatrix {
        &self - &rhs
    }
}

impl Neg for &CMatrix {
    type Output = CMatrix;
    fn neg(self) -> CMatrix {
        self.scale_re(-1.0)
    }
}

/// Membership flags returned by [`classify`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Flags {
    pub idempotent: bool,
    pub projection: bool,
    pub partial_isometry: bool,
    pub unitary: bool,
    pub self_adjoint: bool,
}

pub fn idempotent_defect(m: &CMatrix) -> f64 {
    (m * m).dist(m)
}

pub fn self_adjoint_defect(m: &CMatrix) -> f64 {
    m.dist(&m.adjoint())
}

pub fn projection_defect(m: &CMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    idempotent_defect(m).max(self_adjoint_defect(m))
}

/// Defect of m*m being a projection.
pub fn partial_isometry_defect(m: &CMatrix) -> f64 {
    let s = &m.adjoint() * m;
    idempotent_defect(&s)
}

pub fn unitary_defect(m: &CMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    let id = CMatrix::identity(m.rows());
    (&m.adjoint() * m).dist(&id).max((m * &m.adjoint()).dist(&id))
}

pub fn classify(m: &CMatrix, tol: Tolerance) -> Flags {
    if !m.is_square() {
        return Flags { partial_isometry: partial_isometry_defect(m) <= tol.eps, ..Flags::default() };
    }
    let idempotent = idempotent_defect(m) <= tol.eps;
    let self_adjoint = self_adjoint_defect(m) <= tol.eps;
    Flags {
        idempotent,
        projection: idempotent && self_adjoint,
        partial_isometry: partial_isometry_defect(m) <= tol.eps,
        unitary: unitary_defect(m) <= tol.eps,
        self_adjoint,
    }
}

const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.
/// Eigenvalues are returned in descending order; column k of the unitary is
/// the eigenvector for eigenvalue k.
pub fn herm_eig(m: &CMatrix, tol: Tolerance) -> Result<(Vec<f64>, CMatrix)> {
    if !m.is_square() {
        return Err(Error::Shape(format!("eigenproblem for {}x{} matrix", m.rows(), m.cols())));
    }
    let asym = self_adjoint_defect(m);
    if asym > tol.eps * m.max_abs().max(1.0) {
        return Err(Error::NotHermitian(asym));
    }
    let n = m.rows();
    let mut a = m.hermitian_part();
    let mut v = CMatrix::identity(n);
    let scale = a.fro_norm();
    let target = 1e-14 * scale;
    let mut converged = n <= 1;
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= target || off == 0.0 {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let g = a[(p, q)];
                let r = g.norm();
                if r <= f64::MIN_POSITIVE {
                    continue;
                }
                let phase = g / r;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (2.0 * r);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // J = diag(1, conj(phase)) * [[c, s], [-s, c]]
                let j00 = C64::new(c, 0.0);
                let j01 = C64::new(s, 0.0);
                let j10 = -phase.conj() * s;
                let j11 = phase.conj() * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * j00 + akq * j10;
                    a[(k, q)] = akp * j01 + akq * j11;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = j00.conj() * apk + j10.conj() * aqk;
                    a[(q, k)] = j01.conj() * apk + j11.conj() * aqk;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * j00 + vkq * j10;
                    v[(k, q)] = vkp * j01 + vkq * j11;
                }
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence(MAX_SWEEPS));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[(y, y)].re.total_cmp(&a[(x, x)].re));
    let vals = order.iter().map(|&k| a[(k, k)].re).collect();
    let vecs = CMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok((vals, vecs))
}

/// Applies a real function to the spectrum of a Hermitian matrix.
pub fn herm_fn(m: &CMatrix, f: impl Fn(f64) -> C64) -> Result<CMatrix> {
    let (vals, v) = herm_eig(m, Tolerance { eps: 1e-8 })?;
    let d = CMatrix::from_diag(&vals.iter().map(|&x| f(x)).collect::<Vec<_>>());
    Ok(&(&v * &d) * &v.adjoint())
}

/// Real power of a positive matrix on the corner cut out by `support`.
/// Eigenvalues at or below eps must belong to eigenvectors orthogonal to the
/// support; anything else is reported as singular.
pub fn psd_corner_power(m: &CMatrix, support: &CMatrix, exponent: f64, tol: Tolerance) -> Result<CMatrix> {
    if m.rows() != support.rows() || !m.is_square() || !support.is_square() {
        return Err(Error::Shape("corner power: matrix and support differ in shape".into()));
    }
    let (vals, v) = herm_eig(&m.hermitian_part(), Tolerance { eps: 1e-6 })?;
    let n = m.rows();
    let mut out = CMatrix::zeros(n, n);
    for (k, &lam) in vals.iter().enumerate() {
        let col = v.block(0, k, n, 1);
        if lam > tol.eps {
            let w = lam.powf(exponent);
            out += &(&col * &col.adjoint()).scale_re(w);
        } else {
            let on_support = (support * &col).fro_norm();
            if on_support > 1e-6 {
                return Err(Error::SingularOnSupport(lam));
            }
        }
    }
    Ok(&(support * &out) * support)
}

/// `s` with `s·m·s = support`, computed in the corner `support·M·support`.
pub fn inv_sqrt_psd(m: &CMatrix, support: &CMatrix, tol: Tolerance) -> Result<CMatrix> {
    let s = psd_corner_power(m, support, -0.5, tol)?;
    let check = (&(&s * m) * &s).dist(support);
    if check > COMPOSITE_EPS {
        return Err(Error::SingularOnSupport(check));
    }
    Ok(s)
}

/// `exp(2πi t m)` for Hermitian m; projections use `1 + (e^{2πit} - 1) m`.
pub fn herm_exp_2pi(m: &CMatrix, t: f64) -> Result<CMatrix> {
    let asym = self_adjoint_defect(m);
    if asym > 1e-9 * m.max_abs().max(1.0) {
        return Err(Error::NotHermitian(asym));
    }
    let phase = C64::from_polar(1.0, 2.0 * PI * t);
    if idempotent_defect(m) <= 1e-12 {
        return Ok(&CMatrix::identity(m.rows()) + &m.scale(phase - ONE));
    }
    herm_fn(m, |x| C64::from_polar(1.0, 2.0 * PI * t * x))
}

/// `exp(i π t (1 - u) / 2)`, the canonical path from 1 to a self-adjoint
/// unitary u. Since (1 - u)/2 is a projection this is a closed form.
pub fn self_adjoint_unitary_path(u: &CMatrix, t: f64) -> CMatrix {
    let n = u.rows();
    let proj = (&CMatrix::identity(n) - u).scale_re(0.5);
    let phase = C64::from_polar(1.0, PI * t);
    &CMatrix::identity(n) + &proj.scale(phase - ONE)
}

/// Polar part `(b b*)^{-1/2} b` of a corner-invertible morphism src → dst.
pub fn polar_partial_isometry(b: &CMatrix, src: &CMatrix, dst: &CMatrix, tol: Tolerance) -> Result<CMatrix> {
    let bbs = b * &b.adjoint();
    let s = inv_sqrt_psd(&bbs, dst, tol)?;
    let v = &s * b;
    let d_src = (&v.adjoint() * &v).dist(src);
    let d_dst = (&v * &v.adjoint()).dist(dst);
    if d_src > COMPOSITE_EPS || d_dst > COMPOSITE_EPS {
        return Err(Error::SingularOnSupport(d_src.max(d_dst)));
    }
    Ok(v)
}

/// `(b b*)^{-t/2} b`, the straight polar homotopy from b (t = 0) to its
/// partial isometry (t = 1).
pub fn polar_path_point(b: &CMatrix, dst: &CMatrix, t: f64, tol: Tolerance) -> Result<CMatrix> {
    let bbs = b * &b.adjoint();
    Ok(&psd_corner_power(&bbs, dst, -t / 2.0, tol)? * b)
}

/// The projection `e e* (1 + (e - e*)(e* - e))^{-1}` with the same range as
/// the idempotent e.
pub fn rho_projection(e: &CMatrix, tol: Tolerance) -> Result<CMatrix> {
    if !e.is_square() {
        return Err(Error::Shape("rho of a non-square matrix".into()));
    }
    let d = idempotent_defect(e);
    if d > tol.eps.max(1e-9) {
        return Err(Error::NotIdempotent(d));
    }
    let n = e.rows();
    let es = e.adjoint();
    let diff = e - &es;
    let k = &CMatrix::identity(n) + &(&diff * &(&es - e));
    let kinv = k.inverse().ok_or(Error::NotIdempotent(d))?;
    let r = &(e * &es) * &kinv;
    Ok(r.hermitian_part())
}

/// How far `b` is from failing to be an invertible morphism `src → dst`
/// between idempotents: the smallest nonzero singular value it needs, or 0
/// when the ranks disagree. Returns +∞ when both corners are zero.
pub fn corner_conditioning(b: &CMatrix, src: &CMatrix, dst: &CMatrix) -> Result<f64> {
    let r_src = src.trace().re.round() as i64;
    let r_dst = dst.trace().re.round() as i64;
    if r_src != r_dst || r_src < 0 {
        return Ok(0.0);
    }
    if r_src == 0 {
        return Ok(f64::INFINITY);
    }
    let (vals, _) = herm_eig(&(&b.adjoint() * b).hermitian_part(), Tolerance { eps: 1e-6 })?;
    let r = r_src as usize;
    if r > vals.len() {
        return Ok(0.0);
    }
    Ok(vals[r - 1].max(0.0).sqrt())
}

/// Hermitian logarithm of a unitary: returns h with `u = exp(i h)` and the
/// spectrum of h in (-π, π].
pub fn unitary_log(u: &CMatrix) -> Result<CMatrix> {
    let d = unitary_defect(u);
    if d > 1e-7 {
        return Err(Error::NotUnitary(d));
    }
    let n = u.rows();
    // u is normal, so its Hermitian and anti-Hermitian parts commute; a
    // generic real combination has a common eigenbasis.
    let re = u.hermitian_part();
    let im = (u - &u.adjoint()).scale(C64::new(0.0, -0.5));
    let mix = &re + &im.scale_re(0.618_033_988_749_894_9);
    let (_, v) = herm_eig(&mix.hermitian_part(), Tolerance { eps: 1e-6 })?;
    let diag = &(&v.adjoint() * u) * &v;
    let mut angles = Vec::with_capacity(n);
    for k in 0..n {
        let z = diag[(k, k)];
        let mut a = z.arg();
        if a <= -PI + 1e-12 {
            a = PI;
        }
        angles.push(C64::new(a, 0.0));
    }
    let h = &(&v * &CMatrix::from_diag(&angles)) * &v.adjoint();
    Ok(h.hermitian_part())
}

/// `exp(i s h)` for Hermitian h.
pub fn exp_i(h: &CMatrix, s: f64) -> Result<CMatrix> {
    herm_fn(h, |x| C64::from_polar(1.0, s * x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn eig_of_diagonal_is_trivial() {
        let m = CMatrix::from_real_diag(&[3.0, 1.0]);
        let (vals, v) = herm_eig(&m, Tolerance::default()).unwrap();
        assert_eq!(vals, vec![3.0, 1.0]);
        assert!(v.dist(&CMatrix::identity(2)) < 1e-15);
    }

    #[test]
    fn eig_of_pauli_x() {
        let m = CMatrix::from_real(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let (vals, _) = herm_eig(&m, Tolerance::default()).unwrap();
        assert!((vals[0] - 1.0).abs() < 1e-14 && (vals[1] + 1.0).abs() < 1e-14);
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = CMatrix::from_real(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(herm_eig(&m, Tolerance::default()), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn complex_eig_reconstructs() {
        let m = CMatrix::from_fn(3, 3, |i, j| {
            if i == j {
                c(i as f64, 0.0)
            } else if i < j {
                c(0.3 * (i + 1) as f64, 0.7 * j as f64)
            } else {
                c(0.3 * (j + 1) as f64, -0.7 * i as f64)
            }
        });
        let (vals, v) = herm_eig(&m, Tolerance::default()).unwrap();
        let rec = &(&v * &CMatrix::from_real_diag(&vals)) * &v.adjoint();
        assert!(rec.dist(&m) < 1e-12);
        assert!(vals.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn inv_sqrt_scalar_corner() {
        let p = CMatrix::from_real_diag(&[1.0, 0.0, 1.0]);
        let s = inv_sqrt_psd(&p.scale_re(4.0), &p, Tolerance::default()).unwrap();
        assert!(s.dist(&p.scale_re(0.5)) < 1e-12);
        let id = CMatrix::identity(3);
        assert!(inv_sqrt_psd(&id, &id, Tolerance::default()).unwrap().dist(&id) < 1e-12);
    }

    #[test]
    fn inv_sqrt_detects_singular_corner() {
        let m = CMatrix::from_real_diag(&[1.0, 0.0]);
        let id = CMatrix::identity(2);
        assert!(matches!(inv_sqrt_psd(&m, &id, Tolerance::default()), Err(Error::SingularOnSupport(_))));
    }

    #[test]
    fn exp_closed_forms() {
        let p = CMatrix::from_real_diag(&[1.0, 0.0]);
        let e1 = herm_exp_2pi(&p, 1.0).unwrap();
        assert!(e1.dist(&CMatrix::identity(2)) < 1e-14);
        let eh = herm_exp_2pi(&p, 0.5).unwrap();
        assert!(eh.dist(&CMatrix::from_real_diag(&[-1.0, 1.0])) < 1e-14);
    }

    #[test]
    fn polar_kills_positive_scalars() {
        let p = CMatrix::from_real_diag(&[1.0, 0.0]);
        let v = polar_partial_isometry(&p.scale_re(2.0), &p, &p, Tolerance::default()).unwrap();
        assert!(v.dist(&p) < 1e-12);
        let u = CMatrix::from_real(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let id = CMatrix::identity(2);
        assert!(polar_partial_isometry(&u, &id, &id, Tolerance::default()).unwrap().dist(&u) < 1e-12);
    }

    #[test]
    fn classify_examples() {
        let id = classify(&CMatrix::identity(2), Tolerance::default());
        assert!(id.idempotent && id.projection && id.partial_isometry && id.unitary && id.self_adjoint);
        let e = classify(&CMatrix::from_real(&[&[1.0, 1.0], &[0.0, 0.0]]), Tolerance::default());
        assert!(e.idempotent && !e.projection);
        let s = classify(&CMatrix::from_real(&[&[0.0, 1.0], &[0.0, 0.0]]), Tolerance::default());
        assert!(s.partial_isometry && !s.unitary);
    }

    #[test]
    fn rho_examples() {
        let tol = Tolerance::default();
        let e = CMatrix::from_real(&[&[1.0, 1.0], &[0.0, 0.0]]);
        let r = rho_projection(&e, tol).unwrap();
        assert!(r.dist(&CMatrix::from_real_diag(&[1.0, 0.0])) < 1e-14);
        let p = CMatrix::from_real_diag(&[0.0, 1.0]);
        assert!(rho_projection(&p, tol).unwrap().dist(&p) < 1e-14);
        let z = CMatrix::zeros(2, 2);
        assert!(rho_projection(&z, tol).unwrap().dist(&z) < 1e-14);
        assert!(matches!(
            rho_projection(&CMatrix::from_real_diag(&[2.0, 0.0]), tol),
            Err(Error::NotIdempotent(_))
        ));
    }

    #[test]
    fn unitary_log_round_trip() {
        let u = CMatrix::from_real(&[&[0.0, -1.0], &[1.0, 0.0]]);
        let h = unitary_log(&u).unwrap();
        assert!(exp_i(&h, 1.0).unwrap().dist(&u) < 1e-12);
        let m = CMatrix::from_real_diag(&[-1.0, 1.0]);
        let hm = unitary_log(&m).unwrap();
        assert!(exp_i(&hm, 1.0).unwrap().dist(&m) < 1e-12);
    }

    #[test]
    fn self_adjoint_path_endpoints() {
        let u = CMatrix::from_real_diag(&[1.0, -1.0]);
        assert!(self_adjoint_unitary_path(&u, 0.0).dist(&CMatrix::identity(2)) < 1e-15);
        assert!(self_adjoint_unitary_path(&u, 1.0).dist(&u) < 1e-15);
    }

    #[test]
    fn det_and_inverse() {
        let m = CMatrix::from_real(&[&[2.0, 1.0], &[1.0, 3.0]]);
        assert!((m.det() - c(5.0, 0.0)).norm() < 1e-14);
        let inv = m.inverse().unwrap();
        assert!((&m * &inv).dist(&CMatrix::identity(2)) < 1e-14);
        assert!(CMatrix::zeros(2, 2).inverse().is_none());
    }
}
