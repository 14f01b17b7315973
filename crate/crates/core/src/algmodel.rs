//! Algebras and their elements: finite-dimensional C*-algebras, elements of
//! matrix algebras over their unitizations, homomorphisms given by block
//! embeddings, sampled functions, mapping-cone pairs and block-subset ladders.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::intk::IntMatrix;
use crate::matcore::{self, CMatrix, Flags, Tolerance, C64};

/// `⊕ᵢ M_{nᵢ}(ℂ)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FDAlgebra {
    pub block_sizes: Vec<usize>,
    pub label: String,
}

impl FDAlgebra {
    pub fn new(block_sizes: Vec<usize>, label: impl Into<String>) -> Result<Self> {
        if block_sizes.is_empty() || block_sizes.contains(&0) {
            return Err(Error::AlgebraMismatch(format!("invalid block sizes {block_sizes:?}")));
        }
        Ok(FDAlgebra { block_sizes, label: label.into() })
    }

    /// ℂ as a one-block algebra; also the coefficient algebra of sampled
    /// function fixtures.
    pub fn complex() -> Self {
        FDAlgebra { block_sizes: vec![1], label: "C".into() }
    }

    pub fn matrix(n: usize) -> Self {
        FDAlgebra { block_sizes: vec![n], label: format!("M_{n}") }
    }

    pub fn block_count(&self) -> usize {
        self.block_sizes.len()
    }

    pub fn dim(&self) -> usize {
        self.block_sizes.iter().map(|n| n * n).sum()
    }

    /// Same blocks; labels are ignored.
    pub fn same_shape(&self, other: &FDAlgebra) -> bool {
        self.block_sizes == other.block_sizes
    }
}

/// An element of `M_n(Ã)`. Stored as its scalar part `ṡ ∈ M_n(ℂ)` together
/// with the full value `ṡ⊗1 + body` in each block, so that products and
/// adjoints are blockwise. The body is recovered by [`UnitizedElement::body`].
#[derive(Debug, Clone, PartialEq)]
pub struct UnitizedElement {
    pub algebra: FDAlgebra,
    pub level: usize,
    pub scalar: CMatrix,
    pub blocks: Vec<CMatrix>,
}

impl UnitizedElement {
    /// From scalar part and per-block body matrices of size n·nᵢ.
    pub fn new(algebra: &FDAlgebra, scalar: CMatrix, body: Vec<CMatrix>) -> Result<Self> {
        let n = scalar.rows();
        if !scalar.is_square() {
            return Err(Error::Shape("scalar part must be square".into()));
        }
        if body.len() != algebra.block_count() {
            return Err(Error::AlgebraMismatch(format!(
                "{} body blocks for {} algebra blocks",
                body.len(),
                algebra.block_count()
            )));
        }
        let mut blocks = Vec::with_capacity(body.len());
        for (b, &ni) in body.iter().zip(&algebra.block_sizes) {
            if b.rows() != n * ni || b.cols() != n * ni {
                return Err(Error::Shape(format!("body block {}x{} at level {n} for M_{ni}", b.rows(), b.cols())));
            }
            blocks.push(&scalar.kron(&CMatrix::identity(ni)) + b);
        }
        Ok(UnitizedElement { algebra: algebra.clone(), level: n, scalar, blocks })
    }

    /// From scalar part and full block values.
    pub fn from_full(algebra: &FDAlgebra, scalar: CMatrix, blocks: Vec<CMatrix>) -> Result<Self> {
        let n = scalar.rows();
        if blocks.len() != algebra.block_count() {
            return Err(Error::AlgebraMismatch("block count".into()));
        }
        for (b, &ni) in blocks.iter().zip(&algebra.block_sizes) {
            if b.rows() != n * ni || b.cols() != n * ni {
                return Err(Error::Shape(format!("block {}x{} at level {n} for M_{ni}", b.rows(), b.cols())));
            }
        }
        Ok(UnitizedElement { algebra: algebra.clone(), level: n, scalar, blocks })
    }

    /// The element `s ⊗ 1` for a scalar matrix s.
    pub fn scalar(algebra: &FDAlgebra, s: CMatrix) -> Self {
        let blocks = algebra.block_sizes.iter().map(|&ni| s.kron(&CMatrix::identity(ni))).collect();
        UnitizedElement { algebra: algebra.clone(), level: s.rows(), scalar: s, blocks }
    }

    pub fn identity(algebra: &FDAlgebra, n: usize) -> Self {
        Self::scalar(algebra, CMatrix::identity(n))
    }

    pub fn zero(algebra: &FDAlgebra, n: usize) -> Self {
        Self::scalar(algebra, CMatrix::zeros(n, n))
    }

    /// `1_k ⊕ 0_{n-k}` as a scalar element.
    pub fn unit_corner(algebra: &FDAlgebra, k: usize, n: usize) -> Self {
        Self::scalar(algebra, CMatrix::unit_corner(k, n))
    }

    /// Element of `M_1(A)` (no scalar part) with the given block values.
    pub fn from_blocks(algebra: &FDAlgebra, blocks: Vec<CMatrix>) -> Result<Self> {
        Self::from_full(algebra, CMatrix::zeros(1, 1), blocks)
    }

    /// Element of `M_n(A)` (scalar part zero) with block values at level n.
    pub fn from_body_only(algebra: &FDAlgebra, n: usize, blocks: Vec<CMatrix>) -> Result<Self> {
        Self::from_full(algebra, CMatrix::zeros(n, n), blocks)
    }

    /// Minimal projection `e_11` of block j, at level 1 with zero scalar part.
    pub fn minimal_projection(algebra: &FDAlgebra, j: usize) -> Self {
        let blocks = algebra
            .block_sizes
            .iter()
            .enumerate()
            .map(|(i, &ni)| if i == j { CMatrix::unit(ni, 0, 0) } else { CMatrix::zeros(ni, ni) })
            .collect();
        UnitizedElement { algebra: algebra.clone(), level: 1, scalar: CMatrix::zeros(1, 1), blocks }
    }

    pub fn body(&self, i: usize) -> CMatrix {
        &self.blocks[i] - &self.scalar.kron(&CMatrix::identity(self.algebra.block_sizes[i]))
    }

    /// Largest entry of the body, 0 exactly when the element is scalar.
    pub fn body_norm(&self) -> f64 {
        (0..self.blocks.len()).map(|i| self.body(i).max_abs()).fold(0.0, f64::max)
    }

    pub fn is_scalar(&self, eps: f64) -> bool {
        (0..self.blocks.len()).all(|i| self.body(i).max_abs() <= eps)
    }

    fn check_same(&self, other: &UnitizedElement) -> Result<()> {
        if !self.algebra.same_shape(&other.algebra) {
            return Err(Error::AlgebraMismatch(format!("{} vs {}", self.algebra.label, other.algebra.label)));
        }
        if self.level != other.level {
            return Err(Error::Shape(format!("levels {} and {}", self.level, other.level)));
        }
        Ok(())
    }

    fn zip(&self, other: &UnitizedElement, f: impl Fn(&CMatrix, &CMatrix) -> CMatrix) -> Result<Self> {
        self.check_same(other)?;
        Ok(UnitizedElement {
            algebra: self.algebra.clone(),
            level: self.level,
            scalar: f(&self.scalar, &other.scalar),
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn map(&self, f: impl Fn(&CMatrix) -> CMatrix) -> Self {
        UnitizedElement {
            algebra: self.algebra.clone(),
            level: self.level,
            scalar: f(&self.scalar),
            blocks: self.blocks.iter().map(&f).collect(),
        }
    }

    pub fn try_map(&self, f: impl Fn(&CMatrix) -> Result<CMatrix>) -> Result<Self> {
        Ok(UnitizedElement {
            algebra: self.algebra.clone(),
            level: self.level,
            scalar: f(&self.scalar)?,
            blocks: self.blocks.iter().map(&f).collect::<Result<_>>()?,
        })
    }

    pub fn mul(&self, other: &UnitizedElement) -> Result<Self> {
        self.zip(other, |a, b| a * b)
    }

    pub fn add(&self, other: &UnitizedElement) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &UnitizedElement) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    pub fn adjoint(&self) -> Self {
        self.map(CMatrix::adjoint)
    }

    pub fn scale(&self, z: C64) -> Self {
        self.map(|m| m.scale(z))
    }

    /// Max entry distance over the scalar part and all blocks.
    pub fn dist(&self, other: &UnitizedElement) -> f64 {
        if self.check_same(other).is_err() {
            return f64::INFINITY;
        }
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a.dist(b))
            .fold(self.scalar.dist(&other.scalar), f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.blocks.iter().map(CMatrix::max_abs).fold(self.scalar.max_abs(), f64::max)
    }

    fn defect(&self, f: impl Fn(&CMatrix) -> f64) -> f64 {
        self.blocks.iter().map(&f).fold(f(&self.scalar), f64::max)
    }

    pub fn projection_defect(&self) -> f64 {
        self.defect(matcore::projection_defect)
    }

    pub fn idempotent_defect(&self) -> f64 {
        self.defect(matcore::idempotent_defect)
    }

    pub fn unitary_defect(&self) -> f64 {
        self.defect(matcore::unitary_defect)
    }

    pub fn self_adjoint_defect(&self) -> f64 {
        self.defect(matcore::self_adjoint_defect)
    }

    pub fn partial_isometry_defect(&self) -> f64 {
        self.defect(matcore::partial_isometry_defect)
    }

    /// Flags hold when they hold in every component.
    pub fn classify(&self, tol: Tolerance) -> Flags {
        let mut f = matcore::classify(&self.scalar, tol);
        for b in &self.blocks {
            let g = matcore::classify(b, tol);
            f.idempotent &= g.idempotent;
            f.projection &= g.projection;
            f.partial_isometry &= g.partial_isometry;
            f.unitary &= g.unitary;
            f.self_adjoint &= g.self_adjoint;
        }
        f
    }

    /// Block-diagonal placement `self ⊕ other`.
    pub fn direct_sum(&self, other: &UnitizedElement) -> Result<Self> {
        if !self.algebra.same_shape(&other.algebra) {
            return Err(Error::AlgebraMismatch(format!("{} vs {}", self.algebra.label, other.algebra.label)));
        }
        let n = self.level;
        let m = other.level;
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .zip(&self.algebra.block_sizes)
            .map(|((a, b), &ni)| level_direct_sum(a, b, n, m, ni))
            .collect();
        Ok(UnitizedElement {
            algebra: self.algebra.clone(),
            level: n + m,
            scalar: self.scalar.direct_sum(&other.scalar),
            blocks,
        })
    }

    /// Applies `f` to matching components (scalar part, then each block) of
    /// several elements of the same algebra and level.
    pub fn zip_components(xs: &[&UnitizedElement], f: impl Fn(&[&CMatrix]) -> Result<CMatrix>) -> Result<Self> {
        let first = xs[0];
        for x in &xs[1..] {
            first.check_same(x)?;
        }
        let scalar = f(&xs.iter().map(|x| &x.scalar).collect::<Vec<_>>())?;
        let blocks = (0..first.blocks.len())
            .map(|i| f(&xs.iter().map(|x| &x.blocks[i]).collect::<Vec<_>>()))
            .collect::<Result<_>>()?;
        Ok(UnitizedElement { algebra: first.algebra.clone(), level: first.level, scalar, blocks })
    }

    /// Smallest component value of `f` over scalar part and blocks.
    pub fn min_over_components(xs: &[&UnitizedElement], f: impl Fn(&[&CMatrix]) -> Result<f64>) -> Result<f64> {
        let first = xs[0];
        for x in &xs[1..] {
            first.check_same(x)?;
        }
        let mut m = f(&xs.iter().map(|x| &x.scalar).collect::<Vec<_>>())?;
        for i in 0..first.blocks.len() {
            m = m.min(f(&xs.iter().map(|x| &x.blocks[i]).collect::<Vec<_>>())?);
        }
        Ok(m)
    }

    /// Assembles a level-(k·n) element from a k×k grid of level-n elements.
    pub fn from_grid(grid: &[Vec<UnitizedElement>]) -> Result<Self> {
        let first = &grid[0][0];
        let n = first.level;
        for x in grid.iter().flatten() {
            first.check_same(x)?;
        }
        if grid.iter().any(|row| row.len() != grid.len()) {
            return Err(Error::Shape("element grid must be square".into()));
        }
        let comp = |f: &dyn Fn(&UnitizedElement) -> CMatrix| {
            CMatrix::from_blocks(&grid.iter().map(|row| row.iter().map(f).collect()).collect::<Vec<_>>())
        };
        let scalar = comp(&|x| x.scalar.clone());
        let blocks = (0..first.blocks.len()).map(|i| comp(&|x| x.blocks[i].clone())).collect();
        Ok(UnitizedElement { algebra: first.algebra.clone(), level: n * grid.len(), scalar, blocks })
    }

    /// Level-n sub-block (r, c) of a level-(k·n) element.
    pub fn grid_block(&self, r: usize, c: usize, n: usize) -> Self {
        let blocks = self
            .blocks
            .iter()
            .zip(&self.algebra.block_sizes)
            .map(|(x, &ni)| x.block(r * n * ni, c * n * ni, n * ni, n * ni))
            .collect();
        UnitizedElement { algebra: self.algebra.clone(), level: n, scalar: self.scalar.block(r * n, c * n, n, n), blocks }
    }

    /// `self ⊕ 0_k`.
    pub fn amplify(&self, k: usize) -> Self {
        self.direct_sum(&UnitizedElement::zero(&self.algebra, k)).expect("same algebra")
    }

    /// `self ⊕ 0` up to level n (no-op when already there).
    pub fn pad_to(&self, n: usize) -> Self {
        if n <= self.level {
            self.clone()
        } else {
            self.amplify(n - self.level)
        }
    }

    /// Entry (a, b) of the level-n matrix, as an element of Ã at level 1.
    pub fn entry(&self, a: usize, b: usize) -> Self {
        let blocks = self
            .blocks
            .iter()
            .zip(&self.algebra.block_sizes)
            .map(|(x, &ni)| x.block(a * ni, b * ni, ni, ni))
            .collect();
        UnitizedElement {
            algebra: self.algebra.clone(),
            level: 1,
            scalar: CMatrix::from_fn(1, 1, |_, _| self.scalar[(a, b)]),
            blocks,
        }
    }

    /// Multiplies by a scalar matrix on the left: `(s⊗1)·self`.
    pub fn scalar_mul_left(&self, s: &CMatrix) -> Result<Self> {
        self.mul_scalar_both(Some(s), None)
    }

    pub fn scalar_mul_right(&self, s: &CMatrix) -> Result<Self> {
        self.mul_scalar_both(None, Some(s))
    }

    fn mul_scalar_both(&self, l: Option<&CMatrix>, r: Option<&CMatrix>) -> Result<Self> {
        let x = self.clone();
        let x = match l {
            Some(s) => UnitizedElement::scalar(&self.algebra, s.clone()).mul(&x)?,
            None => x,
        };
        match r {
            Some(s) => x.mul(&UnitizedElement::scalar(&self.algebra, s.clone())),
            None => Ok(x),
        }
    }

    /// Rank vector of a projection: (rank of each block) − rank(ṗ)·(block size)
    /// is the K0(A) class of [p] − [ṗ]; this returns the raw block ranks and
    /// the scalar rank.
    pub fn ranks(&self) -> (Vec<i64>, i64) {
        let r = |m: &CMatrix| m.trace().re.round() as i64;
        (self.blocks.iter().map(r).collect(), r(&self.scalar))
    }
}

fn level_direct_sum(a: &CMatrix, b: &CMatrix, n: usize, m: usize, ni: usize) -> CMatrix {
    // a is an n×n array of ni-blocks, b an m×m array; the sum is (n+m)×(n+m).
    let mut out = CMatrix::zeros((n + m) * ni, (n + m) * ni);
    out.set_block(0, 0, a);
    out.set_block(n * ni, n * ni, b);
    out
}

/// Where a source block sits inside a target block before conjugation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Placement {
    pub source_block: usize,
    pub offset: usize,
}

/// A *-homomorphism `A → B`: target block i receives copies of source blocks
/// at fixed diagonal offsets, then is conjugated by a unitary.
#[derive(Debug, Clone, PartialEq)]
pub struct Homomorphism {
    pub source: FDAlgebra,
    pub target: FDAlgebra,
    pub placements: Vec<Vec<Placement>>,
    pub unitaries: Vec<CMatrix>,
    pub label: String,
}

impl Homomorphism {
    pub fn new(
        source: &FDAlgebra,
        target: &FDAlgebra,
        placements: Vec<Vec<Placement>>,
        unitaries: Vec<CMatrix>,
        label: impl Into<String>,
    ) -> Result<Self> {
        if placements.len() != target.block_count() || unitaries.len() != target.block_count() {
            return Err(Error::InvalidHomomorphism("one placement list and unitary per target block".into()));
        }
        for (i, (pl, u)) in placements.iter().zip(&unitaries).enumerate() {
            let mi = target.block_sizes[i];
            if u.rows() != mi || !u.is_square() || matcore::unitary_defect(u) > 1e-9 {
                return Err(Error::InvalidHomomorphism(format!("conjugating matrix of block {i} is not a unitary of size {mi}")));
            }
            let mut intervals: Vec<(usize, usize)> = Vec::new();
            for p in pl {
                let nj = *source
                    .block_sizes
                    .get(p.source_block)
                    .ok_or_else(|| Error::InvalidHomomorphism(format!("no source block {}", p.source_block)))?;
                if p.offset + nj > mi {
                    return Err(Error::InvalidHomomorphism(format!("placement exceeds target block {i}")));
                }
                intervals.push((p.offset, p.offset + nj));
            }
            intervals.sort_unstable();
            if intervals.windows(2).any(|w| w[0].1 > w[1].0) {
                return Err(Error::InvalidHomomorphism(format!("overlapping placements in target block {i}")));
            }
        }
        Ok(Homomorphism {
            source: source.clone(),
            target: target.clone(),
            placements,
            unitaries,
            label: label.into(),
        })
    }

    /// Consecutive placement in source-block order with `mult[i][j]` copies of
    /// block j in target block i, and identity conjugation.
    pub fn from_multiplicities(source: &FDAlgebra, target: &FDAlgebra, mult: &[Vec<usize>], label: &str) -> Result<Self> {
        let unitaries = target.block_sizes.iter().map(|&m| CMatrix::identity(m)).collect();
        Self::with_unitaries(source, target, mult, unitaries, label)
    }

    pub fn with_unitaries(
        source: &FDAlgebra,
        target: &FDAlgebra,
        mult: &[Vec<usize>],
        unitaries: Vec<CMatrix>,
        label: &str,
    ) -> Result<Self> {
        if mult.len() != target.block_count() || mult.iter().any(|r| r.len() != source.block_count()) {
            return Err(Error::InvalidHomomorphism("multiplicity matrix shape".into()));
        }
        let mut placements = Vec::new();
        for (i, row) in mult.iter().enumerate() {
            let mut off = 0;
            let mut pl = Vec::new();
            for (j, &k) in row.iter().enumerate() {
                for _ in 0..k {
                    pl.push(Placement { source_block: j, offset: off });
                    off += source.block_sizes[j];
                }
            }
            if off > target.block_sizes[i] {
                return Err(Error::InvalidHomomorphism(format!(
                    "multiplicities need {off} > {} in target block {i}",
                    target.block_sizes[i]
                )));
            }
            placements.push(pl);
        }
        Self::new(source, target, placements, unitaries, label)
    }

    pub fn identity(a: &FDAlgebra) -> Self {
        let k = a.block_count();
        let mult: Vec<Vec<usize>> = (0..k).map(|i| (0..k).map(|j| usize::from(i == j)).collect()).collect();
        Self::from_multiplicities(a, a, &mult, "id").expect("identity")
    }

    pub fn zero(a: &FDAlgebra, b: &FDAlgebra) -> Self {
        let mult = vec![vec![0; a.block_count()]; b.block_count()];
        Self::from_multiplicities(a, b, &mult, "0").expect("zero map")
    }

    pub fn is_zero(&self) -> bool {
        self.placements.iter().all(Vec::is_empty)
    }

    /// Target-blocks × source-blocks count of copies.
    pub fn multiplicity_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.target.block_count(), self.source.block_count());
        for (i, pl) in self.placements.iter().enumerate() {
            for p in pl {
                m.set(i, p.source_block, m.get(i, p.source_block) + 1);
            }
        }
        m
    }

    /// Unital extension at matrix level n: `ṡ⊗1 + φ_n(body)`.
    pub fn apply(&self, x: &UnitizedElement) -> Result<UnitizedElement> {
        if !x.algebra.same_shape(&self.source) {
            return Err(Error::AlgebraMismatch(format!(
                "{} applied to an element of {}",
                self.label, x.algebra.label
            )));
        }
        let n = x.level;
        let bodies: Vec<CMatrix> = (0..x.blocks.len()).map(|j| x.body(j)).collect();
        let mut blocks = Vec::with_capacity(self.target.block_count());
        for (i, pl) in self.placements.iter().enumerate() {
            let mi = self.target.block_sizes[i];
            let mut emb = CMatrix::zeros(n * mi, n * mi);
            for p in pl {
                let nj = self.source.block_sizes[p.source_block];
                let body = &bodies[p.source_block];
                for a in 0..n {
                    for b in 0..n {
                        for al in 0..nj {
                            for be in 0..nj {
                                emb[(a * mi + p.offset + al, b * mi + p.offset + be)] = body[(a * nj + al, b * nj + be)];
                            }
                        }
                    }
                }
            }
            let u = CMatrix::identity(n).kron(&self.unitaries[i]);
            let conj = &(&u * &emb) * &u.adjoint();
            blocks.push(&x.scalar.kron(&CMatrix::identity(mi)) + &conj);
        }
        Ok(UnitizedElement { algebra: self.target.clone(), level: n, scalar: x.scalar.clone(), blocks })
    }

    /// Multiplicities of `ψ ∘ φ` read off from ranks of images of minimal
    /// projections.
    pub fn composed_multiplicity(phi: &Homomorphism, psi: &Homomorphism) -> Result<IntMatrix> {
        let mut m = IntMatrix::zeros(psi.target.block_count(), phi.source.block_count());
        for j in 0..phi.source.block_count() {
            let e = UnitizedElement::minimal_projection(&phi.source, j);
            let img = psi.apply(&phi.apply(&e)?)?;
            for (i, b) in img.blocks.iter().enumerate() {
                m.set(i, j, b.trace().re.round() as i64);
            }
        }
        Ok(m)
    }
}

/// Parameter domain of a sampled function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Interval,
    Circle,
    /// `[0,1]²` read as polar coordinates (r, θ/2π) on the closed disk.
    PolarSquare,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    None,
    EndpointsEqual,
    VanishesAtEnds,
    VanishesOnBoundary,
}

pub const DEFAULT_GRID: usize = 257;
pub const MAX_STEP: f64 = 0.2;

/// A function from a sampled domain into `M_n(Ã)`, stored at uniform grid
/// nodes. Interval and circle grids have `n` nodes at `k/(n-1)`; the polar
/// square has `n × n` nodes indexed (radius, angle), row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledElement {
    pub domain: Domain,
    pub boundary: Boundary,
    pub grid: usize,
    pub samples: Vec<UnitizedElement>,
}

impl SampledElement {
    pub fn new(domain: Domain, boundary: Boundary, samples: Vec<UnitizedElement>, tol: Tolerance) -> Result<Self> {
        let grid = match domain {
            Domain::Interval | Domain::Circle => samples.len(),
            Domain::PolarSquare => {
                let g = (samples.len() as f64).sqrt().round() as usize;
                if g * g != samples.len() {
                    return Err(Error::InvalidSampled("polar grid must be square".into()));
                }
                g
            }
        };
        if grid < 2 {
            return Err(Error::InvalidSampled("need at least two nodes per axis".into()));
        }
        let first = &samples[0];
        if samples.iter().any(|s| s.level != first.level || !s.algebra.same_shape(&first.algebra)) {
            return Err(Error::InvalidSampled("samples differ in level or algebra".into()));
        }
        let el = SampledElement { domain, boundary, grid, samples };
        el.check_boundary(tol)?;
        el.check_smoothness()?;
        Ok(el)
    }

    /// Samples `f` on the interval at `grid` nodes.
    pub fn from_fn(grid: usize, boundary: Boundary, f: impl Fn(f64) -> Result<UnitizedElement>, tol: Tolerance) -> Result<Self> {
        let samples = (0..grid).map(|k| f(k as f64 / (grid - 1) as f64)).collect::<Result<Vec<_>>>()?;
        Self::new(Domain::Interval, boundary, samples, tol)
    }

    /// Samples `f(r, θ)` on the polar square.
    pub fn polar_from_fn(grid: usize, boundary: Boundary, f: impl Fn(f64, f64) -> Result<UnitizedElement>, tol: Tolerance) -> Result<Self> {
        let mut samples = Vec::with_capacity(grid * grid);
        for i in 0..grid {
            for j in 0..grid {
                let r = i as f64 / (grid - 1) as f64;
                let th = 2.0 * PI * j as f64 / (grid - 1) as f64;
                samples.push(f(r, th)?);
            }
        }
        Self::new(Domain::PolarSquare, boundary, samples, tol)
    }

    pub fn constant(x: &UnitizedElement, grid: usize) -> Self {
        SampledElement { domain: Domain::Interval, boundary: Boundary::None, grid, samples: vec![x.clone(); grid] }
    }

    pub fn level(&self) -> usize {
        self.samples[0].level
    }

    pub fn algebra(&self) -> &FDAlgebra {
        &self.samples[0].algebra
    }

    pub fn first(&self) -> &UnitizedElement {
        &self.samples[0]
    }

    pub fn last(&self) -> &UnitizedElement {
        self.samples.last().expect("nonempty")
    }

    /// Parameter of node k on a one-dimensional grid.
    pub fn node(&self, k: usize) -> f64 {
        k as f64 / (self.grid - 1) as f64
    }

    pub fn check_boundary(&self, tol: Tolerance) -> Result<()> {
        let vanish = |x: &UnitizedElement| x.is_scalar(tol.eps);
        let ok = match (self.boundary, self.domain) {
            (Boundary::None, _) => true,
            (Boundary::EndpointsEqual, Domain::PolarSquare) => {
                (0..self.grid).all(|i| self.at(i, 0).dist(self.at(i, self.grid - 1)) <= tol.eps)
            }
            (Boundary::EndpointsEqual, _) => self.first().dist(self.last()) <= tol.eps,
            (Boundary::VanishesAtEnds, Domain::PolarSquare) => {
                return Err(Error::InvalidSampled("vanishes-at-ends needs a one-dimensional domain".into()))
            }
            (Boundary::VanishesAtEnds, _) => vanish(self.first()) && vanish(self.last()),
            (Boundary::VanishesOnBoundary, Domain::PolarSquare) => (0..self.grid).all(|j| vanish(self.at(self.grid - 1, j))),
            (Boundary::VanishesOnBoundary, _) => vanish(self.first()) && vanish(self.last()),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidSampled(format!("boundary condition {:?} fails", self.boundary)))
        }
    }

    /// Adjacent nodes must differ by at most [`MAX_STEP`] (Frobenius norm,
    /// which bounds the operator norm).
    pub fn check_smoothness(&self) -> Result<()> {
        let step = self.max_step();
        if step > MAX_STEP {
            return Err(Error::InvalidSampled(format!("adjacent samples differ by {step:.3} > {MAX_STEP}")));
        }
        Ok(())
    }

    pub fn max_step(&self) -> f64 {
        let d = |a: &UnitizedElement, b: &UnitizedElement| {
            a.blocks
                .iter()
                .zip(&b.blocks)
                .map(|(x, y)| (x - y).fro_norm())
                .fold((&a.scalar - &b.scalar).fro_norm(), f64::max)
        };
        match self.domain {
            Domain::Interval | Domain::Circle => self.samples.windows(2).map(|w| d(&w[0], &w[1])).fold(0.0, f64::max),
            Domain::PolarSquare => {
                let g = self.grid;
                let mut m: f64 = 0.0;
                for i in 0..g {
                    for j in 0..g {
                        if i + 1 < g {
                            m = m.max(d(self.at(i, j), self.at(i + 1, j)));
                        }
                        if j + 1 < g {
                            m = m.max(d(self.at(i, j), self.at(i, j + 1)));
                        }
                    }
                }
                m
            }
        }
    }

    /// Node (i, j) of a polar grid.
    pub fn at(&self, i: usize, j: usize) -> &UnitizedElement {
        &self.samples[i * self.grid + j]
    }

    fn check_pair(&self, other: &SampledElement) -> Result<()> {
        if self.domain != other.domain || self.grid != other.grid {
            return Err(Error::DomainMismatch(format!(
                "{:?}/{} vs {:?}/{}",
                self.domain, self.grid, other.domain, other.grid
            )));
        }
        Ok(())
    }

    /// Pointwise map; the boundary declaration is dropped.
    pub fn map(&self, f: impl Fn(&UnitizedElement) -> Result<UnitizedElement>) -> Result<Self> {
        Ok(SampledElement {
            domain: self.domain,
            boundary: Boundary::None,
            grid: self.grid,
            samples: self.samples.iter().map(f).collect::<Result<_>>()?,
        })
    }

    pub fn zip(&self, other: &SampledElement, f: impl Fn(&UnitizedElement, &UnitizedElement) -> Result<UnitizedElement>) -> Result<Self> {
        self.check_pair(other)?;
        Ok(SampledElement {
            domain: self.domain,
            boundary: Boundary::None,
            grid: self.grid,
            samples: self.samples.iter().zip(&other.samples).map(|(a, b)| f(a, b)).collect::<Result<_>>()?,
        })
    }

    /// Recomputes which boundary condition holds, preferring the strongest.
    pub fn with_detected_boundary(mut self, tol: Tolerance) -> Self {
        let candidates: &[Boundary] = match self.domain {
            Domain::PolarSquare => &[Boundary::VanishesOnBoundary, Boundary::EndpointsEqual],
            _ => &[Boundary::VanishesAtEnds, Boundary::EndpointsEqual],
        };
        self.boundary = Boundary::None;
        for &b in candidates {
            let trial = SampledElement { boundary: b, ..self.clone() };
            if trial.check_boundary(tol).is_ok() {
                self.boundary = b;
                break;
            }
        }
        self
    }

    /// Linear interpolation on one-dimensional grids; exact at nodes.
    pub fn eval(&self, s: f64) -> Result<UnitizedElement> {
        if self.domain == Domain::PolarSquare {
            return Err(Error::DomainMismatch("use eval_polar on the polar square".into()));
        }
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::DomainMismatch(format!("parameter {s} outside [0,1]")));
        }
        let x = s * (self.grid - 1) as f64;
        let k = (x.floor() as usize).min(self.grid - 2);
        let w = x - k as f64;
        if w == 0.0 {
            return Ok(self.samples[k].clone());
        }
        if w == 1.0 {
            return Ok(self.samples[k + 1].clone());
        }
        self.samples[k].scale(C64::new(1.0 - w, 0.0)).add(&self.samples[k + 1].scale(C64::new(w, 0.0)))
    }

    /// Bilinear interpolation on the polar square, (r, θ/2π) ∈ [0,1]².
    pub fn eval_polar(&self, r: f64, t: f64) -> Result<UnitizedElement> {
        if self.domain != Domain::PolarSquare {
            return Err(Error::DomainMismatch("eval_polar on a one-dimensional grid".into()));
        }
        if !(0.0..=1.0).contains(&r) || !(0.0..=1.0).contains(&t) {
            return Err(Error::DomainMismatch(format!("({r}, {t}) outside the square")));
        }
        let g = (self.grid - 1) as f64;
        let (x, y) = (r * g, t * g);
        let i = (x.floor() as usize).min(self.grid - 2);
        let j = (y.floor() as usize).min(self.grid - 2);
        let (a, b) = (x - i as f64, y - j as f64);
        let c = |w: f64| C64::new(w, 0.0);
        let p = self.at(i, j).scale(c((1.0 - a) * (1.0 - b)));
        let p = p.add(&self.at(i + 1, j).scale(c(a * (1.0 - b))))?;
        let p = p.add(&self.at(i, j + 1).scale(c((1.0 - a) * b)))?;
        p.add(&self.at(i + 1, j + 1).scale(c(a * b)))
    }

    pub fn product(&self, other: &SampledElement) -> Result<Self> {
        self.zip(other, UnitizedElement::mul)
    }

    pub fn adjoint(&self) -> Self {
        self.map(|x| Ok(x.adjoint())).expect("adjoint is total")
    }

    pub fn direct_sum(&self, other: &SampledElement) -> Result<Self> {
        self.zip(other, UnitizedElement::direct_sum)
    }

    /// Applies a homomorphism at every node.
    pub fn apply(&self, phi: &Homomorphism) -> Result<Self> {
        self.map(|x| phi.apply(x))
    }

    /// The path traversed backwards.
    pub fn reversed(&self) -> Self {
        let mut s = self.clone();
        s.samples.reverse();
        s
    }

    /// Largest pointwise defect of a predicate over all nodes.
    pub fn max_defect(&self, f: impl Fn(&UnitizedElement) -> f64) -> f64 {
        self.samples.iter().map(f).fold(0.0, f64::max)
    }
}

/// A pair `(a, f)` in the mapping cone: f a path over B ending at φ(a).
#[derive(Debug, Clone, PartialEq)]
pub struct ConeElement {
    pub a: UnitizedElement,
    pub f: SampledElement,
}

pub fn cone_element(phi: &Homomorphism, a: &UnitizedElement, f: &SampledElement, tol: Tolerance) -> Result<ConeElement> {
    if f.domain != Domain::Interval {
        return Err(Error::DomainMismatch("cone paths live on the interval".into()));
    }
    if !f.algebra().same_shape(&phi.target) {
        return Err(Error::AlgebraMismatch("cone path must take values over the target".into()));
    }
    let d = f.last().dist(&phi.apply(a)?);
    if d > tol.eps {
        return Err(Error::EndpointMismatch(d));
    }
    Ok(ConeElement { a: a.clone(), f: f.clone() })
}

/// Block-subset ideals `I ⊂ A`, `J ⊂ B` and `φ: A → B` with `φ(I) ⊂ J`;
/// the remaining six homomorphisms of the ladder are derived.
#[derive(Debug, Clone, PartialEq)]
pub struct Ladder {
    pub phi: Homomorphism,
    pub ideal_a: Vec<usize>,
    pub ideal_b: Vec<usize>,
    pub i_alg: FDAlgebra,
    pub qa_alg: FDAlgebra,
    pub j_alg: FDAlgebra,
    pub qb_alg: FDAlgebra,
    pub psi: Homomorphism,
    pub gamma: Homomorphism,
    pub iota_a: Homomorphism,
    pub pi_a: Homomorphism,
    pub iota_b: Homomorphism,
    pub pi_b: Homomorphism,
}

fn complement(k: usize, s: &[usize]) -> Vec<usize> {
    (0..k).filter(|i| !s.contains(i)).collect()
}

fn sub_algebra(a: &FDAlgebra, blocks: &[usize], label: String) -> FDAlgebra {
    FDAlgebra { block_sizes: blocks.iter().map(|&i| a.block_sizes[i]).collect(), label }
}

fn restrict_hom(phi: &Homomorphism, src: &[usize], tgt: &[usize], source: &FDAlgebra, target: &FDAlgebra, label: &str) -> Result<Homomorphism> {
    let placements = tgt
        .iter()
        .map(|&i| {
            phi.placements[i]
                .iter()
                .filter_map(|p| src.iter().position(|&s| s == p.source_block).map(|k| Placement { source_block: k, offset: p.offset }))
                .collect()
        })
        .collect();
    let unitaries = tgt.iter().map(|&i| phi.unitaries[i].clone()).collect();
    Homomorphism::new(source, target, placements, unitaries, label)
}

/// Inclusion of the blocks `subset` of `big`.
fn block_inclusion(small: &FDAlgebra, big: &FDAlgebra, subset: &[usize], label: &str) -> Result<Homomorphism> {
    let mult: Vec<Vec<usize>> = (0..big.block_count())
        .map(|i| (0..small.block_count()).map(|k| usize::from(subset[k] == i)).collect())
        .collect();
    Homomorphism::from_multiplicities(small, big, &mult, label)
}

impl Ladder {
    pub fn new(phi: Homomorphism, ideal_a: Vec<usize>, ideal_b: Vec<usize>) -> Result<Self> {
        let ka = phi.source.block_count();
        let kb = phi.target.block_count();
        if ideal_a.iter().any(|&i| i >= ka) || ideal_b.iter().any(|&i| i >= kb) {
            return Err(Error::InvalidLadder("ideal block index out of range".into()));
        }
        let mut ia = ideal_a.clone();
        ia.sort_unstable();
        ia.dedup();
        let mut ib = ideal_b.clone();
        ib.sort_unstable();
        ib.dedup();
        for (i, pl) in phi.placements.iter().enumerate() {
            if !ib.contains(&i) && pl.iter().any(|p| ia.contains(&p.source_block)) {
                return Err(Error::InvalidLadder(format!("ideal block maps into quotient block {i} of the target")));
            }
        }
        let qa = complement(ka, &ia);
        let qb = complement(kb, &ib);
        if ia.is_empty() && qa.is_empty() || ib.is_empty() && qb.is_empty() {
            return Err(Error::InvalidLadder("empty algebra".into()));
        }
        let a = &phi.source;
        let b = &phi.target;
        let i_alg = sub_algebra(a, &ia, format!("I({})", a.label));
        let qa_alg = sub_algebra(a, &qa, format!("{}/I", a.label));
        let j_alg = sub_algebra(b, &ib, format!("J({})", b.label));
        let qb_alg = sub_algebra(b, &qb, format!("{}/J", b.label));
        if [&i_alg, &qa_alg, &j_alg, &qb_alg].iter().any(|x| x.block_sizes.is_empty()) {
            return Err(Error::InvalidLadder(
                "every algebra in the ladder needs at least one block (zero algebras are not modelled)".into(),
            ));
        }
        let psi = restrict_hom(&phi, &ia, &ib, &i_alg, &j_alg, "psi")?;
        let gamma = restrict_hom(&phi, &qa, &qb, &qa_alg, &qb_alg, "gamma")?;
        let iota_a = block_inclusion(&i_alg, a, &ia, "iota_A")?;
        let iota_b = block_inclusion(&j_alg, b, &ib, "iota_B")?;
        let pi_a = block_inclusion(&qa_alg, a, &qa, "pi_A")?;
        let pi_b = block_inclusion(&qb_alg, b, &qb, "pi_B")?;
        // The quotient maps are the transposes of the complement inclusions.
        let pi_a = transpose_inclusion(&pi_a, "pi_A")?;
        let pi_b = transpose_inclusion(&pi_b, "pi_B")?;
        Ok(Ladder {
            phi,
            ideal_a: ia,
            ideal_b: ib,
            i_alg,
            qa_alg,
            j_alg,
            qb_alg,
            psi,
            gamma,
            iota_a,
            pi_a,
            iota_b,
            pi_b,
        })
    }

    pub fn a(&self) -> &FDAlgebra {
        &self.phi.source
    }

    pub fn b(&self) -> &FDAlgebra {
        &self.phi.target
    }

    /// Largest commutativity defect of the two squares, over all matrix units
    /// of every block (a linear basis, so this is a complete check).
    pub fn commutativity_defect(&self) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for x in basis_elements(&self.i_alg) {
            let lhs = self.phi.apply(&self.iota_a.apply(&x)?)?;
            let rhs = self.iota_b.apply(&self.psi.apply(&x)?)?;
            worst = worst.max(lhs.dist(&rhs));
        }
        for x in basis_elements(self.a()) {
            let lhs = self.gamma.apply(&self.pi_a.apply(&x)?)?;
            let rhs = self.pi_b.apply(&self.phi.apply(&x)?)?;
            worst = worst.max(lhs.dist(&rhs));
        }
        Ok(worst)
    }

    /// Drops the quotient blocks of an element of `M_n(Ã)` whose quotient
    /// image is scalar, giving an element of `M_n(Ĩ)`.
    pub fn restrict_to_ideal_a(&self, x: &UnitizedElement, tol: Tolerance) -> Result<UnitizedElement> {
        restrict_to(x, &self.ideal_a, &self.i_alg, tol)
    }

    pub fn restrict_to_ideal_b(&self, x: &UnitizedElement, tol: Tolerance) -> Result<UnitizedElement> {
        restrict_to(x, &self.ideal_b, &self.j_alg, tol)
    }

    /// Lifts an element of `M_n((A/I)~)` to `M_n(Ã)` by giving the ideal
    /// blocks the scalar value.
    pub fn lift_from_quotient_a(&self, x: &UnitizedElement) -> Result<UnitizedElement> {
        lift_blocks(x, self.a(), &complement(self.a().block_count(), &self.ideal_a))
    }

    pub fn lift_from_quotient_b(&self, x: &UnitizedElement) -> Result<UnitizedElement> {
        lift_blocks(x, self.b(), &complement(self.b().block_count(), &self.ideal_b))
    }
}

fn transpose_inclusion(inc: &Homomorphism, label: &str) -> Result<Homomorphism> {
    // inc: Q → A places Q-block k at A-block subset[k]; the quotient A → Q
    // sends A-block subset[k] to Q-block k.
    let q = &inc.source;
    let a = &inc.target;
    let mult: Vec<Vec<usize>> = (0..q.block_count())
        .map(|k| {
            (0..a.block_count())
                .map(|i| usize::from(inc.placements[i].iter().any(|p| p.source_block == k)))
                .collect()
        })
        .collect();
    Homomorphism::from_multiplicities(a, q, &mult, label)
}

fn restrict_to(x: &UnitizedElement, keep: &[usize], small: &FDAlgebra, tol: Tolerance) -> Result<UnitizedElement> {
    for i in 0..x.algebra.block_count() {
        if !keep.contains(&i) && x.body(i).max_abs() > tol.eps {
            return Err(Error::AlgebraMismatch(format!(
                "quotient block {i} is not scalar (defect {:.3e})",
                x.body(i).max_abs()
            )));
        }
    }
    let blocks = keep.iter().map(|&i| x.blocks[i].clone()).collect();
    UnitizedElement::from_full(small, x.scalar.clone(), blocks)
}

fn lift_blocks(x: &UnitizedElement, big: &FDAlgebra, subset: &[usize]) -> Result<UnitizedElement> {
    if x.algebra.block_count() != subset.len() {
        return Err(Error::AlgebraMismatch("quotient element has wrong block count".into()));
    }
    let mut full = UnitizedElement::scalar(big, x.scalar.clone());
    for (k, &i) in subset.iter().enumerate() {
        full.blocks[i] = x.blocks[k].clone();
    }
    Ok(full)
}

/// All matrix units `e_{ab}` of every block, at level 1.
pub fn basis_elements(a: &FDAlgebra) -> Vec<UnitizedElement> {
    let mut out = Vec::new();
    for (j, &nj) in a.block_sizes.iter().enumerate() {
        for r in 0..nj {
            for c in 0..nj {
                let blocks = a
                    .block_sizes
                    .iter()
                    .enumerate()
                    .map(|(i, &ni)| if i == j { CMatrix::unit(ni, r, c) } else { CMatrix::zeros(ni, ni) })
                    .collect();
                out.push(UnitizedElement { algebra: a.clone(), level: 1, scalar: CMatrix::zeros(1, 1), blocks });
            }
        }
    }
    out
}

/// `e^{2πi t}` as a complex number.
pub fn circle(t: f64) -> C64 {
    C64::from_polar(1.0, 2.0 * PI * t)
}

/// Scalar matrix helper: `z · 1_n`.
pub fn scalar_multiple(z: C64, n: usize) -> CMatrix {
    CMatrix::identity(n).scale(z)
}
