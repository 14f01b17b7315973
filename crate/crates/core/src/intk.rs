//! Exact integer side: Smith normal form, finitely generated abelian groups
//! as cokernels of integer matrices, kernels, cokernels and exactness.

use std::fmt;

use crate::algmodel::{FDAlgebra, Homomorphism};
use crate::error::{Error, Result};

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "] ({}x{})", self.rows, self.cols)
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// From row slices; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged integer matrix");
        IntMatrix { rows: r, cols: c, data: rows.iter().flatten().copied().collect() }
    }

    pub fn from_cols(rows: usize, cols: &[Vec<i64>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, &x) in col.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: i64) {
        self.data[i * self.cols + j] = x;
    }

    pub fn col(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn row(&self, i: usize) -> Vec<i64> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j));
            }
        }
        m
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::NotComposable(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc: i64 = 0;
                for k in 0..self.cols {
                    let p = self.get(i, k).checked_mul(other.get(k, j)).ok_or(Error::Overflow("product"))?;
                    acc = acc.checked_add(p).ok_or(Error::Overflow("product"))?;
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn apply(&self, x: &[i64]) -> Result<Vec<i64>> {
        let col = IntMatrix::from_cols(x.len(), &[x.to_vec()]);
        Ok(self.mul(&col)?.col(0))
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows, "hcat row mismatch");
        let mut m = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j));
            }
            for j in 0..other.cols {
                m.set(i, self.cols + j, other.get(i, j));
            }
        }
        m
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| -x).collect() }
    }

    /// Determinant by fraction-free Bareiss elimination.
    pub fn det(&self) -> Result<i64> {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut a: Vec<i128> = self.data.iter().map(|&x| x as i128).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n {
            if a[k * n + k] == 0 {
                let Some(p) = (k + 1..n).find(|&i| a[i * n + k] != 0) else { return Ok(0) };
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i * n + j] = (a[i * n + j] * a[k * n + k] - a[i * n + k] * a[k * n + j]) / prev;
                }
            }
            prev = a[k * n + k];
        }
        let d = if n == 0 { 1 } else { sign * a[n * n - 1] };
        i64::try_from(d).map_err(|_| Error::Overflow("determinant"))
    }
}

/// `u · m · v = d` with d diagonal and each diagonal entry dividing the next
/// (zeros last).
#[derive(Debug, Clone)]
pub struct Snf {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
}

impl Snf {
    pub fn diagonal(&self) -> Vec<i64> {
        (0..self.d.rows.min(self.d.cols)).map(|i| self.d.get(i, i)).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|&&x| x != 0).count()
    }
}

fn ck(x: Option<i64>) -> Result<i64> {
    x.ok_or(Error::Overflow("smith normal form"))
}

// Row op: row_a -= q * row_b, applied to m and mirrored on the inverse as
// col_b += q * col_a.
fn row_sub(m: &mut IntMatrix, inv: &mut IntMatrix, a: usize, b: usize, q: i64) -> Result<()> {
    for j in 0..m.cols {
        let x = ck(m.get(a, j).checked_sub(ck(q.checked_mul(m.get(b, j)))?))?;
        m.set(a, j, x);
    }
    for i in 0..inv.rows {
        let x = ck(inv.get(i, b).checked_add(ck(q.checked_mul(inv.get(i, a)))?))?;
        inv.set(i, b, x);
    }
    Ok(())
}

fn col_sub(m: &mut IntMatrix, inv: &mut IntMatrix, a: usize, b: usize, q: i64) -> Result<()> {
    for i in 0..m.rows {
        let x = ck(m.get(i, a).checked_sub(ck(q.checked_mul(m.get(i, b)))?))?;
        m.set(i, a, x);
    }
    for j in 0..inv.cols {
        let x = ck(inv.get(b, j).checked_add(ck(q.checked_mul(inv.get(a, j)))?))?;
        inv.set(b, j, x);
    }
    Ok(())
}

fn swap_rows(m: &mut IntMatrix, a: usize, b: usize) {
    if a != b {
        for j in 0..m.cols {
            m.data.swap(a * m.cols + j, b * m.cols + j);
        }
    }
}

fn swap_cols(m: &mut IntMatrix, a: usize, b: usize) {
    if a != b {
        for i in 0..m.rows {
            m.data.swap(i * m.cols + a, i * m.cols + b);
        }
    }
}

/// Smith normal form. Pivot: smallest nonzero absolute value in the active
/// submatrix (first in row-major order on ties); the pivot column is cleared
/// before the pivot row.
pub fn smith_normal_form(m: &IntMatrix) -> Result<Snf> {
    let (r, c) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut u_inv = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);
    let mut v_inv = IntMatrix::identity(c);
    for t in 0..r.min(c) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    let x = d.get(i, j);
                    if x != 0 && best.is_none_or(|(bi, bj)| x.unsigned_abs() < d.get(bi, bj).unsigned_abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(d, u, v, u_inv, v_inv);
            };
            swap_rows(&mut d, t, pi);
            swap_rows(&mut u, t, pi);
            swap_cols(&mut u_inv, t, pi);
            swap_cols(&mut d, t, pj);
            swap_cols(&mut v, t, pj);
            swap_rows(&mut v_inv, t, pj);
            let p = d.get(t, t);
            let mut clean = true;
            for i in t + 1..r {
                let q = d.get(i, t) / p;
                if q != 0 {
                    row_sub(&mut d, &mut u_inv, i, t, q)?;
                    // mirror on u: row_i(u) -= q row_t(u)
                    for j in 0..r {
                        let x = ck(u.get(i, j).checked_sub(ck(q.checked_mul(u.get(t, j)))?))?;
                        u.set(i, j, x);
                    }
                }
                clean &= d.get(i, t) == 0;
            }
            for j in t + 1..c {
                let q = d.get(t, j) / p;
                if q != 0 {
                    col_sub(&mut d, &mut v_inv, j, t, q)?;
                    for i in 0..c {
                        let x = ck(v.get(i, j).checked_sub(ck(q.checked_mul(v.get(i, t)))?))?;
                        v.set(i, j, x);
                    }
                }
                clean &= d.get(t, j) == 0;
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..r).flat_map(|i| (t + 1..c).map(move |j| (i, j))).find(|&(i, j)| d.get(i, j) % p != 0);
            if let Some((i, _)) = bad {
                // row_t += row_i, then re-pivot
                row_sub(&mut d, &mut u_inv, t, i, -1)?;
                for j in 0..r {
                    let x = ck(u.get(t, j).checked_add(u.get(i, j)))?;
                    u.set(t, j, x);
                }
                continue;
            }
            if p < 0 {
                for j in 0..c {
                    d.set(t, j, -d.get(t, j));
                }
                for j in 0..r {
                    u.set(t, j, -u.get(t, j));
                }
                for i in 0..r {
                    u_inv.set(i, t, -u_inv.get(i, t));
                }
            }
            break;
        }
    }
    finish(d, u, v, u_inv, v_inv)
}

fn finish(d: IntMatrix, u: IntMatrix, v: IntMatrix, u_inv: IntMatrix, v_inv: IntMatrix) -> Result<Snf> {
    Ok(Snf { u, d, v, u_inv, v_inv })
}

/// Solves `m · y = x` over the integers, if possible.
pub fn solve_integer(m: &IntMatrix, x: &[i64]) -> Result<Option<Vec<i64>>> {
    if x.len() != m.rows {
        return Err(Error::NotComposable(format!("vector of length {} against {} rows", x.len(), m.rows)));
    }
    let snf = smith_normal_form(m)?;
    let z = snf.u.apply(x)?;
    let diag = snf.diagonal();
    let mut w = vec![0i64; m.cols];
    for (i, &zi) in z.iter().enumerate() {
        let di = diag.get(i).copied().unwrap_or(0);
        if di == 0 {
            if zi != 0 {
                return Ok(None);
            }
        } else if zi % di != 0 {
            return Ok(None);
        } else {
            w[i] = zi / di;
        }
    }
    Ok(Some(snf.v.apply(&w)?))
}

/// Integer lattice kernel of m, as columns.
pub fn integer_kernel(m: &IntMatrix) -> Result<IntMatrix> {
    let snf = smith_normal_form(m)?;
    let rank = snf.rank();
    let cols: Vec<Vec<i64>> = (rank..m.cols).map(|j| snf.v.col(j)).collect();
    Ok(IntMatrix::from_cols(m.cols, &cols))
}

/// A finitely generated abelian group `Z^g / (relations · Z^r)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupPresentation {
    pub generator_count: usize,
    /// g × r; column k is the k-th relator.
    pub relations: IntMatrix,
    /// One entry per generator: d_k for cyclic factors, 0 for free ones
    /// (trailing entries of the normal form, ones included).
    pub invariant_factors: Vec<i64>,
    pub generator_tags: Vec<String>,
}

impl GroupPresentation {
    pub fn new(relations: IntMatrix, generator_tags: Vec<String>) -> Result<Self> {
        let g = relations.rows;
        if generator_tags.len() != g {
            return Err(Error::Shape(format!("{} tags for {g} generators", generator_tags.len())));
        }
        let snf = smith_normal_form(&relations)?;
        let mut inv: Vec<i64> = snf.diagonal();
        inv.resize(g, 0);
        Ok(GroupPresentation { generator_count: g, relations, invariant_factors: inv, generator_tags })
    }

    pub fn free(tags: Vec<String>) -> Self {
        let g = tags.len();
        GroupPresentation::new(IntMatrix::zeros(g, 0), tags).expect("free presentation")
    }

    pub fn trivial() -> Self {
        GroupPresentation::free(Vec::new())
    }

    /// Diagonal presentation with the given factors (0 = free).
    pub fn cyclic(factors: &[i64], tags: Vec<String>) -> Result<Self> {
        let g = factors.len();
        let cols: Vec<Vec<i64>> = factors
            .iter()
            .enumerate()
            .filter(|(_, &d)| d != 0)
            .map(|(k, &d)| {
                let mut c = vec![0; g];
                c[k] = d;
                c
            })
            .collect();
        GroupPresentation::new(IntMatrix::from_cols(g, &cols), tags)
    }

    /// Nontrivial invariant factors: torsion orders > 1 and zeros for Z.
    pub fn nontrivial_factors(&self) -> Vec<i64> {
        self.invariant_factors.iter().copied().filter(|&d| d != 1).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors.iter().filter(|&&d| d == 0).count()
    }

    pub fn torsion(&self) -> Vec<i64> {
        self.invariant_factors.iter().copied().filter(|&d| d > 1).collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.iter().all(|&d| d == 1)
    }

    /// True when the group is isomorphic to the one with these nontrivial
    /// invariant factors (order-insensitive).
    pub fn is_isomorphic_to(&self, factors: &[i64]) -> bool {
        let mut a = self.nontrivial_factors();
        let mut b: Vec<i64> = factors.iter().copied().filter(|&d| d != 1).collect();
        a.sort_unstable();
        b.sort_unstable();
        a == b
    }

    /// Human-readable isomorphism type, e.g. `Z^2 + Z/2` or `0`.
    pub fn describe(&self) -> String {
        let r = self.rank();
        let mut parts = Vec::new();
        match r {
            0 => {}
            1 => parts.push("Z".to_string()),
            _ => parts.push(format!("Z^{r}")),
        }
        for d in self.torsion() {
            parts.push(format!("Z/{d}"));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    /// Whether x lies in the relation lattice (is zero in the group).
    pub fn is_zero(&self, x: &[i64]) -> Result<bool> {
        if self.relations.cols == 0 {
            return Ok(x.iter().all(|&v| v == 0));
        }
        Ok(solve_integer(&self.relations, x)?.is_some())
    }

    pub fn equal(&self, x: &[i64], y: &[i64]) -> Result<bool> {
        let diff: Vec<i64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
        self.is_zero(&diff)
    }

    /// Canonical coordinates: entries reduced into [0, d) for torsion
    /// generators of a diagonal presentation. Non-diagonal presentations are
    /// returned unchanged.
    pub fn canonical(&self, x: &[i64]) -> Vec<i64> {
        if !self.is_diagonal() {
            return x.to_vec();
        }
        x.iter()
            .enumerate()
            .map(|(k, &v)| {
                let d = self.diagonal_factor(k);
                if d > 0 {
                    v.rem_euclid(d)
                } else {
                    v
                }
            })
            .collect()
    }

    fn diagonal_factor(&self, k: usize) -> i64 {
        (0..self.relations.cols).map(|j| self.relations.get(k, j).abs()).max().unwrap_or(0)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.relations.cols).all(|j| {
            let col = self.relations.col(j);
            col.iter().filter(|&&x| x != 0).count() <= 1
        })
    }
}

/// Homomorphism of presented groups, acting on generator coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupMap {
    pub source: GroupPresentation,
    pub target: GroupPresentation,
    /// target generators × source generators.
    pub matrix: IntMatrix,
}

impl GroupMap {
    pub fn new(source: GroupPresentation, target: GroupPresentation, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows != target.generator_count || matrix.cols != source.generator_count {
            return Err(Error::Shape(format!(
                "map matrix {}x{} between groups on {} and {} generators",
                matrix.rows, matrix.cols, source.generator_count, target.generator_count
            )));
        }
        let map = GroupMap { source, target, matrix };
        if !map.is_well_defined()? {
            return Err(Error::NotComposable("map does not respect relations".into()));
        }
        Ok(map)
    }

    pub fn zero(source: GroupPresentation, target: GroupPresentation) -> Self {
        let matrix = IntMatrix::zeros(target.generator_count, source.generator_count);
        GroupMap { source, target, matrix }
    }

    pub fn identity(g: GroupPresentation) -> Self {
        let matrix = IntMatrix::identity(g.generator_count);
        GroupMap { source: g.clone(), target: g, matrix }
    }

    pub fn is_well_defined(&self) -> Result<bool> {
        let img = self.matrix.mul(&self.source.relations)?;
        for j in 0..img.cols {
            if !self.target.is_zero(&img.col(j))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn apply(&self, x: &[i64]) -> Result<Vec<i64>> {
        self.matrix.apply(x)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GroupMap) -> Result<GroupMap> {
        if self.target != other.source {
            return Err(Error::NotComposable("target and source presentations differ".into()));
        }
        Ok(GroupMap {
            source: self.source.clone(),
            target: other.target.clone(),
            matrix: other.matrix.mul(&self.matrix)?,
        })
    }

    pub fn is_zero_map(&self) -> Result<bool> {
        for j in 0..self.matrix.cols {
            if !self.target.is_zero(&self.matrix.col(j))? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// A group given by a diagonal presentation, together with the passage to and
/// from an ambient coordinate system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subquotient {
    pub group: GroupPresentation,
    /// ambient × generators: generator k lifts to column k.
    pub lifts: IntMatrix,
}

/// Rewrites `Z^g / R` in diagonal form. Returns the reduced group, the lifts
/// of its generators to Z^g and the coordinate matrix Z^g → new generators.
fn reduce(relations: &IntMatrix) -> Result<(Vec<i64>, IntMatrix, IntMatrix)> {
    let g = relations.rows;
    let snf = smith_normal_form(relations)?;
    let mut diag = snf.diagonal();
    diag.resize(g, 0);
    let keep: Vec<usize> = (0..g).filter(|&k| diag[k] != 1).collect();
    let factors: Vec<i64> = keep.iter().map(|&k| diag[k]).collect();
    let lifts = IntMatrix::from_cols(g, &keep.iter().map(|&k| snf.u_inv.col(k)).collect::<Vec<_>>());
    let coords = IntMatrix::from_rows(&keep.iter().map(|&k| snf.u.row(k)).collect::<Vec<_>>());
    let coords = if keep.is_empty() { IntMatrix::zeros(0, g) } else { coords };
    Ok((factors, lifts, coords))
}

fn flip_col(m: &mut IntMatrix, k: usize) {
    for i in 0..m.rows {
        m.set(i, k, -m.get(i, k));
    }
}

fn flip_row(m: &mut IntMatrix, k: usize) {
    for j in 0..m.cols {
        m.set(k, j, -m.get(k, j));
    }
}

/// Kernel of a group map with generator lifts in source coordinates.
/// Free generators are oriented so their lift's last nonzero entry is
/// positive.
#[derive(Debug, Clone)]
pub struct Kernel {
    pub group: GroupPresentation,
    /// source generators × kernel generators.
    pub inclusion: GroupMap,
    lattice_basis: IntMatrix,
    to_reduced: IntMatrix,
}

impl Kernel {
    /// Coordinates of a source element that lies in the kernel.
    pub fn coordinates(&self, x: &[i64]) -> Result<Option<Vec<i64>>> {
        let Some(c) = solve_lattice(&self.lattice_basis, x)? else { return Ok(None) };
        Ok(Some(self.group.canonical(&self.to_reduced.apply(&c)?)))
    }
}

fn solve_lattice(basis: &IntMatrix, x: &[i64]) -> Result<Option<Vec<i64>>> {
    if basis.cols == 0 {
        return Ok(if x.iter().all(|&v| v == 0) { Some(Vec::new()) } else { None });
    }
    solve_integer(basis, x)
}

/// Basis of the lattice spanned by the columns of m.
fn lattice_basis(m: &IntMatrix) -> Result<IntMatrix> {
    let snf = smith_normal_form(m)?;
    let diag = snf.diagonal();
    let mut cols = Vec::new();
    for (k, &d) in diag.iter().enumerate() {
        if d != 0 {
            cols.push(snf.u_inv.col(k).iter().map(|&x| x * d).collect::<Vec<_>>());
        }
    }
    Ok(IntMatrix::from_cols(m.rows, &cols))
}

pub fn kernel(map: &GroupMap) -> Result<Kernel> {
    let g = map.source.generator_count;
    let s = &map.target.relations;
    let stacked = map.matrix.hcat(&s.neg());
    let null = integer_kernel(&stacked)?;
    let mut gens = IntMatrix::zeros(g, null.cols);
    for j in 0..null.cols {
        for i in 0..g {
            gens.set(i, j, null.get(i, j));
        }
    }
    // The kernel lattice L contains the source relations.
    let basis = lattice_basis(&gens)?;
    let k = basis.cols;
    let mut rel_cols = Vec::new();
    for j in 0..map.source.relations.cols {
        let r = map.source.relations.col(j);
        let c = solve_lattice(&basis, &r)?
            .ok_or_else(|| Error::NotComposable("source relation outside kernel lattice".into()))?;
        rel_cols.push(c);
    }
    let rels = IntMatrix::from_cols(k, &rel_cols);
    let (factors, red_lifts, mut coords) = reduce(&rels)?;
    let mut lifts = basis.mul(&red_lifts)?;
    for (kk, &d) in factors.iter().enumerate() {
        if d == 0 {
            let col = lifts.col(kk);
            if col.iter().rev().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
                flip_col(&mut lifts, kk);
                flip_row(&mut coords, kk);
            }
        }
    }
    let tags = (0..factors.len()).map(|kk| format!("kernel generator {}", kk + 1)).collect();
    let group = GroupPresentation::cyclic(&factors, tags)?;
    let inclusion = GroupMap { source: group.clone(), target: map.source.clone(), matrix: lifts };
    Ok(Kernel { group, inclusion, lattice_basis: basis, to_reduced: coords })
}

/// Cokernel of a group map with generator lifts in target coordinates.
/// Free generators are oriented so the first target generator with a nonzero
/// coordinate maps to a positive one.
#[derive(Debug, Clone)]
pub struct Cokernel {
    pub group: GroupPresentation,
    pub projection: GroupMap,
    /// target generators × cokernel generators.
    pub lifts: IntMatrix,
}

impl Cokernel {
    pub fn coordinates(&self, y: &[i64]) -> Result<Vec<i64>> {
        Ok(self.group.canonical(&self.projection.apply(y)?))
    }
}

pub fn cokernel(map: &GroupMap) -> Result<Cokernel> {
    let h = map.target.generator_count;
    let rels = map.matrix.hcat(&map.target.relations);
    let (factors, mut lifts, mut coords) = reduce(&rels)?;
    for (k, &d) in factors.iter().enumerate() {
        if d == 0 {
            let row = coords.row(k);
            if row.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
                flip_col(&mut lifts, k);
                flip_row(&mut coords, k);
            }
        }
    }
    let tags = (0..factors.len()).map(|k| format!("cokernel generator {}", k + 1)).collect();
    let group = GroupPresentation::cyclic(&factors, tags)?;
    let coords = if coords.rows == 0 { IntMatrix::zeros(0, h) } else { coords };
    let projection = GroupMap { source: map.target.clone(), target: group.clone(), matrix: coords };
    Ok(Cokernel { group, projection, lifts })
}

/// Verdict at one interior node of a sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NodeVerdict {
    Exact,
    Defect(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactnessReport {
    pub nodes: Vec<NodeVerdict>,
}

impl ExactnessReport {
    pub fn all_exact(&self) -> bool {
        self.nodes.iter().all(|n| *n == NodeVerdict::Exact)
    }
}

/// Checks im = ker at every interior node of `f_0, f_1, ..., f_k`.
pub fn check_exact(seq: &[GroupMap]) -> Result<ExactnessReport> {
    for (i, w) in seq.windows(2).enumerate() {
        if w[0].target != w[1].source {
            return Err(Error::NotComposable(format!("maps {i} and {}", i + 1)));
        }
    }
    let mut nodes = Vec::new();
    for w in seq.windows(2) {
        nodes.push(node_verdict(&w[0], &w[1])?);
    }
    Ok(ExactnessReport { nodes })
}

fn node_verdict(f: &GroupMap, g: &GroupMap) -> Result<NodeVerdict> {
    let comp = f.then(g)?;
    if !comp.is_zero_map()? {
        return Ok(NodeVerdict::Defect("image not contained in kernel".into()));
    }
    let ker = kernel(g)?;
    let span = f.matrix.hcat(&f.target.relations);
    for j in 0..ker.inclusion.matrix.cols {
        let x = ker.inclusion.matrix.col(j);
        let hit = if span.cols == 0 { x.iter().all(|&v| v == 0) } else { solve_integer(&span, &x)?.is_some() };
        if !hit {
            return Ok(NodeVerdict::Defect(format!("kernel element {x:?} not in image")));
        }
    }
    Ok(NodeVerdict::Exact)
}

/// K-groups of a finite-dimensional algebra: K0 free on the minimal
/// projections of the blocks, K1 trivial.
pub fn k_groups(a: &FDAlgebra) -> (GroupPresentation, GroupPresentation) {
    let tags = (0..a.block_sizes.len())
        .map(|i| format!("minimal projection of block {} (M_{})", i + 1, a.block_sizes[i]))
        .collect();
    (GroupPresentation::free(tags), GroupPresentation::trivial())
}

/// The map induced on K0 by a homomorphism of finite-dimensional algebras.
pub fn induced_k0(phi: &Homomorphism) -> GroupMap {
    let (k0a, _) = k_groups(&phi.source);
    let (k0b, _) = k_groups(&phi.target);
    GroupMap { source: k0a, target: k0b, matrix: phi.multiplicity_matrix() }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn im(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    fn check_snf(m: &IntMatrix) -> Snf {
        let s = smith_normal_form(m).unwrap();
        assert_eq!(s.u.mul(m).unwrap().mul(&s.v).unwrap(), s.d);
        assert_eq!(s.u.mul(&s.u_inv).unwrap(), IntMatrix::identity(m.rows()));
        assert_eq!(s.v.mul(&s.v_inv).unwrap(), IntMatrix::identity(m.cols()));
        assert_eq!(s.u.det().unwrap().abs(), 1);
        assert_eq!(s.v.det().unwrap().abs(), 1);
        s
    }

    #[test]
    fn snf_examples() {
        assert_eq!(check_snf(&IntMatrix::identity(3)).diagonal(), vec![1, 1, 1]);
        assert_eq!(check_snf(&im(&[&[2, 4], &[6, 8]])).diagonal(), vec![2, 4]);
        assert_eq!(check_snf(&IntMatrix::zeros(2, 3)).diagonal(), vec![0, 0]);
    }

    #[test]
    fn snf_needs_divisibility_fix() {
        // diag(2, 3) has normal form diag(1, 6)
        assert_eq!(check_snf(&im(&[&[2, 0], &[0, 3]])).diagonal(), vec![1, 6]);
    }

    #[test]
    fn kernel_of_sum_map() {
        let z2 = GroupPresentation::free(vec!["a".into(), "b".into()]);
        let z = GroupPresentation::free(vec!["c".into()]);
        let m = GroupMap::new(z2, z, im(&[&[1, 1]])).unwrap();
        let k = kernel(&m).unwrap();
        assert_eq!(k.group.describe(), "Z");
        assert_eq!(k.inclusion.matrix.col(0), vec![-1, 1]);
        assert_eq!(k.coordinates(&[2, -2]).unwrap(), Some(vec![-2]));
        assert_eq!(k.coordinates(&[1, 0]).unwrap(), None);
    }

    #[test]
    fn cokernels() {
        let z = GroupPresentation::free(vec!["c".into()]);
        let z2 = GroupPresentation::free(vec!["a".into(), "b".into()]);
        let diag = GroupMap::new(z.clone(), z2, im(&[&[1], &[1]])).unwrap();
        let c = cokernel(&diag).unwrap();
        assert_eq!(c.group.describe(), "Z");
        assert_eq!(c.coordinates(&[1, 0]).unwrap(), vec![1]);
        let two = GroupMap::new(z.clone(), z, im(&[&[2]])).unwrap();
        let c2 = cokernel(&two).unwrap();
        assert_eq!(c2.group.describe(), "Z/2");
        assert_eq!(c2.coordinates(&[3]).unwrap(), vec![1]);
    }

    #[test]
    fn exactness_examples() {
        let z = GroupPresentation::free(vec!["x".into()]);
        let zero = GroupPresentation::trivial();
        let seq = vec![
            GroupMap::zero(zero.clone(), z.clone()),
            GroupMap::identity(z.clone()),
            GroupMap::zero(z.clone(), zero.clone()),
        ];
        assert!(check_exact(&seq).unwrap().all_exact());

        let z2 = GroupPresentation::cyclic(&[2], vec!["y".into()]).unwrap();
        let seq = vec![
            GroupMap::new(z.clone(), z.clone(), im(&[&[2]])).unwrap(),
            GroupMap::new(z.clone(), z2.clone(), im(&[&[1]])).unwrap(),
            GroupMap::zero(z2, zero),
        ];
        assert!(check_exact(&seq).unwrap().all_exact());

        let seq = vec![GroupMap::zero(z.clone(), z.clone()), GroupMap::zero(z.clone(), z)];
        assert!(!check_exact(&seq).unwrap().all_exact());
    }

    #[test]
    fn not_composable_is_reported() {
        let z = GroupPresentation::free(vec!["x".into()]);
        let z2 = GroupPresentation::free(vec!["a".into(), "b".into()]);
        let seq = vec![GroupMap::identity(z), GroupMap::identity(z2)];
        assert!(matches!(check_exact(&seq), Err(Error::NotComposable(_))));
    }

    #[test]
    fn overflow_is_detected() {
        let big = i64::MAX / 2;
        let m = im(&[&[big, big - 1], &[big - 3, big]]);
        match smith_normal_form(&m) {
            Ok(s) => assert_eq!(s.u.mul(&m).unwrap().mul(&s.v).unwrap(), s.d),
            Err(e) => assert!(matches!(e, Error::Overflow(_))),
        }
    }
}
