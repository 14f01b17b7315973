//! Seeded random algebras, homomorphisms, ladders and triples shared by the
//! property tests and the acceptance suite.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use relk_core::algmodel::{FDAlgebra, Homomorphism, Ladder, UnitizedElement};
use relk_core::engine::kernel_generator_triple;
use relk_core::intk::{induced_k0, kernel};
use relk_core::matcore::{exp_i, CMatrix, Tolerance, C64};
use relk_core::triples::{add_k0, K0Triple, RawK0Triple};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut impl Rng, n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

pub fn random_hermitian(rng: &mut impl Rng, n: usize) -> CMatrix {
    random_matrix(rng, n).hermitian_part()
}

pub fn random_unitary(rng: &mut impl Rng, n: usize) -> CMatrix {
    let h = random_hermitian(rng, n).scale_re(std::f64::consts::PI);
    exp_i(&h, 1.0).expect("exp of a Hermitian matrix")
}

/// `U (1_r ⊕ 0) U*` for a random unitary U.
pub fn random_projection(rng: &mut impl Rng, n: usize, rank: usize) -> CMatrix {
    let u = random_unitary(rng, n);
    &(&u * &CMatrix::unit_corner(rank, n)) * &u.adjoint()
}

pub fn random_algebra(rng: &mut impl Rng, blocks: std::ops::RangeInclusive<usize>, max_size: usize, label: &str) -> FDAlgebra {
    let k = rng.gen_range(blocks);
    let sizes = (0..k).map(|_| rng.gen_range(1..=max_size)).collect();
    FDAlgebra::new(sizes, label).expect("nonempty algebra")
}

/// Random multiplicities, filling each target block greedily in a random
/// source order. `allowed(i, j)` says whether source block j may enter
/// target block i.
pub fn random_multiplicities(
    rng: &mut impl Rng,
    a: &FDAlgebra,
    b: &FDAlgebra,
    allowed: impl Fn(usize, usize) -> bool,
) -> Vec<Vec<usize>> {
    let mut mult = vec![vec![0; a.block_count()]; b.block_count()];
    for (i, row) in mult.iter_mut().enumerate() {
        let mut room = b.block_sizes[i];
        let mut order: Vec<usize> = (0..a.block_count()).collect();
        order.shuffle(rng);
        for j in order {
            if !allowed(i, j) {
                continue;
            }
            let fit = room / a.block_sizes[j];
            let k = rng.gen_range(0..=fit.min(2));
            row[j] = k;
            room -= k * a.block_sizes[j];
        }
    }
    mult
}

pub fn random_hom(rng: &mut impl Rng, a: &FDAlgebra, b: &FDAlgebra, twisted: bool) -> Homomorphism {
    let mult = random_multiplicities(rng, a, b, |_, _| true);
    let unitaries = b
        .block_sizes
        .iter()
        .map(|&m| if twisted { random_unitary(rng, m) } else { CMatrix::identity(m) })
        .collect();
    Homomorphism::with_unitaries(a, b, &mult, unitaries, "phi").expect("multiplicities fit")
}

/// A homomorphism between random algebras (at most `max_blocks` blocks of
/// size at most `max_size`), twisted by random unitaries half of the time.
pub fn random_fd_hom(rng: &mut impl Rng, max_blocks: usize, max_size: usize) -> Homomorphism {
    let a = random_algebra(rng, 1..=max_blocks, max_size, "A");
    let b = random_algebra(rng, 1..=max_blocks, max_size, "B");
    let twisted = rng.gen_bool(0.5);
    random_hom(rng, &a, &b, twisted)
}

fn random_proper_subset(rng: &mut impl Rng, k: usize) -> Vec<usize> {
    loop {
        let s: Vec<usize> = (0..k).filter(|_| rng.gen_bool(0.5)).collect();
        if !s.is_empty() && s.len() < k {
            return s;
        }
    }
}

/// A ladder of block ideals: φ sends the ideal blocks of A only into ideal
/// blocks of B.
pub fn random_ladder(rng: &mut impl Rng, max_blocks: usize, max_size: usize) -> Ladder {
    let a = random_algebra(rng, 2..=max_blocks, max_size, "A");
    let b = random_algebra(rng, 2..=max_blocks, max_size, "B");
    let ia = random_proper_subset(rng, a.block_count());
    let ib = random_proper_subset(rng, b.block_count());
    let mult = random_multiplicities(rng, &a, &b, |i, j| ib.contains(&i) || !ia.contains(&j));
    let twisted = rng.gen_bool(0.5);
    let unitaries = b
        .block_sizes
        .iter()
        .map(|&m| if twisted { random_unitary(rng, m) } else { CMatrix::identity(m) })
        .collect();
    let phi = Homomorphism::with_unitaries(&a, &b, &mult, unitaries, "phi").expect("multiplicities fit");
    Ladder::new(phi, ia, ib).expect("ideal blocks map into ideal blocks")
}

/// A projection over the unitization with the ranks it was built from.
#[derive(Debug, Clone)]
pub struct RandomProjection {
    pub p: UnitizedElement,
    pub block_ranks: Vec<i64>,
    pub scalar_rank: i64,
}

pub fn random_projection_element(rng: &mut impl Rng, alg: &FDAlgebra, n: usize, scalar_rank: usize) -> RandomProjection {
    let scalar = random_projection(rng, n, scalar_rank);
    let mut blocks = Vec::new();
    let mut block_ranks = Vec::new();
    for &nj in &alg.block_sizes {
        let r = rng.gen_range(0..=n * nj);
        blocks.push(random_projection(rng, n * nj, r));
        block_ranks.push(r as i64);
    }
    let p = UnitizedElement::from_full(alg, scalar, blocks).expect("shapes");
    RandomProjection { p, block_ranks, scalar_rank: scalar_rank as i64 }
}

pub fn random_unitary_element(rng: &mut impl Rng, alg: &FDAlgebra, n: usize) -> UnitizedElement {
    let scalar = random_unitary(rng, n);
    let blocks = alg.block_sizes.iter().map(|&nj| random_unitary(rng, n * nj)).collect();
    UnitizedElement::from_full(alg, scalar, blocks).expect("shapes")
}

/// A well-conditioned invertible `1 + X/4` with its inverse.
pub fn random_invertible_element(rng: &mut impl Rng, alg: &FDAlgebra, n: usize) -> (UnitizedElement, UnitizedElement) {
    let near_one = |rng: &mut ChaCha8Rng, m: usize| {
        let x = random_matrix(rng, m).scale_re(0.25 / (m as f64).sqrt());
        &CMatrix::identity(m) + &x
    };
    let mut local = ChaCha8Rng::seed_from_u64(rng.gen());
    let scalar = near_one(&mut local, n);
    let blocks = alg.block_sizes.iter().map(|&nj| near_one(&mut local, n * nj)).collect();
    let s = UnitizedElement::from_full(alg, scalar, blocks).expect("shapes");
    let inv = s.try_map(|m| m.inverse().ok_or(relk_core::Error::Shape("singular".into()))).expect("invertible");
    (s, inv)
}

/// A random element of `ker φ*` with `Σ|xᵢ| ≤ max_weight`, possibly zero.
pub fn random_kernel_vector(rng: &mut impl Rng, hom: &Homomorphism, max_weight: i64) -> Vec<i64> {
    let k = kernel(&induced_k0(hom)).expect("kernel");
    let gens = &k.inclusion.matrix;
    let zero = vec![0; gens.rows()];
    for _ in 0..20 {
        let mut x = zero.clone();
        for j in 0..gens.cols() {
            let c = rng.gen_range(-1..=1);
            for (xi, g) in x.iter_mut().zip(gens.col(j)) {
                *xi += c * g;
            }
        }
        if x.iter().map(|v| v.abs()).sum::<i64>() <= max_weight {
            return x;
        }
    }
    zero
}

/// `(p, upu*, φ(u)φ(p))`: a valid triple with zero ν₀-class.
pub fn conjugation_triple(rng: &mut impl Rng, hom: &Homomorphism, n: usize) -> K0Triple {
    let rank = rng.gen_range(0..=n);
    let p = random_projection_element(rng, &hom.source, n, rank).p;
    let u = random_unitary_element(rng, &hom.source, n);
    let q = u.mul(&p).and_then(|x| x.mul(&u.adjoint())).expect("same level");
    let v = hom.apply(&u).and_then(|fu| fu.mul(&hom.apply(&p)?)).expect("same level");
    K0Triple::new(p, q, v, hom).expect("shapes")
}

/// A random valid triple and its ν₀-class, known from the construction: a
/// conjugation triple (class 0) plus, when the kernel of φ* allows, a
/// kernel generator for a random x (class x).
pub fn random_k0_triple(rng: &mut impl Rng, hom: &Homomorphism, tol: Tolerance) -> (K0Triple, Vec<i64>) {
    let n = rng.gen_range(1..=2);
    let conj = conjugation_triple(rng, hom, n);
    let x = random_kernel_vector(rng, hom, 2);
    if x.iter().all(|&v| v == 0) {
        return (conj, x);
    }
    let g = kernel_generator_triple(hom, &x, tol).expect("kernel vector");
    (add_k0(&conj, &g).expect("same hom"), x)
}

/// `(sps⁻¹, tqt⁻¹, φ(t)vφ(s)⁻¹)`: idempotents and an invertible morphism
/// between their images, similar to the given triple.
pub fn similarity_twist(rng: &mut impl Rng, sigma: &K0Triple) -> RawK0Triple {
    let hom = &sigma.hom;
    let n = sigma.level();
    let (s, s_inv) = random_invertible_element(rng, &hom.source, n);
    let (t, t_inv) = random_invertible_element(rng, &hom.source, n);
    let e = s.mul(&sigma.p).and_then(|x| x.mul(&s_inv)).expect("level");
    let f = t.mul(&sigma.q).and_then(|x| x.mul(&t_inv)).expect("level");
    let b = hom
        .apply(&t)
        .and_then(|ft| ft.mul(&sigma.v)?.mul(&hom.apply(&s_inv)?))
        .expect("level");
    RawK0Triple::new(e, f, b, hom).expect("shapes")
}
