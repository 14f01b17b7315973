//! Acceptance criteria 1-10. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

#[path = "../../core/tests/support/mod.rs"]
mod support;

use std::time::{Duration, Instant};

use rand::Rng;
use relk_cli::commands::{cmd_relative, load, read_source};
use relk_core::algmodel::{FDAlgebra, Homomorphism, DEFAULT_GRID};
use relk_core::engine::{
    class_of_k0_triple_fd, class_of_k1_triple_fd, cokernel_generator_triple, diagonal_embedding, diagonal_inclusion,
    disk_index_check, kernel_generator_triple, relative_groups_fd, rotating_loop_triple, shift_generator,
    six_term_thm1, six_term_thm2, IntervalEndpointLadder,
};
use relk_core::intk::{cokernel, induced_k0, kernel};
use relk_core::maps::{bott, cone_delta1, lambda0, lambda1, nu0, nu1, p_v_path, theta};
use relk_core::matcore::{rho_projection, CMatrix, Tolerance};
use relk_core::triples::{add_k0, add_k1, compose_k0, negate_k0, negate_k1, normalize_k0, normalize_k1, K0Triple, K1Triple};
use support::*;

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:.2?}, limit {limit:?}"))
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let (l, ctx) = load(&read_source("ex2_6").map_err(err)?, None, None).map_err(err)?;
    let out = cmd_relative(&l, Some("diag"), ctx).map_err(err)?;
    ensure(out.code == 0, || format!("exit code {}", out.code))?;
    let k0 = out.results["k0"]["describe"].as_str().unwrap_or_default();
    let k1 = out.results["k1"]["describe"].as_str().unwrap_or_default();
    ensure(k0 == "Z" && k1 == "0", || format!("K0 = {k0}, K1 = {k1}"))?;
    ensure(out.lines.iter().any(|s| s.starts_with("K0 generator 1") && s.ends_with(": valid")), || {
        "generator not reported valid".into()
    })?;
    let rg = relative_groups_fd(&diagonal_inclusion(), DEFAULT_GRID, Tolerance::default()).map_err(err)?;
    let g = &rg.k0_generators[0];
    let (vsv, vvs) = (g.v.adjoint().mul(&g.v).map_err(err)?, g.v.mul(&g.v.adjoint()).map_err(err)?);
    let (fp, fq) = (rg.hom.apply(&g.p).map_err(err)?, rg.hom.apply(&g.q).map_err(err)?);
    ensure(g.validate(Tolerance::default()).is_ok() && vsv.dist(&fp) <= 1e-12 && vvs.dist(&fq) <= 1e-12, || "generator is not (v*v, vv*, v)".into())?;
    within(Duration::from_secs(1), start)?;
    Ok("K0 = Z, K1 = 0, generator (v*v, vv*, v) valid".into())
}

fn criterion_2() -> Check {
    let start = Instant::now();
    let tol = Tolerance::default();
    let rg = relative_groups_fd(&diagonal_embedding(), DEFAULT_GRID, tol).map_err(err)?;
    ensure(rg.k0.group.is_trivial() && rg.k1.group.is_isomorphic_to(&[0]), || {
        format!("K0 = {}, K1 = {}", rg.k0.group.describe(), rg.k1.group.describe())
    })?;
    let t = rotating_loop_triple(DEFAULT_GRID, tol).map_err(err)?;
    let c = class_of_k1_triple_fd(&t, None, &rg, tol).map_err(err)?;
    ensure(c == [1], || format!("class of (p,p,g) = {c:?}"))?;
    within(Duration::from_secs(1), start)?;
    Ok("K0 = 0, K1 = Z, class of (p,p,g) = 1".into())
}

fn criterion_3() -> Check {
    let start = Instant::now();
    let tol = Tolerance::default();
    let ladder = IntervalEndpointLadder::new(diagonal_inclusion()).map_err(err)?;
    let rep = ladder.report(DEFAULT_GRID, tol).map_err(err)?;
    ensure(rep.groups[4].is_isomorphic_to(&[2]), || format!("K1(phi) = {}", rep.groups[4].describe()))?;
    ensure(rep.all_exact(), || "sequence not exact".into())?;
    let b = ladder.exp_boundary(&shift_generator(), DEFAULT_GRID, tol).map_err(err)?;
    ensure(b.class == -2, || format!("exp class {}", b.class))?;
    within(Duration::from_secs(5), start)?;
    Ok("K1(phi) = Z/2, exp class -2".into())
}

fn criterion_4() -> Check {
    let start = Instant::now();
    let r = disk_index_check(DEFAULT_GRID, Tolerance::default()).map_err(err)?;
    ensure(r.grid == DEFAULT_GRID && r.passes(1e-6), || format!("max defect {:.3e}", r.max_defect))?;
    within(Duration::from_secs(10), start)?;
    Ok(format!("max entry defect {:.1e} on a {g}x{g} polar grid", r.max_defect, g = DEFAULT_GRID))
}

fn criterion_5() -> Check {
    let start = Instant::now();
    let tol = Tolerance::default();
    let mut rng = rng(5);
    for k in 0..100 {
        let h = random_fd_hom(&mut rng, 4, 4);
        let rep = six_term_thm1(&h, DEFAULT_GRID, tol).map_err(|e| format!("hom {k}: {e}"))?;
        ensure(rep.all_exact(), || format!("hom {k}: {:?}", rep.exactness))?;
    }
    for k in 0..100 {
        let l = random_ladder(&mut rng, 4, 4);
        let rep = six_term_thm2(&l, DEFAULT_GRID, tol).map_err(|e| format!("ladder {k}: {e}"))?;
        ensure(rep.all_exact(), || format!("ladder {k}: {:?}", rep.exactness))?;
    }
    within(Duration::from_secs(60), start)?;
    Ok("100 homomorphisms and 100 ladders exact at all six nodes".into())
}

fn rho_defect(e: &CMatrix, tol: Tolerance) -> Result<f64, String> {
    let r = rho_projection(e, tol).map_err(err)?;
    let er = (e * &r).dist(&r);
    let re = (&r * e).dist(e);
    Ok(relk_core::matcore::projection_defect(&r).max(er).max(re))
}

fn triple_hom(rng: &mut impl Rng) -> Homomorphism {
    random_fd_hom(rng, 3, 3)
}

fn criterion_6() -> Check {
    let tol = Tolerance::default();
    let mut rng = rng(6);
    let mut worst: f64 = 0.0;
    for k in 0..200 {
        let h = triple_hom(&mut rng);
        let (sigma, x) = random_k0_triple(&mut rng, &h, tol);
        let raw = similarity_twist(&mut rng, &sigma);
        ensure(raw.validate(tol).is_ok(), || format!("case {k}: twisted triple invalid: {:?}", raw.validate(tol)))?;
        for e in [&raw.e, &raw.f] {
            for m in std::iter::once(&e.scalar).chain(&e.blocks) {
                worst = worst.max(rho_defect(m, tol)?);
            }
        }
        let (t, _) = normalize_k0(&raw, tol).map_err(|e| format!("case {k}: {e}"))?;
        ensure(t.validate(tol).is_ok(), || format!("case {k}: normalized triple invalid"))?;
        ensure(nu0(&t) == x, || format!("case {k}: class {:?}, expected {x:?}", nu0(&t)))?;
    }
    ensure(worst <= 1e-7, || format!("rho postcondition defect {worst:.3e}"))?;
    Ok(format!("200 triples, rho defect {worst:.1e}"))
}

fn random_normalized(rng: &mut impl Rng, tol: Tolerance) -> Result<K0Triple, String> {
    let h = triple_hom(rng);
    let (sigma, _) = random_k0_triple(rng, &h, tol);
    let raw = similarity_twist(rng, &sigma);
    normalize_k0(&raw, tol).map(|(t, _)| t).map_err(err)
}

fn criterion_7() -> Check {
    let tol = Tolerance::default();
    let mut rng = rng(7);
    let mut worst: f64 = 0.0;
    for k in 0..50 {
        let t = random_normalized(&mut rng, tol)?;
        let pv = p_v_path(&t, DEFAULT_GRID, tol).map_err(|e| format!("case {k}: {e}"))?;
        let (d0, d1) = pv.endpoint_defects(&t).map_err(err)?;
        worst = worst.max(d0).max(d1).max(pv.max_projection_defect());
    }
    ensure(worst <= 1e-7, || format!("defect {worst:.3e}"))?;
    Ok(format!("50 paths, worst defect {worst:.1e}"))
}

/// A hom with nonzero kernel and cokernel on K0 where possible.
fn group_law_hom(rng: &mut impl Rng) -> Homomorphism {
    for _ in 0..50 {
        let h = triple_hom(rng);
        let map = induced_k0(&h);
        let (k0, k1) = (kernel(&map).expect("kernel"), cokernel(&map).expect("cokernel"));
        if !k0.group.is_trivial() && !k1.group.is_trivial() {
            return h;
        }
    }
    diagonal_inclusion()
}

fn criterion_8() -> Check {
    let tol = Tolerance::default();
    let grid = 65;
    let mut rng = rng(8);
    for k in 0..20 {
        let h = group_law_hom(&mut rng);
        let rg = relative_groups_fd(&h, grid, tol).map_err(err)?;
        let class = |t: &K0Triple| class_of_k0_triple_fd(t, &rg).map_err(|e| format!("case {k}: {e}"));
        let x = random_kernel_vector(&mut rng, &h, 2);
        let y = random_kernel_vector(&mut rng, &h, 2);
        let gx = kernel_generator_triple(&h, &x, tol).map_err(err)?;
        let gy = kernel_generator_triple(&h, &y, tol).map_err(err)?;
        let (cx, cy) = (class(&gx)?, class(&gy)?);
        let sum = |a: &[i64], b: &[i64]| a.iter().zip(b).map(|(s, t)| s + t).collect::<Vec<_>>();
        let neg = |a: &[i64]| a.iter().map(|s| -s).collect::<Vec<_>>();
        let s = add_k0(&gx, &gy).map_err(err)?;
        ensure(class(&s)? == sum(&cx, &cy), || format!("case {k}: additivity"))?;
        ensure(class(&negate_k0(&gx))? == neg(&cx), || format!("case {k}: negation"))?;
        // [px ⊕ py, qx ⊕ py, vx ⊕ φ(py)] then [qx ⊕ py, qx ⊕ qy, φ(qx) ⊕ vy].
        let fpy = h.apply(&gy.p).map_err(err)?;
        let fqx = h.apply(&gx.q).map_err(err)?;
        let first = K0Triple::new(
            gx.p.direct_sum(&gy.p).map_err(err)?,
            gx.q.direct_sum(&gy.p).map_err(err)?,
            gx.v.direct_sum(&fpy).map_err(err)?,
            &h,
        )
        .map_err(err)?;
        let second = K0Triple::new(
            gx.q.direct_sum(&gy.p).map_err(err)?,
            gx.q.direct_sum(&gy.q).map_err(err)?,
            fqx.direct_sum(&gy.v).map_err(err)?,
            &h,
        )
        .map_err(err)?;
        let c = compose_k0(&first, &second, tol).map_err(err)?;
        ensure(c.validate(tol).is_ok(), || format!("case {k}: composite invalid"))?;
        ensure(class(&c)? == sum(&class(&first)?, &class(&second)?), || format!("case {k}: composition rule"))?;

        let kb = h.target.block_count();
        let ya: Vec<i64> = (0..kb).map(|_| rng.gen_range(-1..=1)).collect();
        let yb: Vec<i64> = (0..kb).map(|_| rng.gen_range(-1..=1)).collect();
        let ta = cokernel_generator_triple(&h, &ya, grid, tol).map_err(err)?;
        let tb = cokernel_generator_triple(&h, &yb, grid, tol).map_err(err)?;
        let class1 = |t: &K1Triple| class_of_k1_triple_fd(t, None, &rg, tol).map_err(|e| format!("case {k}: {e}"));
        let (ca, cb) = (class1(&ta)?, class1(&tb)?);
        let grp = &rg.k1.group;
        ensure(grp.equal(&ca, &rg.k1.coordinates(&ya).map_err(err)?).map_err(err)?, || format!("case {k}: mu1 class"))?;
        let tab = add_k1(&ta, &tb).map_err(err)?;
        ensure(grp.equal(&class1(&tab)?, &sum(&ca, &cb)).map_err(err)?, || format!("case {k}: K1 additivity"))?;
        ensure(grp.equal(&class1(&negate_k1(&ta))?, &neg(&ca)).map_err(err)?, || format!("case {k}: K1 negation"))?;
    }
    Ok("20 instances: additivity, negation and composition in K0, additivity and negation in K1".into())
}

fn criterion_9() -> Check {
    let tol = Tolerance::default();
    let mut rng = rng(9);
    for k in 0..50 {
        let a = random_algebra(&mut rng, 1..=3, 3, "A");
        let b = random_algebra(&mut rng, 1..=3, 3, "B");
        let zero = Homomorphism::zero(&a, &b);
        let n = rng.gen_range(1..=2);
        let s = rng.gen_range(0..=n);
        let p = random_projection_element(&mut rng, &a, n, s);
        let q = random_projection_element(&mut rng, &a, n, s);
        let expected: Vec<i64> = a
            .block_sizes
            .iter()
            .enumerate()
            .map(|(j, &nj)| (p.block_ranks[j] - q.block_ranks[j]) - nj as i64 * (p.scalar_rank - q.scalar_rank))
            .collect();
        let t = lambda0(&p.p, &q.p, &zero, tol).map_err(|e| format!("case {k}: {e}"))?;
        ensure(nu0(&t) == expected, || format!("case {k}: nu0 = {:?}, expected {expected:?}", nu0(&t)))?;
        let u = random_unitary_element(&mut rng, &a, n);
        let t1 = lambda1(&u, &zero, 65, tol).map_err(|e| format!("case {k}: {e}"))?;
        let back = nu1(&t1).map_err(err)?;
        ensure(back.dist(&u) <= 1e-12, || format!("case {k}: nu1(lambda1(u)) - u = {:.3e}", back.dist(&u)))?;
    }
    Ok("50 classes in each degree".into())
}

/// K1 triples over the fixture homomorphisms.
fn k1_fixtures(tol: Tolerance) -> Result<Vec<K1Triple>, String> {
    let grid = 65;
    let mut out = vec![rotating_loop_triple(grid, tol).map_err(err)?];
    let c = FDAlgebra::new(vec![1, 1], "A").map_err(err)?;
    let shift = Homomorphism::from_multiplicities(&c, &c, &[vec![0, 1], vec![0, 0]], "shift").map_err(err)?;
    let m2 = FDAlgebra::matrix(2);
    let cm2 = FDAlgebra::new(vec![1, 2], "CM2").map_err(err)?;
    let quotient = Homomorphism::from_multiplicities(&cm2, &FDAlgebra::complex(), &[vec![1, 0]], "iii").map_err(err)?;
    let inclusion = Homomorphism::from_multiplicities(&m2, &cm2, &[vec![0], vec![1]], "iv").map_err(err)?;
    for h in [diagonal_embedding(), shift, quotient, inclusion] {
        let rg = relative_groups_fd(&h, grid, tol).map_err(err)?;
        out.extend(rg.k1_generators);
    }
    Ok(out)
}

fn criterion_10() -> Check {
    let tol = Tolerance::default();
    let grid = 129;
    let mut rng = rng(10);
    let mut k0s = vec![normalize_k0(&shift_generator().to_raw(), tol).map_err(err)?.0];
    for _ in 0..5 {
        k0s.push(random_normalized(&mut rng, tol).map_err(|e| format!("normalize: {e}"))?);
    }
    let mut loop_defect: f64 = 0.0;
    for t in &k0s {
        let b = bott(t, grid, tol).map_err(|e| format!("bott: {e}"))?;
        loop_defect = loop_defect.max(b.loop_defect());
    }
    ensure(loop_defect <= 1e-10, || format!("bott loop defect {loop_defect:.3e}"))?;
    let mut proj: f64 = 0.0;
    let k1s = k1_fixtures(tol).map_err(|e| format!("K1 fixtures: {e}"))?;
    for (k, t) in k1s.iter().enumerate() {
        let s = normalize_k1(&t.to_raw(), tol).map_err(|e| format!("K1 fixture {k}: {e}"))?;
        let th = theta(&s, tol).map_err(|e| format!("K1 fixture {k}: {e}"))?;
        proj = proj.max(th.p.max_defect(relk_core::algmodel::UnitizedElement::projection_defect));
        let cone = cone_delta1(&s, tol).map_err(|e| format!("K1 fixture {k}: Delta1 {e}"))?;
        let one = relk_core::algmodel::UnitizedElement::identity(&s.hom.target, s.level());
        let d = cone.f.first().dist(&one).max(cone.f.max_defect(|x| x.unitary_defect())).max(cone.a.unitary_defect());
        ensure(d <= 1e-7, || format!("K1 fixture {k}: cone element defect {d:.3e}"))?;
    }
    ensure(proj <= 1e-7, || format!("theta projection defect {proj:.3e}"))?;
    Ok(format!(
        "bott loop defect {loop_defect:.1e}, theta projection defect {proj:.1e}, {} cone elements",
        k1s.len()
    ))
}

fn main() {
    let criteria: [(usize, fn() -> Check); 10] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
    ];
    let mut failed = 0;
    for (n, f) in criteria {
        let start = Instant::now();
        let r = f();
        let t = start.elapsed();
        match r {
            Ok(msg) => println!("PASS criterion {n}: {msg} ({t:.2?})"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {n}: {msg} ({t:.2?})");
            }
        }
    }
    if failed > 0 {
        println!("{failed} of 10 criteria failed");
        std::process::exit(1);
    }
}
