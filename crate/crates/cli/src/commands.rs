//! One function per subcommand. Each returns an [`Outcome`]: the text report,
//! the machine-readable results and the exit code.

use std::path::{Path, PathBuf};

use relk_core::algmodel::{FDAlgebra, Homomorphism, UnitizedElement};
use relk_core::engine::{
    class_of_k0_triple_fd, class_of_k1_triple_fd, disk_expected_projection, disk_index_check, fixtures,
    relative_groups_fd, relative_groups_kdata, run_fixture, six_term_thm1, six_term_thm2, IntervalEndpointLadder,
    SixTermReport,
};
use relk_core::intk::{k_groups, GroupPresentation, IntMatrix, NodeVerdict};
use relk_core::maps::{exp_map, index_map, LiftData};
use relk_core::matcore::{CMatrix, Tolerance, C64};
use relk_core::triples::{
    constant_certificate, normalize_k0, normalize_k1, rotation_2x2, validate, verify_elementary, whitehead_k1,
    CertificateReport, HomotopyCertificate, K0Triple, K1Triple, Triple,
};
use serde_json::{json, Map, Value};

use crate::error::{CliError, EXIT_OK, EXIT_VERIFICATION};
use crate::export::{bundled_problems, BUNDLED};
use crate::problem::{
    element_to_spec, parse, serialize, Loaded, ResolvedCertificate, ResolvedHom,
    ResolvedLadder, ResolvedTriple,
};

/// Numeric settings after applying flags over file settings over defaults.
#[derive(Debug, Clone, Copy)]
pub struct Context {
    pub tol: Tolerance,
    pub grid: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub lines: Vec<String>,
    pub results: Map<String, Value>,
    pub code: i32,
}

impl Outcome {
    fn new() -> Self {
        Outcome { lines: Vec::new(), results: Map::new(), code: EXIT_OK }
    }

    fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    fn set(&mut self, key: &str, v: Value) {
        self.results.insert(key.into(), v);
    }

    fn fail(&mut self) {
        self.code = EXIT_VERIFICATION;
    }
}

/// Reads a problem file: an existing path, else a fixture name looked up in
/// `RELK_FIXTURE_DIR` when set, else among the bundled fixtures.
pub fn read_source(arg: &str) -> Result<String, CliError> {
    let path = Path::new(arg);
    if path.is_file() {
        return std::fs::read_to_string(path).map_err(|e| CliError::resolution(format!("cannot read {arg}: {e}")));
    }
    let name = arg.strip_suffix(".json").unwrap_or(arg);
    if let Ok(dir) = std::env::var("RELK_FIXTURE_DIR") {
        let p = PathBuf::from(dir).join(format!("{name}.json"));
        return std::fs::read_to_string(&p)
            .map_err(|e| CliError::resolution(format!("no problem file {arg:?} (tried {}: {e})", p.display())));
    }
    BUNDLED
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| text.to_string())
        .ok_or_else(|| CliError::resolution(format!("no problem file or bundled fixture named {arg:?}")))
}

/// Flags override the file's settings, which override the defaults.
pub fn context(loaded_settings: &crate::problem::Settings, tolerance: Option<f64>, grid: Option<usize>) -> Result<Context, CliError> {
    let eps = tolerance.or(loaded_settings.tolerance).unwrap_or(Tolerance::default().eps);
    let grid = grid.or(loaded_settings.grid).unwrap_or(relk_core::algmodel::DEFAULT_GRID);
    if !(eps > 0.0) || grid < 3 {
        return Err(CliError::resolution("tolerance must be positive and grid at least 3"));
    }
    Ok(Context { tol: Tolerance { eps }, grid })
}

pub fn load(text: &str, tolerance: Option<f64>, grid: Option<usize>) -> Result<(Loaded, Context), CliError> {
    let file = parse(text)?;
    let ctx = context(&file.settings, tolerance, grid)?;
    Ok((Loaded::new(file, ctx.tol)?, ctx))
}

/// The machine report: the problem document with `format` and `results`.
pub fn machine_report(loaded: Option<&Loaded>, command: &str, out: &Outcome) -> String {
    let mut file = loaded.map(|l| l.file.clone()).unwrap_or_default();
    let mut results = out.results.clone();
    results.insert("command".into(), json!(command));
    results.insert("exit_code".into(), json!(out.code));
    results.insert("report".into(), json!(out.lines));
    file.format = Some(1);
    file.results = Some(Value::Object(results));
    serialize(&file)
}

fn fmt_real(x: f64) -> String {
    let r = (x * 1e6).round() / 1e6;
    if r == 0.0 {
        return "0".into();
    }
    let s = format!("{r:.6}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn fmt_complex(c: C64) -> String {
    let (re, im) = (fmt_real(c.re), fmt_real(c.im));
    match (re.as_str(), im.as_str()) {
        (_, "0") => re,
        ("0", _) => format!("{im}i"),
        _ if im.starts_with('-') => format!("{re}{im}i"),
        _ => format!("{re}+{im}i"),
    }
}

pub fn fmt_matrix(m: &CMatrix) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|i| format!("[{}]", (0..m.cols()).map(|j| fmt_complex(m[(i, j)])).collect::<Vec<_>>().join(", ")))
        .collect();
    format!("[{}]", rows.join(", "))
}

fn fmt_element(x: &UnitizedElement) -> String {
    let blocks: Vec<String> =
        x.blocks.iter().enumerate().map(|(i, b)| format!("block {} {}", i + 1, fmt_matrix(b))).collect();
    format!("scalar {}; {}", fmt_matrix(&x.scalar), blocks.join("; "))
}

fn fmt_ints(x: &[i64]) -> String {
    format!("[{}]", x.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", "))
}

fn fmt_int_matrix(m: &IntMatrix) -> String {
    if m.rows() == 0 || m.cols() == 0 {
        return format!("({} x {} zero)", m.rows(), m.cols());
    }
    format!("[{}]", m.to_rows().iter().map(|r| fmt_ints(r)).collect::<Vec<_>>().join(", "))
}

fn group_json(g: &GroupPresentation) -> Value {
    json!({
        "describe": g.describe(),
        "invariant_factors": g.nontrivial_factors(),
        "generator_tags": g.generator_tags,
    })
}

fn k0_triple_json(t: &K0Triple) -> Value {
    json!({"kind": "k0", "p": element_to_spec(&t.p), "q": element_to_spec(&t.q), "v": element_to_spec(&t.v)})
}

fn k1_triple_json(t: &K1Triple) -> Value {
    json!({
        "kind": "k1",
        "p": element_to_spec(&t.p),
        "u": element_to_spec(&t.u),
        "g_nodes": t.g.samples.len(),
        "g_mid": element_to_spec(&t.g.samples[t.g.samples.len() / 2]),
    })
}

fn triple_json(t: &Triple) -> Value {
    match t {
        Triple::K0(t) => k0_triple_json(t),
        Triple::K1(t) => k1_triple_json(t),
        Triple::RawK0(t) => json!({"kind": "raw_k0", "e": element_to_spec(&t.e), "f": element_to_spec(&t.f), "b": element_to_spec(&t.b)}),
        Triple::RawK1(t) => json!({"kind": "raw_k1", "e": element_to_spec(&t.e), "a": element_to_spec(&t.a), "g_nodes": t.g.samples.len()}),
    }
}

fn only_name<'a, T>(what: &str, map: &'a std::collections::BTreeMap<String, T>, given: Option<&'a str>) -> Result<&'a str, CliError> {
    if let Some(n) = given {
        return Ok(n);
    }
    if map.len() == 1 {
        return Ok(map.keys().next().expect("one entry"));
    }
    let names: Vec<&str> = map.keys().map(String::as_str).collect();
    Err(CliError::resolution(format!("choose a {what} with --{what}: one of {}", names.join(", "))))
}

fn describe_algebra(a: &FDAlgebra) -> String {
    let parts: Vec<String> = a.block_sizes.iter().map(|&n| if n == 1 { "C".into() } else { format!("M{n}") }).collect();
    parts.join(" + ")
}

pub fn cmd_kgroups(l: &Loaded, alg: Option<&str>) -> Result<Outcome, CliError> {
    let names: Vec<String> = match alg {
        Some(n) => {
            l.algebra(n)?;
            vec![n.to_string()]
        }
        None => l.algebras.keys().cloned().collect(),
    };
    if names.is_empty() {
        return Err(CliError::resolution("the problem file defines no algebras"));
    }
    let mut out = Outcome::new();
    let mut res = Map::new();
    for n in names {
        let a = l.algebra(&n)?;
        let (k0, k1) = k_groups(a);
        out.line(format!("algebra {n} = {}", describe_algebra(a)));
        out.line(format!("K0 = {}, K1 = {}", k0.describe(), k1.describe()));
        for t in &k0.generator_tags {
            out.line(format!("  K0 generator: {t}"));
        }
        res.insert(n, json!({"k0": group_json(&k0), "k1": group_json(&k1)}));
    }
    out.set("kgroups", Value::Object(res));
    Ok(out)
}

fn is_injective(h: &Homomorphism) -> bool {
    let m = h.multiplicity_matrix();
    (0..m.cols()).all(|j| (0..m.rows()).any(|i| m.get(i, j) > 0))
}

fn triple_lines(out: &mut Outcome, indent: &str, t: &Triple) {
    match t {
        Triple::K0(t) => {
            out.line(format!("{indent}p = {}", fmt_element(&t.p)));
            out.line(format!("{indent}q = {}", fmt_element(&t.q)));
            out.line(format!("{indent}v = {}", fmt_element(&t.v)));
        }
        Triple::K1(t) => {
            out.line(format!("{indent}p = {}", fmt_element(&t.p)));
            out.line(format!("{indent}u = {}", fmt_element(&t.u)));
            out.line(format!("{indent}g(1/2) = {} ({} nodes)", fmt_element(&t.g.samples[t.g.samples.len() / 2]), t.g.samples.len()));
        }
        Triple::RawK0(t) => {
            out.line(format!("{indent}e = {}", fmt_element(&t.e)));
            out.line(format!("{indent}f = {}", fmt_element(&t.f)));
            out.line(format!("{indent}b = {}", fmt_element(&t.b)));
        }
        Triple::RawK1(t) => {
            out.line(format!("{indent}e = {}", fmt_element(&t.e)));
            out.line(format!("{indent}a = {}", fmt_element(&t.a)));
        }
    }
}

fn verdict_text(v: &NodeVerdict) -> String {
    match v {
        NodeVerdict::Exact => "exact".into(),
        NodeVerdict::Defect(d) => format!("not exact ({d})"),
    }
}

fn sixterm_lines(out: &mut Outcome, rep: &SixTermReport) {
    let chain: Vec<String> = (0..6)
        .map(|k| format!("{} = {} --{}-->", rep.labels[k], rep.groups[k].describe(), rep.map_labels[k]))
        .collect();
    out.line(format!("six-term sequence: {} {}", chain.join(" "), rep.labels[0]));
    for k in 0..6 {
        out.line(format!(
            "  {}: {} -> {} matrix {}",
            rep.map_labels[k],
            rep.labels[k],
            rep.labels[(k + 1) % 6],
            fmt_int_matrix(&rep.maps[k].matrix)
        ));
    }
    for k in 0..6 {
        out.line(format!("  exactness at {}: {}", rep.labels[k], verdict_text(&rep.exactness[k])));
    }
    if rep.all_exact() {
        out.line("exact at all six groups");
    } else {
        out.line("sequence is NOT exact");
        out.fail();
    }
    let maps: Vec<Value> = (0..6)
        .map(|k| {
            json!({
                "label": rep.map_labels[k],
                "source": rep.labels[k],
                "target": rep.labels[(k + 1) % 6],
                "matrix": rep.maps[k].matrix.to_rows(),
            })
        })
        .collect();
    let groups: Map<String, Value> = (0..6).map(|k| (rep.labels[k].clone(), group_json(&rep.groups[k]))).collect();
    let exactness: Map<String, Value> =
        (0..6).map(|k| (rep.labels[k].clone(), json!(verdict_text(&rep.exactness[k])))).collect();
    out.set(
        "six_term",
        json!({"groups": groups, "maps": maps, "exactness": exactness, "all_exact": rep.all_exact()}),
    );
}

fn relative_fd(out: &mut Outcome, name: &str, h: &Homomorphism, ctx: Context) -> Result<(), CliError> {
    let rg = relative_groups_fd(h, ctx.grid, ctx.tol)?;
    out.line(format!(
        "homomorphism {name}: {} -> {}, multiplicities {}",
        describe_algebra(&h.source),
        describe_algebra(&h.target),
        fmt_int_matrix(&h.multiplicity_matrix())
    ));
    let form = if is_injective(h) { "(v*v,vv*,v)" } else { "(p,q,v)" };
    let k0 = rg.k0.group.describe();
    let k1 = rg.k1.group.describe();
    match rg.k0_generators.len() {
        0 => out.line(format!("K0(A;B) = {k0}")),
        1 => out.line(format!("K0(A;B) = {k0}, generator {form}")),
        n => out.line(format!("K0(A;B) = {k0}, {n} generators {form}")),
    }
    match rg.k1_generators.len() {
        0 => out.line(format!("K1(A;B) = {k1}")),
        1 => out.line(format!("K1(A;B) = {k1}, generator (p,u,g)")),
        n => out.line(format!("K1(A;B) = {k1}, {n} generators (p,u,g)")),
    }
    let mut gens = Vec::new();
    for (k, t) in rg.k0_generators.iter().enumerate() {
        let valid = t.validate(ctx.tol).is_ok();
        out.line(format!(
            "K0 generator {} (kernel element {}): {}",
            k + 1,
            fmt_ints(&rg.k0.inclusion.matrix.col(k)),
            if valid { "valid" } else { "INVALID" }
        ));
        triple_lines(out, "  ", &Triple::K0(t.clone()));
        if !valid {
            out.fail();
        }
        gens.push(k0_triple_json(t));
    }
    for (k, t) in rg.k1_generators.iter().enumerate() {
        let valid = t.validate(ctx.tol).is_ok();
        out.line(format!(
            "K1 generator {} (mu1 of {}): {}",
            k + 1,
            fmt_ints(&rg.k1.lifts.col(k)),
            if valid { "valid" } else { "INVALID" }
        ));
        triple_lines(out, "  ", &Triple::K1(t.clone()));
        if !valid {
            out.fail();
        }
        gens.push(k1_triple_json(t));
    }
    out.set("k0", group_json(&rg.k0.group));
    out.set("k1", group_json(&rg.k1.group));
    out.set("generators", Value::Array(gens));
    let rep = six_term_thm1(h, ctx.grid, ctx.tol)?;
    sixterm_lines(out, &rep);
    Ok(())
}

pub fn cmd_relative(l: &Loaded, hom: Option<&str>, ctx: Context) -> Result<Outcome, CliError> {
    let name = only_name("hom", &l.homs, hom)?;
    let mut out = Outcome::new();
    match l.hom(name)? {
        ResolvedHom::Fd(h) => relative_fd(&mut out, name, h, ctx)?,
        ResolvedHom::Kdata { a, b, phi0, phi1 } => {
            let (k0, k1) = relative_groups_kdata(a, b, phi0, phi1)?;
            out.line(format!("homomorphism {name}: {} -> {} (from K-data)", a.label, b.label));
            out.line(format!("K0(A;B) = {}", k0.describe()));
            out.line(format!("K1(A;B) = {}", k1.describe()));
            out.set("k0", group_json(&k0));
            out.set("k1", group_json(&k1));
        }
    }
    Ok(out)
}

pub fn cmd_sixterm(l: &Loaded, ladder: Option<&str>, ctx: Context) -> Result<Outcome, CliError> {
    let name = only_name("ladder", &l.ladders, ladder)?;
    let rep = match l.ladder(name)? {
        ResolvedLadder::Fd(lad) => six_term_thm2(lad, ctx.grid, ctx.tol)?,
        ResolvedLadder::IntervalEndpoint(lad) => lad.report(ctx.grid, ctx.tol)?,
        ResolvedLadder::DiskBoundary => {
            return Err(CliError::not_computable(
                "the disk ladder has no finite-dimensional presentation of its groups; use boundary --map index",
            ))
        }
    };
    let mut out = Outcome::new();
    out.line(format!("ladder {name}"));
    sixterm_lines(&mut out, &rep);
    Ok(out)
}

fn fd_triple<'a>(l: &'a Loaded, name: &str) -> Result<&'a Triple, CliError> {
    match l.triple(name)? {
        ResolvedTriple::Fd(t) => Ok(t),
        ResolvedTriple::Symbolic(d) => {
            Err(CliError::not_computable(format!("triple {name} = {d} has no finite-dimensional entries")))
        }
    }
}

fn as_k0(t: &Triple, ctx: Context) -> Result<K0Triple, CliError> {
    match t {
        Triple::K0(t) => Ok(normalize_k0(&t.to_raw(), ctx.tol)?.0),
        Triple::RawK0(t) => Ok(normalize_k0(t, ctx.tol)?.0),
        _ => Err(CliError::resolution("the exponential map takes a K0 triple")),
    }
}

fn as_k1(t: &Triple, ctx: Context) -> Result<K1Triple, CliError> {
    match t {
        Triple::K1(t) => Ok(t.clone()),
        Triple::RawK1(t) => Ok(normalize_k1(t, ctx.tol)?),
        _ => Err(CliError::resolution("the index map takes a K1 triple")),
    }
}

fn require_over(t: &Triple, h: &Homomorphism, what: &str) -> Result<(), CliError> {
    let th = match t {
        Triple::K0(t) => &t.hom,
        Triple::K1(t) => &t.hom,
        Triple::RawK0(t) => &t.hom,
        Triple::RawK1(t) => &t.hom,
    };
    if relk_core::triples::same_hom(th, h) {
        Ok(())
    } else {
        Err(CliError::resolution(format!("the triple must be a triple over {what}")))
    }
}

fn boundary_interval(
    out: &mut Outcome,
    lad: &IntervalEndpointLadder,
    map: &str,
    t: &Triple,
    ctx: Context,
) -> Result<(), CliError> {
    require_over(t, &lad.gamma, "gamma")?;
    match map {
        "exp" => {
            let s = as_k0(t, ctx)?;
            let b = lad.exp_boundary(&s, ctx.grid, ctx.tol)?;
            out.line("output triple (1, u, 1) over C0(0,1) with u(x) = exp(2 pi i (a(x) ⊕ 0)):");
            for k in 0..=4 {
                let idx = k * (b.u.samples.len() - 1) / 4;
                out.line(format!("  u({}) = {}", fmt_real(b.u.node(idx)), fmt_matrix(&b.u.samples[idx].blocks[0])));
            }
            out.line(format!("winding of det u = {}", b.winding));
            out.line(format!("class = {} in K1(C0(R)) ≅ Z", b.class));
            out.set("class", json!([b.class]));
            out.set("winding", json!(b.winding));
        }
        "index" => {
            out.line("K0(C0(0,1)) = 0: the index map is zero");
            out.line("class = 0 in K0(C0(R)) = 0");
            out.set("class", json!([]));
        }
        _ => unreachable!("map is validated by the caller"),
    }
    Ok(())
}

fn boundary_disk(out: &mut Outcome, map: &str, t: &ResolvedTriple, ctx: Context) -> Result<(), CliError> {
    if map != "index" {
        return Err(CliError::not_computable("only the index map is computed for the disk ladder"));
    }
    if let ResolvedTriple::Fd(_) = t {
        return Err(CliError::resolution("the disk ladder takes the symbolic triple (1,z,g)"));
    }
    let r = disk_index_check(ctx.grid, ctx.tol)?;
    out.line("output first entry P(z) = w (1⊕0) w* with w = [[z, -sqrt(1-|z|^2)], [sqrt(1-|z|^2), conj z]]:");
    for &(rad, th) in &[(0.0, 0.0), (0.5, 0.0), (0.5, std::f64::consts::FRAC_PI_2), (1.0, 0.0)] {
        out.line(format!("  P({}) = {}", fmt_complex(C64::from_polar(rad, th)), fmt_matrix(&disk_expected_projection(rad, th))));
    }
    out.line(format!(
        "defects on a {0}x{0} polar grid: expected matrix {1:.2e}, projection {2:.2e}, unitary {3:.2e}, boundary lift {4:.2e}",
        r.grid, r.max_defect, r.projection_defect, r.unitary_defect, r.lift_defect
    ));
    let worst = r.max_defect.max(r.projection_defect).max(r.unitary_defect).max(r.lift_defect);
    out.set("max_defect", json!(worst));
    if r.passes(1e-6) {
        out.line("output matches expected matrix, max defect ≤ 1e-6");
    } else {
        out.line(format!("output does NOT match expected matrix: max defect {worst:.2e} > 1e-6"));
        out.fail();
    }
    Ok(())
}

pub fn cmd_boundary(l: &Loaded, ladder: &str, map: &str, triple: &str, ctx: Context) -> Result<Outcome, CliError> {
    if map != "index" && map != "exp" {
        return Err(CliError::resolution(format!("--map must be index or exp, not {map:?}")));
    }
    let mut out = Outcome::new();
    out.line(format!("ladder {ladder}, {} map, triple {triple}", if map == "exp" { "exponential" } else { "index" }));
    match l.ladder(ladder)? {
        ResolvedLadder::DiskBoundary => boundary_disk(&mut out, map, l.triple(triple)?, ctx)?,
        ResolvedLadder::IntervalEndpoint(lad) => boundary_interval(&mut out, lad, map, fd_triple(l, triple)?, ctx)?,
        ResolvedLadder::Fd(lad) => {
            let t = fd_triple(l, triple)?;
            require_over(t, &lad.gamma, "gamma")?;
            let rpsi = relative_groups_fd(&lad.psi, ctx.grid, ctx.tol)?;
            if map == "exp" {
                let s = as_k0(t, ctx)?;
                let o = exp_map(&s, lad, &LiftData::default(), ctx.grid, ctx.tol)?;
                out.line(format!("output triple over psi{}:", if o.negated { " (class negated)" } else { "" }));
                triple_lines(&mut out, "  ", &Triple::K1(o.triple.clone()));
                let c = class_of_k1_triple_fd(&o.triple, None, &rpsi, ctx.tol)?;
                let c: Vec<i64> = if o.negated { c.iter().map(|x| -x).collect() } else { c };
                let c = rpsi.k1.group.canonical(&c);
                out.line(format!("class = {} in K1(psi) ≅ {}", fmt_ints(&c), rpsi.k1.group.describe()));
                out.set("output", k1_triple_json(&o.triple));
                out.set("class", json!(c));
            } else {
                let s = as_k1(t, ctx)?;
                let o = index_map(&s, lad, &LiftData::default(), ctx.tol)?;
                out.line("output triple over psi:");
                triple_lines(&mut out, "  ", &Triple::K0(o.clone()));
                let c = class_of_k0_triple_fd(&o, &rpsi)?;
                out.line(format!("class = {} in K0(psi) ≅ {}", fmt_ints(&c), rpsi.k0.group.describe()));
                out.set("output", k0_triple_json(&o));
                out.set("class", json!(c));
            }
        }
    }
    Ok(out)
}

fn certificate_lines(out: &mut Outcome, name: &str, r: &CertificateReport) {
    out.set(
        "certificate",
        json!({"name": name, "ok": r.is_ok(), "max_defect": r.max_defect, "max_step": r.max_step,
               "min_conditioning": if r.min_conditioning.is_finite() { json!(r.min_conditioning) } else { Value::Null }}),
    );
    if r.is_ok() {
        out.line(format!("certificate {name}: elementary (max defect {:.2e}, max step {:.2e})", r.max_defect, r.max_step));
    } else {
        out.line(format!("certificate {name}: REJECTED"));
        for v in &r.violations {
            out.line(format!("  {v}"));
        }
        out.fail();
    }
}

pub fn cmd_verify(l: &Loaded, triple: &str, certificate: Option<&str>, ctx: Context) -> Result<Outcome, CliError> {
    let t = fd_triple(l, triple)?;
    let cert = certificate.map(|c| l.certificate(c).map(|r| (c, r))).transpose()?;
    let mut out = Outcome::new();
    let report = validate(t, ctx.tol);
    let (shape, hom) = match t {
        Triple::K0(s) => ("(p,q,v)", &s.hom),
        Triple::K1(s) => ("(p,u,g)", &s.hom),
        Triple::RawK0(s) => ("(e,f,b)", &s.hom),
        Triple::RawK1(s) => ("(e,a,g)", &s.hom),
    };
    out.line(format!("triple {triple}: {shape} over {}", hom.label));
    let violations: Vec<Value> =
        report.violations.iter().map(|v| json!({"kind": v.kind, "label": v.label, "defect": v.defect})).collect();
    out.set("valid", json!(report.is_ok()));
    out.set("violations", Value::Array(violations));
    if !report.is_ok() {
        for v in &report.violations {
            out.line(format!("  {v}"));
        }
        out.line("INVALID");
        out.fail();
        return Ok(out);
    }
    out.line(format!("valid: every defect ≤ {:e}", ctx.tol.eps));
    let mut k1_cert = None;
    if let Some((name, c)) = cert {
        match (c, t) {
            (ResolvedCertificate::Rotation, Triple::K0(s)) => {
                let (target, hc) = rotation_2x2(s, ctx.grid, ctx.tol)?;
                certificate_lines(&mut out, name, &verify_elementary(&Triple::K0(target), &hc, ctx.tol)?);
            }
            (ResolvedCertificate::Constant, Triple::K0(s)) => {
                let hc = constant_certificate(s, ctx.grid)?;
                certificate_lines(&mut out, name, &verify_elementary(t, &hc, ctx.tol)?);
            }
            (ResolvedCertificate::Whitehead, Triple::K1(s)) => {
                let (target, hc) = whitehead_k1(s, ctx.grid, ctx.tol)?;
                certificate_lines(&mut out, name, &verify_elementary(&Triple::K1(target), &hc, ctx.tol)?);
            }
            (ResolvedCertificate::HomotopyK0(path), Triple::K0(_) | Triple::RawK0(_)) => {
                let hc = HomotopyCertificate::K0 { path: path.clone() };
                certificate_lines(&mut out, name, &verify_elementary(t, &hc, ctx.tol)?);
            }
            (ResolvedCertificate::K1Path(path), Triple::K1(_) | Triple::RawK1(_)) => {
                k1_cert = Some(path);
                out.line(format!("certificate {name}: path from p to u, used for the class below"));
            }
            _ => return Err(CliError::resolution(format!("certificate {name} does not apply to triple {triple}"))),
        }
    }
    if out.code == EXIT_OK {
        let rg = relative_groups_fd(hom, ctx.grid, ctx.tol)?;
        let class = match t {
            Triple::K0(s) => class_of_k0_triple_fd(s, &rg)?,
            Triple::RawK0(_) => class_of_k0_triple_fd(&as_k0(t, ctx)?, &rg)?,
            Triple::K1(s) => class_of_k1_triple_fd(s, k1_cert, &rg, ctx.tol)?,
            Triple::RawK1(_) => class_of_k1_triple_fd(&as_k1(t, ctx)?, k1_cert, &rg, ctx.tol)?,
        };
        let (which, group) = match t {
            Triple::K0(_) | Triple::RawK0(_) => ("K0", &rg.k0.group),
            _ => ("K1", &rg.k1.group),
        };
        out.line(format!("class = {} in {which}(A;B) ≅ {}", fmt_ints(&class), group.describe()));
        out.set("class", json!(class));
        out.set("triple", triple_json(t));
    }
    Ok(out)
}

pub fn cmd_fixtures(list: bool, export: Option<&Path>, ctx: Context) -> Result<Outcome, CliError> {
    let mut out = Outcome::new();
    if let Some(dir) = export {
        std::fs::create_dir_all(dir).map_err(|e| CliError::resolution(format!("cannot create {}: {e}", dir.display())))?;
        for (name, p) in bundled_problems() {
            let path = dir.join(format!("{name}.json"));
            std::fs::write(&path, serialize(&p))
                .map_err(|e| CliError::resolution(format!("cannot write {}: {e}", path.display())))?;
            out.line(format!("wrote {}", path.display()));
        }
        return Ok(out);
    }
    if list {
        for f in fixtures() {
            out.line(format!("{}: {}", f.name, f.title));
        }
        for (name, _) in BUNDLED {
            out.line(format!("problem file {name}.json"));
        }
        return Ok(out);
    }
    let mut all = Map::new();
    for f in fixtures() {
        out.line(format!("{}: {}", f.name, f.title));
        let checks = match run_fixture(&f, ctx.grid, ctx.tol) {
            Ok(c) => c,
            Err(e) => {
                out.line(format!("  FAIL: {e}"));
                out.fail();
                all.insert(f.name.clone(), json!({"error": e.to_string()}));
                continue;
            }
        };
        let mut rows = Vec::new();
        for c in &checks {
            out.line(format!(
                "  {} {}: expected {}, got {}",
                if c.ok { "PASS" } else { "FAIL" },
                c.what,
                c.expected,
                c.actual
            ));
            if !c.ok {
                out.fail();
            }
            rows.push(json!({"what": c.what, "expected": c.expected, "actual": c.actual, "ok": c.ok}));
        }
        all.insert(f.name.clone(), Value::Array(rows));
    }
    out.set("fixtures", Value::Object(all));
    Ok(out)
}
