use std::path::PathBuf;
use std::process::Command;

use relk_cli::export::{bundled_problems, BUNDLED};
use relk_cli::problem::{parse, serialize};
use serde_json::Value;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn relk_env(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_relk"));
    cmd.args(args).env_remove("RELK_FIXTURE_DIR");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("relk runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).expect("utf8"),
        stderr: String::from_utf8(out.stderr).expect("utf8"),
    }
}

fn relk(args: &[&str]) -> Run {
    relk_env(args, &[])
}

fn scratch_dir(tag: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("relk-test-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

#[test]
fn kgroups_of_fixture_algebras() {
    let r = relk(&["kgroups", "ex2_6", "--alg", "C+C"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("K0 = Z^2, K1 = 0"), "{}", r.stdout);
    let r = relk(&["kgroups", "ex2_6", "--alg", "M2"]);
    assert!(r.stdout.contains("K0 = Z,"), "{}", r.stdout);
}

#[test]
fn unknown_names_exit_with_resolution_error() {
    let r = relk(&["kgroups", "ex2_6", "--alg", "M3"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("M3"));
    assert_eq!(relk(&["relative", "no_such_file"]).code, 2);
    assert_eq!(relk(&["verify", "ex2_6", "--triple", "missing"]).code, 2);
}

#[test]
fn relative_groups_of_the_diagonal_inclusion() {
    let r = relk(&["relative", "ex2_6", "--hom", "diag"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("K0(A;B) = Z, generator (v*v,vv*,v)"));
    assert!(r.stdout.contains("K1(A;B) = 0"));
    assert!(r.stdout.contains("exact at all six groups"));
}

#[test]
fn relative_groups_of_the_diagonal_embedding() {
    let r = relk(&["relative", "ex2_7"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("K0(A;B) = 0"));
    assert!(r.stdout.contains("K1(A;B) = Z"));
}

#[test]
fn identity_has_trivial_relative_groups() {
    let r = relk(&["relative", "ex2_6", "--hom", "id"]);
    assert!(r.stdout.contains("K0(A;B) = 0") && r.stdout.contains("K1(A;B) = 0"), "{}", r.stdout);
}

#[test]
fn kdata_outside_the_regime_exits_3() {
    let r = relk(&["relative", "ex2_5", "--hom", "circle_identity"]);
    assert_eq!(r.code, 3);
    assert!(r.stderr.contains("not computable in this regime"));
    let r = relk(&["relative", "ex2_5", "--hom", "ii"]);
    assert!(r.stdout.contains("K0(A;B) = Z") && r.stdout.contains("K1(A;B) = Z"));
}

#[test]
fn interval_ladder_sequence_and_boundary() {
    let r = relk(&["sixterm", "ex2_9"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("K1(phi) = Z/2"));
    assert!(r.stdout.contains("d0: K0(gamma) -> K1(psi) matrix [[-2]]"));
    let r = relk(&["boundary", "ex2_9", "--ladder", "endpoints", "--map", "exp", "--triple", "generator"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("class = -2 in K1(C0(R)) ≅ Z"));
}

#[test]
fn disk_index_map_matches_the_displayed_projection() {
    let r = relk(&["boundary", "ex2_8", "--ladder", "disk", "--map", "index", "--triple", "bott"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("output matches expected matrix, max defect ≤ 1e-6"));
    assert_eq!(relk(&["sixterm", "ex2_8"]).code, 3);
}

#[test]
fn trivial_ladder_has_zero_boundary() {
    let r = relk(&["boundary", "ladders", "--ladder", "trivial", "--map", "index", "--triple", "trivial_loop"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("class = [] in K0(psi) ≅ 0"));
    let r = relk(&["sixterm", "ladders", "--ladder", "shift"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("d0: K0(gamma) -> K1(psi) matrix [[-1]]"));
}

#[test]
fn verify_reports_defects() {
    let r = relk(&["verify", "ex2_6", "--triple", "generator"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("class = [1]"));
    let r = relk(&["verify", "ex2_6", "--triple", "corrupted"]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("v*v - phi(p) defect 0.41"), "{}", r.stdout);
    let r = relk(&["verify", "ex2_6", "--triple", "generator", "--certificate", "rotation"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("certificate rotation: elementary"));
    let r = relk(&["verify", "ex2_7", "--triple", "loop", "--certificate", "whitehead"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
}

#[test]
fn bad_certificate_exits_4() {
    let mut v: Value = serde_json::from_str(BUNDLED.iter().find(|(n, _)| *n == "ex2_7").unwrap().1).unwrap();
    let zero = serde_json::json!({"scalar": [[[0.0, 0.0]]], "blocks": [[[[0.0, 0.0]]]]});
    v["certificates"]["bad"] = serde_json::json!({
        "kind": "k1_path",
        "path": {"domain": "interval", "boundary": "none", "samples": [zero.clone(), zero.clone(), zero]}
    });
    let dir = scratch_dir("cert");
    let path = dir.join("bad.json");
    std::fs::write(&path, v.to_string()).unwrap();
    let r = relk(&["verify", path.to_str().unwrap(), "--triple", "loop", "--certificate", "bad"]);
    assert_eq!(r.code, 4, "{} {}", r.stdout, r.stderr);
}

#[test]
fn fixtures_command_passes() {
    let r = relk(&["fixtures"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert!(!r.stdout.contains("FAIL"));
}

#[test]
fn machine_output_is_versioned_and_reparses() {
    let r = relk(&["--output", "machine", "verify", "ex2_6", "--triple", "generator"]);
    assert_eq!(r.code, 0);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["format"], 1);
    assert_eq!(v["results"]["class"], serde_json::json!([1]));
    assert_eq!(v["results"]["exit_code"], 0);
    let p = parse(&r.stdout).unwrap();
    assert_eq!(serialize(&p), r.stdout);
}

#[test]
fn reports_are_deterministic() {
    let args = ["--output", "machine", "sixterm", "ex2_9"];
    assert_eq!(relk(&args).stdout, relk(&args).stdout);
}

#[test]
fn fixture_dir_override() {
    let dir = scratch_dir("override");
    std::fs::write(dir.join("ex2_6.json"), r#"{"algebras": {"M3": {"blocks": [3]}}}"#).unwrap();
    let r = relk_env(&["kgroups", "ex2_6"], &[("RELK_FIXTURE_DIR", dir.to_str().unwrap())]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("algebra M3"));
}

#[test]
fn bundled_files_are_canonical_and_current() {
    let generated = bundled_problems();
    assert_eq!(generated.len(), BUNDLED.len());
    for ((name, text), (gname, p)) in BUNDLED.iter().zip(&generated) {
        assert_eq!(name, gname);
        assert_eq!(serialize(&parse(text).unwrap()), *text, "{name} is not in canonical form");
        assert_eq!(serialize(p), *text, "{name} differs from the generated file; rerun relk fixtures --export");
    }
}
