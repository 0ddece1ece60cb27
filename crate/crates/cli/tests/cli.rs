use std::path::PathBuf;

use assert_cmd::Command;
use predicates::prelude::*;

fn pssm() -> Command {
    let mut c = Command::cargo_bin("pssm").unwrap();
    c.env_remove("PSSM_COLOR");
    c
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name)
}

fn stdout(args: &[&str]) -> String {
    let out = pssm().args(args).output().unwrap();
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn solve_burgers_json() {
    pssm()
        .args(["solve", "--problem", "burgers-stationary", "--format", "json"])
        .assert()
        .success()
        .stdout(predicate::str::contains(r#""a_3": "(a_0^2*a_1 + nu*a_1^2)/(6*nu^2)""#))
        .stdout(predicate::str::contains(r#""schema": 1"#));
}

#[test]
fn solve_boundary_layer_is_partial() {
    let out = pssm().args(["solve", "--problem", "boundary-layer"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["resolved"], false);
    assert_eq!(v["unresolved"].as_array().unwrap().len(), 3);
}

#[test]
fn kdv_even_branch() {
    let s = stdout(&["solve", "--problem", "kdv", "--set", "a_1=0", "--format", "text"]);
    assert!(s.contains("a_3 = 0\n"), "{s}");
    assert!(s.contains("a_4 = (c*a_2 - 6*a_0*a_2)/(12*k^2)\n"), "{s}");
    assert!(s.contains("a_7 = 0\n"), "{s}");
}

#[test]
fn verify_boundary_layer_fixture() {
    let f = fixture("boundary-layer-closed-form.json");
    pssm()
        .args(["verify", "--problem", "boundary-layer", "--candidate"])
        .arg(&f)
        .assert()
        .success()
        .stdout(predicate::str::contains(r#""all_zero": true"#));

    let text = std::fs::read_to_string(&f).unwrap();
    let bad = text.replace("-a_1_0^5/(540*nu^4)", "a_1_0^5/(540*nu^4)");
    assert_ne!(bad, text);
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, bad).unwrap();
    pssm()
        .args(["verify", "--problem", "boundary-layer", "--format", "text", "--candidate"])
        .arg(&p)
        .assert()
        .code(2)
        .stdout(predicate::str::contains("equation 0 at (1,1)"));
}

#[test]
fn verify_partial_candidate() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("a20.json");
    std::fs::write(&p, r#"{"values": {"a_2_0": "(a_0_1 + a_0_0*a_1_0)/(2*nu)"}}"#).unwrap();
    pssm()
        .args(["verify", "--problem", "burgers-xt", "--complete", "--candidate"])
        .arg(&p)
        .assert()
        .success();
    pssm()
        .args(["verify", "--problem", "burgers-xt", "--candidate"])
        .arg(&p)
        .assert()
        .code(1)
        .stderr(predicate::str::contains("missing unknowns"));
    std::fs::write(&p, r#"{"values": {"a_2_0": "a_0_1/(2*nu)"}}"#).unwrap();
    pssm()
        .args(["verify", "--problem", "burgers-xt", "--complete", "--candidate"])
        .arg(&p)
        .assert()
        .code(2);
}

#[test]
fn eval_against_tan() {
    let s = stdout(&[
        "eval",
        "--problem",
        "burgers-stationary",
        "--set",
        "a_0=0,a_1=1,nu=1",
        "--var",
        "x=-0.5:0.5:0.05",
        "--oracle",
        "tan",
    ]);
    let mut r = csv::Reader::from_reader(s.as_bytes());
    assert_eq!(
        r.headers().unwrap().iter().collect::<Vec<_>>(),
        ["x", "series", "oracle", "abserr"]
    );
    let rows: Vec<_> = r.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 21);
    for row in &rows {
        let err: f64 = row[3].parse().unwrap();
        assert!(err <= 1e-4);
    }
}

#[test]
fn eval_single_point_and_assumption() {
    let s = stdout(&[
        "eval", "--problem", "burgers-stationary", "--set", "a_0=0,a_1=1,nu=1", "--var", "x=0",
    ]);
    assert_eq!(s, "x,series\n0,0\n");
    let s = stdout(&[
        "eval", "--problem", "burgers-stationary-odd", "--set", "a_1=1,nu=1", "--var", "x=0.5",
        "--precision", "exact",
    ]);
    let row = s.lines().nth(1).unwrap();
    let (x, v) = row.split_once(',').unwrap();
    assert_eq!(x, "0.5");
    assert!(v.contains('/') && !v.contains('.'), "{row}");
    pssm()
        .args([
            "eval", "--problem", "burgers-stationary", "--set", "a_0=0,a_1=1,nu=0", "--var", "x=0",
        ])
        .assert()
        .code(1)
        .stderr(predicate::str::contains("nu != 0"));
}

#[test]
fn outputs_are_deterministic() {
    for args in [
        ["solve", "--problem", "coupled-kdv"],
        ["export-system", "--problem", "burgers-xt"],
        ["residual", "--problem", "kdv"],
    ] {
        assert_eq!(stdout(&args), stdout(&args));
    }
}

#[test]
fn file_and_problem_are_interchangeable() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("kdv.pde");
    std::fs::write(&p, pssm_core::model::builtin_source("kdv").unwrap()).unwrap();
    let from_file = pssm().arg("solve").arg("--file").arg(&p).output().unwrap();
    assert_eq!(from_file.stdout, stdout(&["solve", "--problem", "kdv"]).into_bytes());
}

#[test]
fn residual_and_export() {
    pssm()
        .args(["residual", "--problem", "burgers-xt", "--format", "text"])
        .assert()
        .success()
        .stdout(predicate::str::starts_with("all 12 residuals vanish"));
    let s = stdout(&["export-system", "--problem", "burgers-xt"]);
    let v: serde_json::Value = serde_json::from_str(&s).unwrap();
    assert_eq!(v["equations"].as_array().unwrap().len(), 12);
    assert_eq!(v["seeds"].as_array().unwrap().len(), 4);
}

#[test]
fn order_override() {
    let s = stdout(&["solve", "--problem", "burgers-stationary", "--order", "5", "--format", "csv"]);
    assert_eq!(s.lines().count(), 1 + 4);
    assert!(s.starts_with("symbol,value\na_2,"));
}

#[test]
fn list_builtins() {
    let s = stdout(&["list", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&s).unwrap();
    let names: Vec<_> = v.as_array().unwrap().iter().map(|r| r["name"].as_str().unwrap()).collect();
    assert_eq!(&names[..5], ["boundary-layer", "burgers-stationary", "burgers-xt", "kdv", "coupled-kdv"]);
}

#[test]
fn errors_and_color() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.pde");
    std::fs::write(&p, "problem p\nvars x\nunknown U(x)\neq dx(V) = 0\n").unwrap();
    pssm()
        .arg("solve")
        .arg("--file")
        .arg(&p)
        .assert()
        .code(1)
        .stderr(predicate::str::contains("4:").and(predicate::str::contains("V")));
    pssm()
        .args(["solve", "--problem", "nope"])
        .env("PSSM_COLOR", "1")
        .assert()
        .code(1)
        .stderr(predicate::str::contains("\x1b[31merror"));
    pssm()
        .args(["solve", "--problem", "nope"])
        .env("PSSM_COLOR", "0")
        .assert()
        .code(1)
        .stderr(predicate::str::starts_with("error: "));
    pssm().args(["solve", "--problem", "kdv", "--policy", "x=1"]).assert().code(1);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("out.json");
    pssm()
        .args(["solve", "--problem", "burgers-stationary", "--out"])
        .arg(&p)
        .assert()
        .success()
        .stdout("");
    let text = std::fs::read_to_string(&p).unwrap();
    assert!(text.contains(r#""a_10""#));
}
