use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn idemsum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_idemsum")).args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON value")
}

fn write(dir: &TempDir, name: &str, v: &Value) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, v.to_string()).unwrap();
    path
}

fn matrix(p: u64, entries: Value) -> Value {
    let rows = entries.as_array().unwrap().len();
    json!({"field": {"p": p, "k": 1}, "rows": rows, "cols": rows, "entries": entries})
}

fn s(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn identity_over_f3_is_one_idempotent() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", &matrix(3, json!([[1, 0], [0, 1]])));
    let out = idemsum(&["decompose", "--in", s(&a)]);
    assert_eq!(out.status.code(), Some(0));
    let cert = stdout_json(&out);
    assert_eq!(cert["parts"].as_array().unwrap().len(), 1);
    assert_eq!(cert["pipeline"], json!("small3"));
}

#[test]
fn certificate_round_trip_and_tamper() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", &matrix(5, json!([[2, 1, 0], [0, 3, 4], [1, 0, 0]])));
    let cert_path = dir.path().join("cert.json");
    let out = idemsum(&["decompose", "--in", s(&a), "--mode", "sum5", "--out", s(&cert_path)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let verify = idemsum(&["verify", "--in", s(&a), "--cert", s(&cert_path)]);
    assert_eq!(verify.status.code(), Some(0));
    assert_eq!(stdout_json(&verify), json!({"valid": true}));

    let mut cert: Value = serde_json::from_str(&std::fs::read_to_string(&cert_path).unwrap()).unwrap();
    let entry = &mut cert["parts"][0]["entries"][0][0];
    *entry = json!((entry.as_u64().unwrap() + 1) % 5);
    let tampered = write(&dir, "tampered.json", &cert);
    let verify = idemsum(&["verify", "--in", s(&a), "--cert", s(&tampered)]);
    assert_eq!(verify.status.code(), Some(1));
    assert_eq!(stdout_json(&verify), json!({"valid": false}));
}

#[test]
fn decompose_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", &matrix(7, json!([[1, 2, 3], [4, 5, 6], [0, 1, 1]])));
    let run = || idemsum(&["decompose", "--in", s(&a), "--seed", "9"]).stdout;
    assert_eq!(run(), run());
}

#[test]
fn trace_outside_prime_field_is_rejected() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", &json!({"field": {"p": 2, "k": 2}, "rows": 1, "cols": 1, "entries": [[2]]}));
    let out = idemsum(&["decide", "--in", s(&a)]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["sum_of_idempotents"], json!(false));
}

#[test]
fn usage_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let out = idemsum(&["discrepancies", "--suite", "m2f6"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["error"], json!("UnknownSuite"));

    let rect = write(&dir, "r.json", &json!({"field": {"p": 3}, "rows": 1, "cols": 2, "entries": [[1, 2]]}));
    assert_eq!(idemsum(&["decompose", "--in", s(&rect)]).status.code(), Some(2));

    let junk = dir.path().join("junk.json");
    std::fs::write(&junk, "{").unwrap();
    assert_eq!(idemsum(&["invariants", "--in", s(&junk)]).status.code(), Some(2));
    assert_eq!(idemsum(&["decompose", "--mode"]).status.code(), Some(2));
}

#[test]
fn prime4_below_threshold_exits_three() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", &matrix(5, json!([[1, 0], [0, 1]])));
    let out = idemsum(&["decompose", "--in", s(&a), "--mode", "prime4"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn bounds_and_oracle_agree_on_m2f2() {
    let field = r#"{"p":2,"k":1}"#;
    let b = stdout_json(&idemsum(&["bounds", "--size", "2", "--field-inline", field]));
    let o = stdout_json(&idemsum(&["oracle", "--size", "2", "--field-inline", field]));
    let sn = o["empirical_sn"].as_u64().unwrap();
    assert!(b["lower"].as_u64().unwrap() <= sn && sn <= b["upper"].as_u64().unwrap());
    let total: u64 = o["histogram"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).sum();
    assert_eq!(total, 16);
}

#[test]
fn invariants_of_companion() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", &matrix(3, json!([[0, 2], [1, 0]])));
    let out = stdout_json(&idemsum(&["invariants", "--in", s(&a)]));
    assert_eq!(out["invariant_factors"].as_array().unwrap().len(), 1);
    assert_eq!(out["char_poly"], out["invariant_factors"][0]);
}
