use std::path::Path;
use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_passive-xi")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

const DISC_SCALAR: &str = r#"{"domain":"discrete","n":1,"m":1,
  "A":[[[0,0]]],"B":[[[1,0]]],"C":[[[1,0]]],"D":[[[1,0]]]}"#;

#[test]
fn random_is_deterministic() {
    let a = bin(&["random", "--n", "3", "--m", "2", "--domain", "continuous", "--seed", "1"]);
    let b = bin(&["random", "--n", "3", "--m", "2", "--domain", "continuous", "--seed", "1"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = bin(&["random", "--n", "3", "--m", "2", "--domain", "continuous", "--seed", "2"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn random_output_feeds_compute() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin(&["random", "--n", "6", "--m", "2", "--domain", "discrete", "--seed", "5"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["n"], 6);
    let path = write(dir.path(), "sys.json", std::str::from_utf8(&out.stdout).unwrap());
    let rep = bin(&["compute", "--input", &path]);
    assert!(rep.status.success(), "{}", String::from_utf8_lossy(&rep.stderr));
    let rep: serde_json::Value = serde_json::from_slice(&rep.stdout).unwrap();
    let xi = rep["xi_estimate"].as_f64().unwrap();
    let ub = rep["bracket"]["xi_ub"].as_f64().unwrap();
    assert!(xi > 0.0 && xi <= ub);
}

#[test]
fn discrete_scalar_reports_absolute_mode() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "s.json", DISC_SCALAR);
    let out = bin(&["compute", "--input", &path, "--report", "json"]);
    assert!(out.status.success());
    let rep: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rep["certificate"], "AbsoluteMode");
    assert!(rep["xi_estimate"].as_f64().unwrap().abs() < 1e-10);
    let text = bin(&["compute", "--input", &path, "--report", "text", "--algorithm", "bisection"]);
    assert!(text.status.success());
    assert_eq!(String::from_utf8_lossy(&text.stdout).lines().count(), 2);
}

#[test]
fn error_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", "{\"domain\": ");
    assert_eq!(bin(&["compute", "--input", &bad]).status.code(), Some(1));
    assert_eq!(bin(&["compute", "--bogus"]).status.code(), Some(64));
    let ok = write(dir.path(), "s.json", DISC_SCALAR);
    assert_eq!(bin(&["compute", "--input", &ok, "--tol", "-1"]).status.code(), Some(64));
    assert_eq!(bin(&["random", "--n", "2", "--m", "1", "--domain", "continuous", "--margin", "0"]).status.code(), Some(64));
    assert_eq!(bin(&["bench"]).status.code(), Some(0));
}
