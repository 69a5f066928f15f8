//! End-to-end tests of the command-line interface.

use std::io::Write;
use std::process::{Command, Output};

use tempfile::NamedTempFile;

fn write_spec(text: &str) -> NamedTempFile {
    let mut file = NamedTempFile::new().unwrap();
    file.write_all(text.as_bytes()).unwrap();
    file
}

fn cylinder_spec() -> NamedTempFile {
    write_spec(
        r#"{"shape": "constant", "params": {"c": 1.0}, "a": 0.0, "b": 3.141592653589793}"#,
    )
}

fn frustum_spec() -> NamedTempFile {
    write_spec(r#"{"shape": "linear", "params": {"c0": 1.0, "c1": 0.5}, "a": 0.0, "b": 2.0}"#)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_revzeta")).args(args).output().unwrap()
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

#[test]
fn determinant_on_cylinder_matches_closed_form() {
    let spec = cylinder_spec();
    let out = run(&["determinant", spec.path().to_str().unwrap()]);
    let v = stdout_json(&out);
    // zeta'(0) = -2 ln phi(e^{-2 pi}) + pi/6; 30-digit reference.
    let expect = 0.527_344_140_497_836;
    assert!((v["zeta_prime0"].as_f64().unwrap() - expect).abs() < 1e-12);
    assert!((v["det"].as_f64().unwrap() - 0.5901702995080481).abs() < 1e-12);
    assert!((v["A"].as_f64().unwrap() - std::f64::consts::PI).abs() < 1e-12);
}

#[test]
fn special_values_reports_zero_at_origin() {
    let spec = frustum_spec();
    let out = run(&["special-values", spec.path().to_str().unwrap()]);
    let v = stdout_json(&out);
    assert_eq!(v["value_at_0"].as_f64().unwrap(), 0.0);
    assert_eq!(v["zeta1"]["value_at_0"].as_f64().unwrap(), -0.5);
    // Dictionary residuals come along for free.
    let dict = &v["heat_kernel_dictionary_residuals"];
    assert!(dict["res_at_1_minus_C_minus1"].as_f64().unwrap().abs() < 1e-12);
}

#[test]
fn identical_config_gives_byte_identical_output() {
    let spec = frustum_spec();
    let path = spec.path().to_str().unwrap().to_owned();
    let a = run(&["special-values", &path]);
    let b = run(&["special-values", &path]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let a = run(&["eigenvalues", &path, "--n-max", "3", "--k-max", "2"]);
    let b = run(&["eigenvalues", &path, "--n-max", "3", "--k-max", "2"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn eigenvalues_table_shape() {
    let spec = cylinder_spec();
    let out = run(&["eigenvalues", spec.path().to_str().unwrap(), "--n-max", "2", "--k-max", "1"]);
    let v = stdout_json(&out);
    let entries = v["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 4);
    assert_eq!(entries[0]["k"], 0);
    assert_eq!(entries[0]["n"], 1);
    // lambda_{0,1} = 1 for the unit cylinder of length pi.
    assert!((entries[0]["lambda"].as_f64().unwrap() - 1.0).abs() < 1e-8);
    assert!(v["tol"].as_f64().unwrap() > 0.0);
}

#[test]
fn malformed_input_exits_2() {
    let spec = write_spec(r#"{"shape": "wedge", "params": {}, "a": 0.0, "b": 1.0}"#);
    let out = run(&["invariants", spec.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());

    let spec = write_spec(r#"{"shape": "constant", "params": {"c": -1.0}, "a": 0.0, "b": 1.0}"#);
    let out = run(&["invariants", spec.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not positive"));

    let out = run(&["determinant", "/nonexistent/path.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn out_flag_writes_file() {
    let spec = cylinder_spec();
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("report.json");
    let out = run(&[
        "invariants",
        spec.path().to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&out_path).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!((v["arc_length"].as_f64().unwrap() - std::f64::consts::PI).abs() < 1e-12);
}

#[test]
fn verify_runs_the_suite_and_exits_zero() {
    let spec = frustum_spec();
    let out = run(&["verify", spec.path().to_str().unwrap()]);
    assert!(
        out.status.success(),
        "verify failed;\nstderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["all_passed"], true);
    assert_eq!(v["checks"].as_array().unwrap().len(), 11);
    let text = String::from_utf8_lossy(&out.stderr);
    assert_eq!(text.matches("PASS criterion").count(), 11);
}
