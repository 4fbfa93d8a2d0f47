//! End-to-end tests of the binary: exit codes, report determinism, formats.

use std::path::Path;
use std::process::{Command, Output};

const STANDARD_ONE_VAR: &str = r#"{"n": 1, "sigma": "1/2", "tau": "1/2",
  "tau0": "1/2", "tau1": "1/3", "tau2": "1/4", "tau3": "1/5"}"#;
const STANDARD_TWO_VAR: &str = r#"{"n": 2, "sigma": "1/2", "tau": "1/2",
  "tau0": "1/2", "tau1": "1/3", "tau2": "1/4", "tau3": "1/5"}"#;

fn write_config(dir: &Path, body: &str) -> std::path::PathBuf {
    let path = dir.join("config.json");
    std::fs::write(&path, body).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_koornwinder"))
        .args(args)
        .output()
        .unwrap()
}

#[test]
fn full_suite_passes_for_one_variable() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), STANDARD_ONE_VAR);
    let out = run(&[
        "--config",
        config.to_str().unwrap(),
        "--command",
        "all",
        "--max-weight",
        "2",
        "--grid-m",
        "64",
    ]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let summary = String::from_utf8(out.stderr).unwrap();
    assert!(summary.contains("overall: PASS"), "summary: {summary}");
    let report = String::from_utf8(out.stdout).unwrap();
    assert!(report.contains("\"command\": \"all\""));
    assert!(report.contains("\"pass\": true"));
}

#[test]
fn two_variable_difference_equations_pass() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), STANDARD_TWO_VAR);
    let out = run(&[
        "--config",
        config.to_str().unwrap(),
        "--command",
        "verify-diffeq",
        "--max-weight",
        "1",
    ]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn out_of_range_parameter_exits_2_and_names_the_invariant() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        r#"{"n": 1, "sigma": "2/1", "tau": "1/2",
           "tau0": "1/2", "tau1": "1/3", "tau2": "1/4", "tau3": "1/5"}"#,
    );
    let out = run(&["--config", config.to_str().unwrap(), "--command", "coeffs"]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("sigma"), "stderr: {stderr}");
    assert!(stderr.contains("(0,1)"), "stderr: {stderr}");
}

#[test]
fn missing_config_file_exits_2() {
    let out = run(&[
        "--config",
        "/nonexistent/config.json",
        "--command",
        "coeffs",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_json_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "{not json");
    let out = run(&["--config", config.to_str().unwrap(), "--command", "coeffs"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_command_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), STANDARD_ONE_VAR);
    let out = run(&[
        "--config",
        config.to_str().unwrap(),
        "--command",
        "frobnicate",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reports_are_byte_identical_for_identical_runs() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), STANDARD_ONE_VAR);
    let out_a = dir.path().join("a.json");
    let out_b = dir.path().join("b.json");
    for (out_path, _) in [(&out_a, 0), (&out_b, 1)] {
        let out = run(&[
            "--config",
            config.to_str().unwrap(),
            "--command",
            "verify-norms",
            "--max-weight",
            "2",
            "--grid-m",
            "64",
            "--seed",
            "42",
            "--out",
            out_path.to_str().unwrap(),
        ]);
        assert!(
            out.status.success(),
            "stderr: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let a = std::fs::read(&out_a).unwrap();
    let b = std::fs::read(&out_b).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn csv_report_is_flat_with_header() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), STANDARD_ONE_VAR);
    let out = run(&[
        "--config",
        config.to_str().unwrap(),
        "--command",
        "coeffs",
        "--max-weight",
        "1",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "identity,label,lhs,rhs,discrepancy,pass,warning_only"
    );
    // every row has exactly the header's column count (quoted fields hold
    // the only commas inside labels)
    for line in lines {
        let cols = split_csv(line);
        assert_eq!(cols.len(), 7, "row: {line}");
    }
}

fn split_csv(line: &str) -> Vec<String> {
    let mut cols = Vec::new();
    let mut cur = String::new();
    let mut in_quotes = false;
    let mut chars = line.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '"' if in_quotes && chars.peek() == Some(&'"') => {
                cur.push('"');
                chars.next();
            }
            '"' => in_quotes = !in_quotes,
            ',' if !in_quotes => cols.push(std::mem::take(&mut cur)),
            other => cur.push(other),
        }
    }
    cols.push(cur);
    cols
}
