use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_distgrover"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn distgrover")
}

fn oracle_file(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

/// Exit code and the single stderr line of a failing invocation.
fn failure(out: &Output) -> (i32, String) {
    let err = String::from_utf8_lossy(&out.stderr).to_string();
    assert_eq!(err.trim_end().lines().count(), 1, "diagnostic must be one line: {err:?}");
    (out.status.code().unwrap(), err.trim_end().to_string())
}

fn csv_rows(out: &Output) -> Vec<Vec<String>> {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

#[test]
fn dist_exact_run_reports_certainty_and_ledger() {
    let dir = TempDir::new().unwrap();
    let f = oracle_file(&dir, "f.txt", "n=4\n0110\n1011\n1111\n");
    let v = stdout_json(&run(&["run", "--variant", "dist-exact", "--oracle", s(&f), "--t", "1"]));
    assert!((v["success_probability"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert_eq!(v["t"], 1);
    let iterations = v["iterations"].as_u64().unwrap();
    assert_eq!(v["trace"].as_array().unwrap().len() as u64, iterations + 1);
    assert_eq!(v["ledger"]["per_iteration_total"], 28);
    assert_eq!(v["ledger"]["run_total"].as_u64().unwrap(), 28 * iterations);
    assert_eq!(v["distribution"].as_object().unwrap().len(), 16);
}

#[test]
fn grover_two_qubits_one_solution_is_exact() {
    let dir = TempDir::new().unwrap();
    let f = oracle_file(&dir, "f.txt", "n=2\n10\n");
    let v = stdout_json(&run(&["run", "--variant", "grover", "--oracle", s(&f)]));
    assert!((v["success_probability"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!(v.get("ledger").is_none());
    assert!((v["distribution"]["10"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn json_oracle_files_are_accepted() {
    let dir = TempDir::new().unwrap();
    let f = oracle_file(&dir, "f.json", r#"{"n": 3, "solutions": ["101"]}"#);
    let v = stdout_json(&run(&["run", "--variant", "long", "--oracle", s(&f)]));
    assert!((v["success_probability"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert_eq!(v["solutions"], serde_json::json!(["101"]));
}

#[test]
fn missing_oracle_file_names_the_path() {
    let (code, line) = failure(&run(&["run", "--variant", "grover", "--oracle", "/nonexistent/oracle.txt"]));
    assert_eq!(code, 2);
    assert!(line.starts_with("error[io]:"), "{line}");
    assert!(line.contains("/nonexistent/oracle.txt"), "{line}");
}

#[test]
fn input_errors_exit_two_with_tagged_line() {
    let dir = TempDir::new().unwrap();
    let empty = oracle_file(&dir, "empty.txt", "n=3\n");
    let bad = oracle_file(&dir, "bad.txt", "n=3\n1x1\n");
    let ok = oracle_file(&dir, "ok.txt", "n=3\n111\n");
    let cases: Vec<(Vec<&str>, &str)> = vec![
        (vec!["run", "--variant", "grover", "--oracle", s(&empty)], "error[promise]:"),
        (vec!["run", "--variant", "grover", "--oracle", s(&bad)], "error[parse]:"),
        (vec!["run", "--variant", "dist", "--oracle", s(&ok)], "error[usage]:"),
        (vec!["run", "--variant", "grover", "--oracle", s(&ok), "--t", "1"], "error[usage]:"),
        (vec!["run", "--variant", "dist", "--oracle", s(&ok), "--t", "3"], "error[argument]:"),
        (vec!["run", "--variant", "fastest", "--oracle", s(&ok)], "error[usage]:"),
        (vec!["frobnicate"], "error[usage]:"),
        (vec!["compare", "--n", "4", "--t", "1", "--a", "0"], "error[promise]:"),
    ];
    for (args, prefix) in cases {
        let (code, line) = failure(&run(&args));
        assert_eq!(code, 2, "{args:?}: {line}");
        assert!(line.starts_with(prefix), "{args:?}: {line}");
    }
}

#[test]
fn node_size_constraint_is_opt_in() {
    let dir = TempDir::new().unwrap();
    let f = oracle_file(&dir, "f.txt", "n=4\n0001\n");
    let args = ["run", "--variant", "dist", "--oracle", s(&f), "--t", "2"];
    assert!(run(&args).status.success());
    let mut constrained = args.to_vec();
    constrained.push("--node-size-constraint");
    let (code, line) = failure(&run(&constrained));
    assert_eq!(code, 2);
    assert!(line.starts_with("error[argument]:"), "{line}");
}

#[test]
fn capacity_guards_exit_three() {
    let dir = TempDir::new().unwrap();
    let wide = oracle_file(&dir, "wide.txt", &format!("n=21\n{}\n", "0".repeat(21)));
    let (code, line) = failure(&run(&["run", "--variant", "dist", "--oracle", s(&wide), "--t", "1"]));
    assert_eq!(code, 3);
    assert!(line.starts_with("error[capacity]:"), "{line}");
    let (code, line) = failure(&run(&["verify", "--scope", "theorems", "--max-n", "20"]));
    assert_eq!(code, 3);
    assert!(line.starts_with("error[capacity]:"), "{line}");
}

#[test]
fn verify_props_passes() {
    let out = run(&["verify", "--scope", "props", "--max-n", "4"]);
    let v = stdout_json(&out);
    assert_eq!(v["all_passed"], true);
    assert_eq!(v["failed"], 0);
    assert!(v["passed"].as_u64().unwrap() > 0);
}

#[test]
fn verify_lemmas_passes() {
    let v = stdout_json(&run(&["verify", "--scope", "lemmas"]));
    assert_eq!(v["all_passed"], true);
}

#[test]
fn canary_build_fails_verification() {
    let out = run(&["verify", "--scope", "props", "--max-n", "3", "--canary"]);
    let (code, line) = failure(&out);
    assert_eq!(code, 1);
    assert!(line.starts_with("error[verify]:"), "{line}");
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["all_passed"], false);
}

#[test]
fn compare_reproduces_table_columns() {
    let v = stdout_json(&run(&["compare", "--n", "9", "--t", "2"]));
    let rows = v.as_array().unwrap();
    let names: Vec<_> = rows.iter().map(|r| r["algorithm"].as_str().unwrap()).collect();
    assert_eq!(names, ["grover", "long", "partitioned", "dist", "dist-exact"]);
    let qubits: Vec<_> = rows.iter().map(|r| r["qubits"].as_u64().unwrap()).collect();
    assert_eq!(qubits, [9, 9, 7, 8, 8]);
    // 88 transfers per iteration; 17 Grover rounds and K + 1 = 18 exact rounds at a = 1.
    assert_eq!(rows[3]["communication"], 88 * 17);
    assert_eq!(rows[4]["communication"], 88 * 18);

    let csv = csv_rows(&run(&["compare", "--n", "9", "--t", "2", "--format", "csv"]));
    assert_eq!(csv[0], ["algorithm", "qubits", "success", "communication"]);
    assert_eq!(csv[1], ["grover", "9", "High but smaller than 1", "0"]);
    assert_eq!(csv[2], ["long", "9", "1", "0"]);
}

#[test]
fn trace_grover_three_qubits() {
    let dir = TempDir::new().unwrap();
    let f = oracle_file(&dir, "f.txt", "n=3\n011\n");
    let rows = csv_rows(&run(&["trace", "--variant", "grover", "--oracle", s(&f)]));
    assert_eq!(rows[0], ["iteration", "solution_mass"]);
    assert_eq!(rows.len(), 4);
    let mass: Vec<f64> = rows[1..].iter().map(|r| r[1].parse().unwrap()).collect();
    assert_eq!(rows[1][1], "0.125000000000");
    assert!((mass[1] - 25.0 / 32.0).abs() < 1e-11);
    assert!((mass[2] - 121.0 / 128.0).abs() < 1e-11);
}

#[test]
fn trace_exact_and_full_oracle() {
    let dir = TempDir::new().unwrap();
    let f = oracle_file(&dir, "f.txt", "n=3\n011\n");
    let rows = csv_rows(&run(&["trace", "--variant", "dist-exact", "--oracle", s(&f), "--t", "1"]));
    let last: f64 = rows.last().unwrap()[1].parse().unwrap();
    assert!((last - 1.0).abs() < 1e-9);

    let all = oracle_file(&dir, "all.txt", "n=2\n00\n01\n10\n11\n");
    let rows = csv_rows(&run(&["trace", "--variant", "grover", "--oracle", s(&all)]));
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1][0], "0");
    assert_eq!(rows[1][1], "1.00000000000");

    let v = stdout_json(&run(&["trace", "--variant", "grover", "--oracle", s(&all), "--format", "json"]));
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["iteration"], 0);
    assert!((rows[0]["solution_mass"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn output_is_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    let f = oracle_file(&dir, "f.txt", "n=4\n0011\n1000\n");
    for args in [
        vec!["run", "--variant", "dist", "--oracle", s(&f), "--t", "2"],
        vec!["run", "--variant", "long", "--oracle", s(&f), "--format", "csv"],
        vec!["run", "--variant", "grover", "--oracle", s(&f), "--shots", "500", "--seed", "9"],
        vec!["verify", "--scope", "lemmas", "--points", "20"],
    ] {
        let first = run(&args);
        let second = run(&args);
        assert!(first.status.success());
        assert_eq!(first.stdout, second.stdout, "{args:?}");
    }
}

#[test]
fn shots_are_seeded_and_sum_to_count() {
    let dir = TempDir::new().unwrap();
    let f = oracle_file(&dir, "f.txt", "n=3\n011\n");
    let args = |seed: &'static str| {
        vec!["run", "--variant", "grover", "--oracle", s(&f), "--shots", "1000", "--seed", seed]
            .into_iter()
            .map(String::from)
            .collect::<Vec<_>>()
    };
    let shots = |seed| {
        let a = args(seed);
        let a: Vec<&str> = a.iter().map(String::as_str).collect();
        stdout_json(&run(&a))["shots"].clone()
    };
    let one = shots("1");
    let total: u64 = one["counts"].as_object().unwrap().values().map(|v| v.as_u64().unwrap()).sum();
    assert_eq!(total, 1000);
    assert!(one["counts"]["011"].as_u64().unwrap() > 850);
    assert_ne!(one["counts"], shots("2")["counts"]);
}

#[test]
fn csv_and_output_file() {
    let dir = TempDir::new().unwrap();
    let f = oracle_file(&dir, "f.txt", "n=3\n011\n");
    let target = dir.path().join("result.csv");
    let out = run(&["run", "--variant", "grover", "--oracle", s(&f), "--format", "csv", "--output", s(&target)]);
    assert!(out.status.success());
    let summary = String::from_utf8(out.stdout).unwrap();
    assert!(summary.contains("success_probability 0.945312500000"), "{summary}");
    assert!(summary.contains("iteration solution_mass"));
    let text = std::fs::read_to_string(&target).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "outcome,probability,solution");
    assert_eq!(lines.len(), 9);
    assert_eq!(lines[4], "011,0.945312500000,1");
}
