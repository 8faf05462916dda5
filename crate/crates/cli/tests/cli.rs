use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn isodisp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isodisp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn analyze_free_generators() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "s.json", r#"{"geometry": "tree-free", "version": 1, "rank": 2, "words": ["x", "y"]}"#);
    let out = isodisp(&["analyze", "--geometry", "tree-free", "--input", &input, "--powers", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let d = &r["displacement"];
    assert_eq!(d["l_upper"], 1.0);
    assert_eq!(d["ell_bracket"]["lower"], 1.0);
    assert_eq!(d["ell_bracket"]["upper"], 1.0);
    assert_eq!(r["command"], "analyze");
    assert!(r.get("wall_time_seconds").is_none());
}

#[test]
fn analyze_identity_is_all_zero() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "id.json", r#"{"geometry": "h2", "version": 1, "matrices": [[[1, 0], [0, 1]]]}"#);
    let report = dir.path().join("r.json");
    let out = isodisp(&["analyze", "--geometry", "h2", "--input", &input, "--report", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r: Value = serde_json::from_str(&fs::read_to_string(report).unwrap()).unwrap();
    let d = &r["displacement"];
    for key in ["l_upper", "lambda", "lambda_infinity_lower_bound"] {
        assert_eq!(d[key], 0.0, "{key}");
    }
    assert_eq!(d["ell_bracket"]["upper"], 0.0);
}

#[test]
fn malformed_input_exits_2_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "bad.json", "{\"geometry\": \"h2\",\n \"version\": 1,\n \"matrices\": [[[1, 0]\n");
    let out = isodisp(&["analyze", "--geometry", "h2", "--input", &input]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 4"), "{err}");

    let input = write(dir.path(), "other.json", r#"{"geometry": "h2", "version": 1, "matrices": [[[1, 0], [0, 1]]]}"#);
    let out = isodisp(&["analyze", "--geometry", "euclidean", "--input", &input]);
    assert_eq!(out.status.code(), Some(2));
    let out = isodisp(&["analyze", "--geometry", "h2", "--input", "/nonexistent/set.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn tree_formula_experiment() {
    let out = isodisp(&["repro", "tree-formula", "--rank", "2", "--trials", "500", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["summary"]["agreements"], 500);
    assert_eq!(r["name"], "tree-formula");
    assert_eq!(r["seed"], 7);
    assert_eq!(r["parameters"]["trials"], 500);
}

#[test]
fn almost_elliptic_experiment() {
    let out = isodisp(&["repro", "almost-elliptic", "--eps", "1e-3"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let at_i = r["summary"]["displacement_at_i"].as_f64().unwrap();
    assert!((at_i - 1e-3).abs() <= 1e-9);
    assert_eq!(r["summary"]["lambda_2"], 0.0);
}

#[test]
fn jsr_experiment_with_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("plots");
    let out = isodisp(&["repro", "jsr", "--preset", "binary-pair", "--nmax", "16", "--csv", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert!(r["summary"]["width"].as_f64().unwrap() <= 0.02);
    let text = fs::read_to_string(csv.join("jsr.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("length,words,spectral,norm,lower,upper"));
    assert_eq!(lines.count(), 16);
}

#[test]
fn reports_are_reproducible() {
    let args = ["repro", "bochi-h2", "--trials", "15", "--seed", "3"];
    let a = isodisp(&args);
    let b = isodisp(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = isodisp(&["repro", "bochi-h2", "--trials", "15", "--seed", "4"]);
    assert_ne!(a.stdout, c.stdout);
    let timed = json(&isodisp(&["repro", "entropy", "--nmax", "3", "--timing"]));
    assert!(timed["wall_time_seconds"].is_number());
}

#[test]
fn budget_and_parameter_errors() {
    let out = isodisp(&["repro", "entropy", "--nmax", "40"]);
    assert_eq!(out.status.code(), Some(3));
    let out = isodisp(&["repro", "almost-elliptic", "--eps", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
    let out = isodisp(&["repro", "entropy", "--words", "x,z"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn entropy_sizes_of_f2_ball() {
    let r = json(&isodisp(&["repro", "entropy", "--nmax", "4"]));
    let sizes: Vec<u64> = r["summary"]["sizes"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).collect();
    assert_eq!(sizes, vec![5, 17, 53, 161]);
}

#[test]
fn check_failure_exits_1() {
    // No bracket is narrower than a negative width.
    let out = isodisp(&["repro", "jsr", "--preset", "rotation", "--nmax", "2", "--max-width=-1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bracket-width"));
}
