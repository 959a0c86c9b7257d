use std::process::{Command, Output};

use bbops::experiments::RateReport;
use bbops::report::CheckReport;

fn bbops(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bbops"))
        .args(args)
        .env("BBOPS_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn bernstein_reproduces_linear_functions() {
    let out = bbops(&["eval", "--op", "bernstein", "--n", "10", "--fn", "poly:0,1", "--x", "0.37"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "0.37");
}

#[test]
fn eval_lists_one_line_per_point() {
    let out = bbops(&["eval", "--n", "8", "--alpha", "2", "--beta", "0.5", "--fn", "sin_pi", "--x", "0,0.5,1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0], "0 0");
    assert!(lines[2].starts_with("1 "));
}

#[test]
fn derivative_of_a_p_weighted_operator_is_rejected() {
    let out = bbops(&["eval", "--op", "beta-bernstein", "--n", "8", "--fn", "sin_pi", "--x", "0.3", "--deriv"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["frobnicate"][..],
        &["eval", "--n", "10", "--fn", "poly:0,1"],
        &["rate", "--n", "64:16:x2", "--fn", "abs_half"],
        &["rate", "--n", "16:64:x2", "--fn", "nonsense"],
        &["verify", "--suite", "everything"],
        &["modulus", "--fn", "abs_half", "--grid", "3"],
    ] {
        let out = bbops(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn help_and_version_succeed() {
    assert_eq!(bbops(&["--help"]).status.code(), Some(0));
    let out = bbops(&["--version"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains(env!("CARGO_PKG_VERSION")));
}

#[test]
fn missing_csv_function_is_an_ingestion_error() {
    let out = bbops(&["eval", "--n", "4", "--fn", "csv:missing.csv", "--x", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing.csv"));
}

#[test]
fn sampled_function_from_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("line.csv");
    std::fs::write(&path, "x,value\n1,1\n0,0\n0.5,0.5\n").unwrap();
    let spec = format!("csv:{}", path.display());
    let out = bbops(&["eval", "--op", "bernstein", "--n", "6", "--fn", &spec, "--x", "0.25"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout(&out).trim(), "0.25");
}

#[test]
fn rate_writes_csv_json_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("rate.csv");
    let json = dir.path().join("rate.json");
    let svg = dir.path().join("rate.svg");
    let out = bbops(&[
        "rate", "--op", "generalized", "--alpha", "1", "--beta", "0.5", "--fn", "holder:1", "--n", "16:1024:x2",
        "--grid", "501:20",
        "--csv", csv.to_str().unwrap(), "--json", json.to_str().unwrap(), "--svg", svg.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let mut reader = csv::Reader::from_path(&csv).unwrap();
    assert_eq!(reader.headers().unwrap(), vec!["n", "sup_error"]);
    let ns: Vec<usize> = reader.records().map(|r| r.unwrap()[0].parse().unwrap()).collect();
    assert_eq!(ns, vec![16, 32, 64, 128, 256, 512, 1024]);

    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(doc["command"], "rate");
    assert_eq!(doc["tool_version"], env!("CARGO_PKG_VERSION"));
    let report: RateReport = serde_json::from_value(doc["reports"][0].clone()).unwrap();
    let mut again = report.clone();
    again.refit();
    assert_eq!(report.slope, again.slope);
    assert!((report.slope.unwrap() + 0.5).abs() < 0.1);

    let picture = std::fs::read_to_string(&svg).unwrap();
    assert!(picture.contains("<svg") && picture.contains("<polyline"));
}

#[test]
fn rate_with_an_unmet_expectation_exits_with_one() {
    let out = bbops(&["rate", "--n", "16:256:x2", "--fn", "abs_half", "--grid", "201:10", "--expect", "-1", "--tol", "0.05"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAIL"));
}

#[test]
fn modulus_csv_has_one_row_per_step() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("modulus.csv");
    let out = bbops(&["modulus", "--fn", "abs_half", "--lambda", "1", "--t", "0.1,0.01,0.001", "--grid", "401:20", "--csv", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,omega"));
    assert_eq!(lines.count(), 3);
}

#[test]
fn moments_match_their_closed_forms() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("moments.csv");
    let out = bbops(&["moments", "--n", "12", "--beta", "0.5", "--csv", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let mut reader = csv::Reader::from_path(&csv).unwrap();
    assert_eq!(reader.headers().unwrap(), vec!["x", "j", "closed_form", "direct_sum", "abs_gap"]);
    assert_eq!(reader.records().count(), 15);
}

#[test]
fn verify_lemmas_passes_and_reports_json() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("out.json");
    let out = bbops(&["verify", "--suite", "lemmas", "--json", json.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    let reports: Vec<CheckReport> = serde_json::from_value(doc["reports"].clone()).unwrap();
    assert!(reports.len() > 10);
    assert!(reports.iter().all(|r| !r.anchor.is_empty()));
    assert!(reports.iter().all(CheckReport::acceptable));
}

#[test]
fn in_process_entry_point_matches_binary_exit_codes() {
    assert_eq!(bbops::cli::run(["bbops", "eval", "--op", "bernstein", "--n", "3", "--fn", "poly:1", "--x", "0.2"]), 0);
    assert_eq!(bbops::cli::run(["bbops", "eval", "--n", "1", "--fn", "poly:1", "--x", "0.2"]), 2);
    assert_eq!(bbops::cli::run(["bbops", "eval", "--n", "3", "--fn", "poly:1", "--x", "1.5"]), 2);
}
