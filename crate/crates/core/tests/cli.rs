use std::process::{Command, Output};

use serde_json::Value;

fn pickleball(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pickleball")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn modified_rally_advantage_at_realistic_play() {
    let out = pickleball(&["advantage", "--system", "modified-rally", "--n", "21", "--pa", "0.44", "--pb", "0.44", "--digits", "7"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["result"]["value"]["decimal"], "-0.0137951");
    assert_eq!(v["result"]["sign"], -1);
    assert_eq!(v["p_a"]["exact"], "11/25");
}

#[test]
fn advantage_defaults_to_scientific() {
    let out = pickleball(&["advantage", "--system", "side-out", "--n", "11", "--pa", "11/25", "--pb", "0.44"]);
    let v = json(&out);
    let decimal = v["result"]["value"]["decimal"].as_str().unwrap();
    assert!(decimal.starts_with('-') && decimal.contains("e-"), "{decimal}");
}

#[test]
fn echoed_fractions_reproduce_results() {
    let first = json(&pickleball(&["summary", "--system", "hybrid-rally", "--n", "9", "--pa", "0.37", "--pb", "0.52", "--first", "coin"]));
    let pa = first["p_a"]["exact"].as_str().unwrap().to_string();
    let pb = first["p_b"]["exact"].as_str().unwrap().to_string();
    let second = json(&pickleball(&["summary", "--system", "hybrid-rally", "--n", "9", "--pa", &pa, "--pb", &pb, "--first", "coin"]));
    assert_eq!(first, second);
}

#[test]
fn side_out_zeros_csv() {
    let out = pickleball(&["--format", "csv", "zeros", "--system", "side-out", "--n", "11"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 6);
    assert!(lines[1].starts_with("side-out,11,1,0.073510,"), "{}", lines[1]);
}

#[test]
fn summary_with_certain_servers() {
    let v = json(&pickleball(&["summary", "--system", "side-out", "--n", "11", "--pa", "1", "--pb", "1", "--first", "A"]));
    assert_eq!(v["result"]["win_prob_a"]["exact"], "1/1");
    assert_eq!(v["result"]["mean_duration"]["exact"], "11/1");
    assert_eq!(v["result"]["duration_variance"]["exact"], "0/1");
}

#[test]
fn exit_codes_and_error_stream() {
    let degenerate = pickleball(&["advantage", "--system", "side-out", "--n", "11", "--pa", "0", "--pb", "0"]);
    assert_eq!(degenerate.status.code(), Some(1));
    assert!(degenerate.stdout.is_empty());
    let err: Value = serde_json::from_slice(&degenerate.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "degenerate_chain");

    let bad_region = pickleball(&["extremum", "--system", "side-out", "--n", "5", "--region", "0,0.1,0,0.1,0.5,1", "--mode", "min"]);
    assert_eq!(bad_region.status.code(), Some(1));
    let malformed = pickleball(&["extremum", "--system", "side-out", "--n", "5", "--region", "0,1", "--mode", "min"]);
    assert_eq!(malformed.status.code(), Some(2));

    assert_eq!(pickleball(&["zeros", "--system", "side-out", "--n", "11", "--frobnicate"]).status.code(), Some(2));
    assert_eq!(pickleball(&["simulate", "--system", "side-out", "--n", "11", "--pa", "0", "--pb", "0", "--games", "5"]).status.code(), Some(1));
}

#[test]
fn oracle_check_reports_pass() {
    let v = json(&pickleball(&["oracle-check", "--form", "f21star_diag", "--points", "5", "--seed", "3"]));
    assert_eq!(v["result"]["pass"], true);
    assert_eq!(v["result"]["agreements"], 5);
    let v = json(&pickleball(&["oracle-check", "--form", "f11_full", "--points", "3", "--seed", "3"]));
    assert_eq!(v["result"]["coefficients_symmetric"], true);
}

#[test]
fn simulate_reports_seed() {
    let v = json(&pickleball(&["simulate", "--system", "side-out", "--n", "11", "--pa", "1", "--pb", "1", "--games", "1000", "--seed", "5"]));
    assert_eq!(v["result"]["win_freq_a"], 1.0);
    assert_eq!(v["result"]["mean_duration"], 11.0);
    assert_eq!(v["metadata"]["seed"], 5);
}

#[test]
fn figure_tables_have_declared_shapes() {
    let out = pickleball(&["--format", "csv", "figure", "--id", "6", "--points", "3", "--fast"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("system,n,p_b,p_a,win_prob_a"));
    assert_eq!(text.lines().count(), 1 + 2 * 9 * 3);

    let out = pickleball(&["--format", "csv", "figure", "--id", "3", "--points", "3"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1 + 8);

    let out = pickleball(&["--format", "csv", "figure", "--id", "8", "--points", "2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1 + 2 * 10 * 2);
}
