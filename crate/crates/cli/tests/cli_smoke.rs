//! Process-level checks of the shipped binary: formats, exit codes, and
//! stderr diagnostics.

use std::process::{Command, Output};

fn normtrace(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_normtrace"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout is UTF-8")
}

#[test]
fn spectrum_csv_has_the_documented_schema() {
    let out = normtrace(&["code", "spectrum", "--q", "2", "--r", "2", "--k", "1", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("weight,count"));
    let rows: Vec<(u64, u64)> = lines
        .map(|line| {
            let (w, c) = line.split_once(',').expect("two columns");
            (w.parse().unwrap(), c.parse().unwrap())
        })
        .collect();
    assert!(rows.windows(2).all(|w| w[0].0 < w[1].0), "ascending weights");
    assert_eq!(rows.iter().map(|r| r.1).sum::<u64>(), 64, "all 4³ messages");
}

#[test]
fn even_q_is_rejected_for_conics() {
    let out = normtrace(&["conics", "survey", "--q", "4"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr).to_string();
    assert!(err.contains("odd"), "diagnostic names the precondition: {err}");
}

#[test]
fn non_prime_power_is_rejected() {
    let out = normtrace(&["code", "spectrum", "--q", "6", "--r", "2", "--k", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn curve_points_csv_lists_every_affine_point() {
    let out = normtrace(&["curve", "points", "--q", "2", "--r", "2", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "index,x,y");
    assert_eq!(lines.len(), 9, "header plus q^(2r-1) = 8 points");
}

#[test]
fn variety_count_matches_the_norm_fiber_size() {
    // f = 1 has T(1) = 2 ≠ 0 over F_9/F_3, so the count is the fiber size 4.
    let out = normtrace(&["variety", "count", "--q", "3", "--r", "2", "--coeffs", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["results"]["s_count"], 4);
    assert_eq!(report["results"]["orbit_zero_count"], 4);
}

#[test]
fn verify_reports_embed_the_config() {
    let out = normtrace(&["variety", "verify", "--q", "3", "--r", "2", "--k", "2", "--trials", "5", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["config"]["command"], "variety verify");
    assert_eq!(report["config"]["trials"], 5);
    assert_eq!(report["config"]["seed"], 7);
    assert!(report["config"].get("workers").is_none(), "workers never echoed");
    assert_eq!(report["results"]["failures"], 0);
    assert_eq!(report["violations"].as_array().unwrap().len(), 0);
}

#[test]
fn catalog_gaps_exit_nonzero_with_the_violations_listed() {
    // Sampled survey over F_81 hits irreducible conics of size 3 or 4,
    // which no published pattern admits; the report carries them and the
    // exit code flags it.
    let out = normtrace(&[
        "conics", "survey", "--q", "9", "--mode", "sampled", "--samples", "300", "--seed", "5",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let violations = report["violations"].as_array().unwrap();
    assert!(!violations.is_empty());
    for v in violations {
        assert_eq!(v["check"], "pattern-catalog");
        assert_eq!(v["data"]["kind"], "irreducible");
        let size = v["data"]["projective_size"].as_u64().unwrap();
        assert!(size == 3 || size == 4, "gap sizes only, got {size}");
    }
}

#[test]
fn zero_message_is_an_input_error() {
    let out = normtrace(&["minimal", "check", "--q", "2", "--r", "2", "--k", "1", "--message", "0,0,0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn timing_is_opt_in() {
    let base = normtrace(&["code", "dim", "--q", "2", "--r", "2", "--k", "1"]);
    let timed = normtrace(&["--timing", "code", "dim", "--q", "2", "--r", "2", "--k", "1"]);
    let base_json: serde_json::Value = serde_json::from_str(&stdout(&base)).unwrap();
    let timed_json: serde_json::Value = serde_json::from_str(&stdout(&timed)).unwrap();
    assert!(base_json.get("timing").is_none());
    assert!(timed_json["timing"]["elapsed_ms"].is_u64());
}

#[test]
fn help_documents_the_hex_encoding() {
    let out = normtrace(&["variety", "count", "--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("hex index"));
}
