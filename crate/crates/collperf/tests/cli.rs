//! End-to-end CLI behavior: exit codes, diagnostics routing and the
//! no-arithmetic round trip between CSV output and library values.

mod common;

use collperf::cli::format_float;
use collperf::model;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_collperf"))
}

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn predict_round_trips_library_value() {
    let params = fixture("t0.plogp");
    let out = run(&[
        "predict",
        "--params",
        &params,
        "--family",
        "scatter",
        "--strategy",
        "binomial",
        "-P",
        "5",
        "-m",
        "8",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let row = text.lines().nth(1).unwrap();
    let time_field = row.split(',').next_back().unwrap();
    let table = common::t0();
    let expect = model::scatter_binomial(&table, 5, 8).unwrap().time;
    assert_eq!(time_field, format_float(expect));
    assert_eq!(row, "scatter,binomial,5,8,,86.0000000");
}

#[test]
fn bad_arguments_exit_2() {
    let params = fixture("t0.plogp");
    // Unknown strategy name.
    let out = run(&[
        "predict",
        "--params",
        &params,
        "--family",
        "broadcast",
        "--strategy",
        "bogus",
        "-P",
        "4",
        "-m",
        "8",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).is_empty());

    // Missing required flags (clap).
    let out = run(&["predict", "--params", &params]);
    assert_eq!(out.status.code(), Some(2));

    // Segmented strategy without a segment.
    let out = run(&[
        "predict",
        "--params",
        &params,
        "--family",
        "broadcast",
        "--strategy",
        "pipeline",
        "-P",
        "4",
        "-m",
        "8",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--segment"));
}

#[test]
fn file_errors_exit_3_with_no_rows() {
    let out = run(&[
        "predict",
        "--params",
        "/nonexistent/t.plogp",
        "--family",
        "broadcast",
        "--strategy",
        "flat",
        "-P",
        "4",
        "-m",
        "8",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).is_empty());

    // Malformed parameter file: gap below the send overhead.
    let dir = std::env::temp_dir().join("collperf_cli_test");
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.plogp");
    std::fs::write(&bad, "L 1e-4\n1 2e-5 1e-5 1e-5\n1024 4e-5 5e-5 3e-5\n").unwrap();
    let out = run(&[
        "predict",
        "--params",
        bad.to_str().unwrap(),
        "--family",
        "broadcast",
        "--strategy",
        "flat",
        "-P",
        "4",
        "-m",
        "8",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("gap smaller than send overhead"));
}

#[test]
fn model_precondition_violations_exit_4() {
    let params = fixture("t0.plogp");
    let out = run(&[
        "predict",
        "--params",
        &params,
        "--family",
        "broadcast",
        "--strategy",
        "flat",
        "-P",
        "1",
        "-m",
        "8",
    ]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stderr(&out).contains("at least 2"));
    assert!(stdout(&out).is_empty());

    // A contended prediction without any gamma source is a model error.
    let out = run(&[
        "select", "--params", &params, "--family", "alltoall", "-P", "4", "-m", "8",
    ]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn sweep_skips_and_logs_rejected_cells() {
    let params = fixture("t0.plogp");
    // P = 1 cells are rejected by the models and logged on stderr.
    let out = run(&[
        "sweep", "--params", &params, "--family", "scatter", "-P", "1,2,4", "-m", "8,64",
    ]);
    assert!(out.status.success());
    let rows = stdout(&out).lines().count() - 1; // minus header
    assert_eq!(rows, 3 * 2 * 2); // 3 strategies x {2,4} x {8,64}
    let diag = stderr(&out);
    assert_eq!(diag.matches("skipping").count(), 6);
}

#[test]
fn sweep_geometric_ladder() {
    let params = fixture("t0.plogp");
    let out = run(&[
        "sweep",
        "--params",
        &params,
        "--family",
        "broadcast",
        "--strategies",
        "flat",
        "-P",
        "2..4",
        "--m-start",
        "8",
        "--m-factor",
        "4",
        "--m-count",
        "3",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let sizes: Vec<&str> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(3).unwrap())
        .collect();
    assert_eq!(
        sizes,
        vec!["8", "32", "128", "8", "32", "128", "8", "32", "128"]
    );
}

#[test]
fn segment_search_trace_ends_with_winner() {
    let params = fixture("t0.plogp");
    let out = run(&[
        "segment",
        "--params",
        &params,
        "--strategy",
        "pipeline",
        "-P",
        "8",
        "-m",
        "64",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().next().unwrap(), "stage,s,time_s");
    assert!(text.lines().any(|l| l.starts_with("sweep,64,")));
    assert_eq!(text.lines().last().unwrap(), "winner,1,140.000000");
}

#[test]
fn calibrate_reports_planted_gamma() {
    let out = run(&[
        "calibrate",
        "--params",
        &fixture("t0.plogp"),
        "--measurements",
        &fixture("gamma04.meas"),
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("gamma 0.400000000"), "{text}");
    assert!(text.contains("samples 8"));
    assert!(!text.contains("warning"));
}

#[test]
fn simulate_exports_timeline_and_summary() {
    let params = fixture("t0.plogp");
    let out = run(&[
        "simulate",
        "--params",
        &params,
        "--collective",
        "alltoall",
        "--variant",
        "overlapped",
        "-P",
        "4",
        "-m",
        "8",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("0.000000000 0 send_start"));
    assert_eq!(
        text.lines().last().unwrap(),
        "# completion 34.000000000 model 34.000000000"
    );

    // The pipeline simulation agrees with its model through the CLI, too.
    let out = run(&[
        "simulate",
        "--params",
        &params,
        "--collective",
        "broadcast",
        "--variant",
        "chain",
        "-P",
        "4",
        "-m",
        "8",
        "--segment",
        "2",
    ]);
    assert_eq!(
        stdout(&out).lines().last().unwrap(),
        "# completion 42.000000000 model 42.000000000"
    );
}

#[test]
fn predict_with_gamma_file_fits_inline() {
    let out = run(&[
        "predict",
        "--params",
        &fixture("t0.plogp"),
        "--family",
        "alltoall",
        "--strategy",
        "contended",
        "-P",
        "4",
        "-m",
        "8",
        "--gamma-file",
        &fixture("gamma04.meas"),
    ]);
    assert!(out.status.success());
    // Lower 34, upper 46, fitted gamma 0.4 -> 38.8.
    assert!(stdout(&out).contains("alltoall,contended,4,8,,38.8000000"));
}
