//! End-to-end runs of the satotate binary. Every test drives the compiled
//! executable through std::process::Command, so argument parsing, output
//! formatting, exit codes, and the cache directory contract are all
//! exercised exactly as a user would hit them.

use std::path::Path;
use std::process::{Command, Output};

fn satotate(args: &[&str]) -> Output {
    satotate_in(args, None)
}

fn satotate_in(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_satotate"));
    cmd.args(args);
    // Isolate from the ambient environment so tests never share state.
    cmd.env_remove("SATOTATE_CACHE_DIR");
    if let Some(dir) = cache {
        cmd.env("SATOTATE_CACHE_DIR", dir);
    }
    cmd.output().expect("binary runs")
}

fn stdout_of(output: &Output) -> String {
    assert!(
        output.status.success(),
        "exit {:?}, stderr: {}",
        output.status.code(),
        String::from_utf8_lossy(&output.stderr)
    );
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

/// Data lines only: everything after the `#` metadata block and the header.
fn data_lines(text: &str) -> Vec<&str> {
    text.lines()
        .filter(|line| !line.starts_with('#'))
        .skip(1)
        .collect()
}

#[test]
fn tuples_lists_the_four_indecomposables() {
    let out = satotate(&[
        "tuples",
        "--m",
        "25",
        "--d",
        "3",
        "--filter",
        "indecomposable",
    ]);
    let text = stdout_of(&out);
    let rows = data_lines(&text);
    assert_eq!(rows.len(), 4, "output:\n{text}");
    assert!(rows[0].contains("(1, 6, 11, 16, 20, 21)"));
    assert!(rows.iter().all(|row| row.contains("indecomposable")));
}

#[test]
fn tuples_count_only_reports_members_and_candidates() {
    let out = satotate(&["tuples", "--m", "25", "--d", "3", "--count-only"]);
    assert_eq!(data_lines(&stdout_of(&out)), ["224"]);

    let out = satotate(&[
        "tuples",
        "--m",
        "25",
        "--d",
        "3",
        "--stage",
        "candidates",
        "--count-only",
    ]);
    assert_eq!(data_lines(&stdout_of(&out)), ["2971"]);
}

#[test]
fn tuples_rejects_filters_on_candidates() {
    let out = satotate(&[
        "tuples",
        "--m",
        "25",
        "--d",
        "3",
        "--stage",
        "candidates",
        "--filter",
        "exceptional",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn classify_names_an_index_family_indecomposable() {
    let out = satotate(&["classify", "--m", "25", "1", "6", "11", "16", "20", "21"]);
    let text = stdout_of(&out);
    let rows = data_lines(&text);
    assert_eq!(rows.len(), 1);
    assert!(rows[0].contains("indecomposable"), "output:\n{text}");

    let out = satotate(&["classify", "--m", "25", "1", "2", "23", "24"]);
    let text = stdout_of(&out);
    assert!(text.contains("paired"));
    assert!(text.contains("(1, 24) + (2, 23)"));
}

#[test]
fn relations_prints_the_pinned_p5_forms() {
    let out = satotate(&["relations", "--p", "5"]);
    let text = stdout_of(&out);
    assert!(text.contains("# g: 12"));
    assert!(text.contains("# torus_dimension: 10"));
    assert!(text.contains("-θ1+θ4+θ5-θ6+θ9"));
    assert!(text.contains("-θ2+θ3-θ7+θ8+θ10"));
    assert_eq!(data_lines(&text).len(), 2);
}

#[test]
fn gamma_reports_order_and_block_checks() {
    let out = satotate(&["gamma", "--p", "5"]);
    let text = stdout_of(&out);
    assert!(text.contains("# component_order: 20"));
    assert!(text.contains("# orthogonal: true"));
    assert!(text.contains("# symplectic: true"));
    assert!(text.contains("# twist_identity: true"));
    assert_eq!(data_lines(&text).len(), 12);
}

#[test]
fn gamma_rejects_a_non_generator() {
    // 7 has order 4 modulo 25, so it cannot generate the unit group.
    let out = satotate(&["gamma", "--p", "5", "--generator", "7"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn moments_prints_the_frozen_p5_table() {
    let out = satotate(&["moments", "--p", "5", "--max-n", "8"]);
    let text = stdout_of(&out);
    let rows = data_lines(&text);
    assert_eq!(rows.len(), 8);
    assert!(rows[1].contains('2'));
    assert!(rows[3].contains("90"));
    assert!(rows[5].contains("9344"));
    assert!(rows[7].contains("1419866"));
}

#[test]
fn json_lines_output_parses_and_starts_with_meta() {
    let out = satotate(&[
        "moments",
        "--p",
        "5",
        "--max-n",
        "4",
        "--format",
        "json-lines",
    ]);
    let text = stdout_of(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5);

    let meta: serde_json::Value = serde_json::from_str(lines[0]).expect("meta parses");
    assert_eq!(meta["meta"]["command"], "moments");
    assert_eq!(meta["meta"]["p"], "5");

    let last: serde_json::Value = serde_json::from_str(lines[4]).expect("row parses");
    assert_eq!(last["n"], 4);
    assert_eq!(last["moment"], "90");
    assert_eq!(last["decimal"], 90.0);
}

#[test]
fn csv_output_has_a_header_and_quotes_tuple_entries() {
    let out = satotate(&["tuples", "--m", "9", "--d", "2", "--format", "csv"]);
    let text = stdout_of(&out);
    let mut lines = text.lines().filter(|line| !line.starts_with('#'));
    assert_eq!(lines.next(), Some("entries,kind,paired"));
    let first = lines.next().expect("at least one row");
    // Entries contain commas, so the cell must be quoted.
    assert!(first.starts_with("\"(1, "), "row: {first}");
}

#[test]
fn lpoly_single_prime_matches_the_known_trace() {
    let out = satotate(&["lpoly", "--p", "5", "--q", "11"]);
    let text = stdout_of(&out);
    let rows = data_lines(&text);
    assert_eq!(rows.len(), 1);
    let fields: Vec<&str> = rows[0].split_whitespace().collect();
    assert_eq!(&fields[..3], &["11", "16", "-4"]);
}

#[test]
fn lpoly_sweep_compares_numerical_and_exact_moments() {
    let out = satotate(&[
        "lpoly",
        "--p",
        "5",
        "--bound",
        "20000",
        "--max-n",
        "4",
        "--format",
        "json-lines",
    ]);
    let text = stdout_of(&out);
    let rows: Vec<serde_json::Value> = text
        .lines()
        .skip(1)
        .map(|line| serde_json::from_str(line).expect("row parses"))
        .collect();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[1]["theoretical"], 2.0);
    assert_eq!(rows[3]["theoretical"], 90.0);
    // A 20k sweep is rough; just pin sane magnitudes, not tight error bars.
    let second = rows[1]["numerical"].as_f64().unwrap();
    assert!((second - 2.0).abs() < 0.5, "M2 = {second}");
    assert!(rows[1]["relative_error"].as_f64().unwrap() < 0.25);
    assert!(rows[0]["relative_error"].is_null());
}

#[test]
fn histogram_is_deterministic_and_accounts_for_every_record() {
    let first = stdout_of(&satotate(&[
        "histogram",
        "--p",
        "3",
        "--bound",
        "3000",
        "--bins",
        "9",
    ]));
    let second = stdout_of(&satotate(&[
        "histogram",
        "--p",
        "3",
        "--bound",
        "3000",
        "--bins",
        "9",
    ]));
    assert_eq!(first, second);

    let rows = data_lines(&first);
    assert_eq!(rows.len(), 9);
    let binned: u64 = rows
        .iter()
        .map(|row| {
            row.split_whitespace()
                .last()
                .unwrap()
                .parse::<u64>()
                .unwrap()
        })
        .sum();
    let grab = |key: &str| -> u64 {
        first
            .lines()
            .find(|line| line.starts_with(&format!("# {key}: ")))
            .and_then(|line| line.rsplit(' ').next())
            .unwrap()
            .parse()
            .unwrap()
    };
    assert_eq!(binned + grab("zero_count"), grab("total_records"));
}

#[test]
fn cache_dir_persists_records_and_supports_resume() {
    let dir = tempfile::tempdir().unwrap();
    let out = satotate_in(
        &["lpoly", "--p", "5", "--bound", "2000", "--max-n", "2"],
        Some(dir.path()),
    );
    stdout_of(&out);
    let records = dir.path().join("p5-g2.records");
    assert!(records.exists());
    assert!(dir.path().join("p5-g2.checkpoint.json").exists());
    let short = std::fs::read_to_string(&records).unwrap();

    // Resuming to a higher bound extends the same file in place.
    let out = satotate_in(
        &[
            "lpoly", "--p", "5", "--bound", "4000", "--max-n", "2", "--resume",
        ],
        Some(dir.path()),
    );
    stdout_of(&out);
    let long = std::fs::read_to_string(&records).unwrap();
    assert!(long.starts_with(&short));
    assert!(long.len() > short.len());
}

#[test]
fn resume_without_a_cache_dir_is_a_usage_error() {
    let out = satotate(&["lpoly", "--p", "5", "--bound", "2000", "--resume"]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("SATOTATE_CACHE_DIR"), "stderr: {stderr}");
}

#[test]
fn usage_errors_exit_with_code_two() {
    assert_eq!(satotate(&["lpoly", "--p", "5"]).status.code(), Some(2));
    assert_eq!(
        satotate(&["lpoly", "--p", "5", "--q", "11", "--bound", "100"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(satotate(&["moments", "--p", "4"]).status.code(), Some(2));
    assert_eq!(satotate(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(
        satotate(&["tuples", "--m", "25", "--d", "3", "--bogus"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn verify_exact_suite_passes_and_prints_a_ledger() {
    let out = satotate(&["verify", "--suite", "exact"]);
    let text = stdout_of(&out);
    let rows = data_lines(&text);
    assert_eq!(rows.len(), 8);
    assert!(
        rows.iter().all(|row| row.contains("PASS")),
        "ledger:\n{text}"
    );
    assert!(text.contains("# checks: 8 run, 8 passed"));
    assert!(text.contains("tuple-counts"));
    assert!(text.contains("oracle-agreement"));
}

#[test]
fn verify_stats_suite_reports_both_checks_at_a_small_bound() {
    let out = satotate(&["verify", "--suite", "stats", "--bound", "50000"]);
    // Statistical gates are tuned for large sweeps, so a 50k run may land
    // on either side; the contract here is the ledger and the exit code map.
    let code = out.status.code();
    assert!(code == Some(0) || code == Some(1), "exit {code:?}");
    let text = String::from_utf8(out.stdout).unwrap();
    let rows = data_lines(&text);
    assert_eq!(rows.len(), 2);
    assert!(text.contains("sweep-moments"));
    assert!(text.contains("sweep-histogram"));
    assert!(rows.iter().all(|row| row.contains("statistical")));
}

#[test]
fn verify_rejects_an_unknown_suite() {
    let out = satotate(&["verify", "--suite", "everything"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn out_flag_writes_the_report_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.csv");
    let out = satotate(&[
        "relations",
        "--p",
        "5",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("dependent,relation"));
    assert!(text.contains("-θ1+θ4+θ5-θ6+θ9"));
}
