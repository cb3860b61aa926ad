mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use common::*;
use decision_kit::bellinger::rank;
use decision_kit::report::JsonReport;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_decision-kit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn problem_args() -> Vec<String> {
    let files = fixture_files();
    vec![
        "--criteria".into(),
        files.criteria_path.display().to_string(),
        "--alternatives".into(),
        files.alternatives_path.display().to_string(),
    ]
}

fn run_on_fixture(command: &str, extra: &[&str]) -> Output {
    let mut args = vec![command.to_string()];
    args.extend(problem_args());
    args.extend(extra.iter().map(|s| s.to_string()));
    run(&args.iter().map(String::as_str).collect::<Vec<_>>())
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn golden(name: &str) -> String {
    fs::read_to_string(
        Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("tests/golden")
            .join(name),
    )
    .unwrap()
}

#[test]
fn subsets_prints_count() {
    assert_eq!(stdout(&run(&["subsets", "--n", "11", "--k", "5"])), "462\n");
    assert_eq!(stdout(&run(&["subsets", "--n", "20", "--k", "0"])), "1\n");
    let bad = run(&["subsets", "--n", "3", "--k", "5"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("invalid subset size"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["rank"]).status.code(), Some(2));
    assert_eq!(
        run(&["subsets", "--n", "x", "--k", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run_on_fixture("rank", &["--format", "xlsx"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn data_errors_exit_one() {
    let out = run(&[
        "rank",
        "--criteria",
        "/nonexistent/c.csv",
        "--alternatives",
        "/nonexistent/a.csv",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent/c.csv"));
}

#[test]
fn match_table_golden() {
    assert_eq!(stdout(&run_on_fixture("match", &[])), golden("match.txt"));
}

#[test]
fn compare_golden() {
    let text = stdout(&run_on_fixture("compare", &[]));
    assert_eq!(text, golden("compare.txt"));
    assert!(text.contains("Top pair: c1-p4\n"));
}

#[test]
fn sensitivity_golden() {
    let text = stdout(&run_on_fixture(
        "sensitivity",
        &["--delta", "0.01", "--samples", "1000", "--seed", "2019"],
    ));
    assert_eq!(text, golden("sensitivity_d0.01_n1000_s2019.txt"));
}

#[test]
fn sensitivity_rejects_bad_delta() {
    let out = run_on_fixture(
        "sensitivity",
        &["--delta", "1.5", "--samples", "10", "--seed", "1"],
    );
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn rank_table_lists_p4_first() {
    let text = stdout(&run_on_fixture("rank", &[]));
    let block = text.split("Total rating").nth(1).unwrap();
    let first = block.lines().nth(3).unwrap();
    assert!(first.trim_start().starts_with("1  p4"), "{first}");
    let total: f64 = first.split_whitespace().last().unwrap().parse().unwrap();
    assert!((total - 56.87).abs() <= 0.02);
    assert!(!text.contains("matching"));
}

#[test]
fn rank_json_round_trips() {
    let text = stdout(&run_on_fixture("rank", &["--format", "json"]));
    let doc: JsonReport = serde_json::from_str(&text).unwrap();
    let ranking = rank(&fixture()).unwrap();
    assert_eq!(doc.best, ranking.best);
    assert_eq!(doc.order, ranking.order);
    assert!(doc.matching.is_none());
    for (j, id) in ranking.alternatives.iter().enumerate() {
        assert!((doc.totals[id] - ranking.totals[j]).abs() <= 1e-9);
    }
    for (r0, r1) in doc.weighted.iter().zip(ranking.weighted.rows()) {
        for (x, y) in r0.iter().zip(r1) {
            assert!((x - y).abs() <= 1e-9);
        }
    }
}

#[test]
fn unit_scale_and_precision() {
    let text = stdout(&run_on_fixture(
        "rank",
        &["--scale", "unit", "--precision", "4"],
    ));
    assert!(text.contains("Total rating (unit scale)"));
    assert!(text.contains("0.5688"), "{text}");
}

#[test]
fn csv_emits_one_file_per_table() {
    let text = stdout(&run_on_fixture("match", &["--format", "csv"]));
    let names: Vec<&str> = text.lines().filter_map(|l| l.strip_prefix("# ")).collect();
    assert_eq!(
        names,
        [
            "normalized.csv",
            "weighted.csv",
            "totals.csv",
            "matching.csv"
        ]
    );
    assert!(text.contains("c1,0.107,p4,56.88\n"));
}

#[test]
fn alternatives_may_propose() {
    let json = stdout(&run_on_fixture(
        "match",
        &["--proposers", "alternatives", "--format", "json"],
    ));
    let doc: JsonReport = serde_json::from_str(&json).unwrap();
    let m = doc.matching.unwrap();
    assert_eq!(m.proposers, Some(decision_kit::Side::Alternatives));
    let pairs: Vec<(String, String)> = m
        .pairs
        .into_iter()
        .map(|p| (p.criterion, p.alternative))
        .collect();
    let expected: Vec<(String, String)> = PUBLISHED_MATCHING
        .iter()
        .map(|(c, a)| (c.to_string(), a.to_string()))
        .collect();
    assert_eq!(pairs, expected);
}

#[test]
fn clamp_flag_snaps_out_of_range_values() {
    let dir = tempfile::tempdir().unwrap();
    let files = fixture_files();
    let alternatives = fs::read_to_string(&files.alternatives_path)
        .unwrap()
        .replace("p1,job position 1,5,2502.87", "p1,job position 1,5,2000");
    let alt_path = dir.path().join("alternatives.csv");
    fs::write(&alt_path, alternatives).unwrap();
    let criteria = files.criteria_path.display().to_string();
    let alt = alt_path.display().to_string();

    let strict = run(&["rank", "--criteria", &criteria, "--alternatives", &alt]);
    assert_eq!(strict.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&strict.stderr).contains("value out of range at (c2, p1)"));

    let clamped = stdout(&run(&[
        "rank",
        "--criteria",
        &criteria,
        "--alternatives",
        &alt,
        "--clamp",
    ]));
    assert_eq!(clamped, stdout(&run_on_fixture("rank", &[])));
}
