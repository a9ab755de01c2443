use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tropfw_cli::experiment::{trial_matrix, ExperimentConfig, ExperimentId};
use tropfw_cli::io::write_matrix;
use tropfw_cli::report::ExperimentReport;
use tropfw_core::search_lex;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn tropfw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tropfw")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn fw_on_four_points() {
    for solver in ["network", "simplex"] {
        let out = tropfw(&["--solver", solver, "fw", data("four_points.csv").to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
        assert!(stdout(&out).contains("objective: 9 (9)"), "{}", stdout(&out));
    }
}

#[test]
fn fw_on_a_single_row() {
    let out = tropfw(&["fw", "--json", data("single_row.csv").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["point"], serde_json::json!(["0", "1", "5/2"]));
    assert_eq!(doc["objective"]["exact"], "0");
}

#[test]
fn malformed_input_names_the_line() {
    let out = tropfw(&["fw", data("malformed.csv").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 2"), "{}", stderr(&out));
}

#[test]
fn missing_file_is_an_input_error() {
    let out = tropfw(&["fw", "/nonexistent/matrix.csv"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn project_onto_segments() {
    let out = tropfw(&[
        "project",
        data("four_points.csv").to_str().unwrap(),
        "--generators",
        data("segment.csv").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "0,1,2\n0,2,2\n0,33/10,2\n0,33/10,2\n");

    let out = tropfw(&[
        "project",
        data("four_points_augmented.csv").to_str().unwrap(),
        "--generators",
        data("wide_segment.csv").to_str().unwrap(),
    ]);
    assert_eq!(stdout(&out), "0,1,2\n0,2,2\n0,4,2\n0,4,2\n0,3,2\n");
}

#[test]
fn project_onto_own_rows_is_identity() {
    let f = data("eight_by_five.csv");
    let out = tropfw(&["project", f.to_str().unwrap(), "--generators", f.to_str().unwrap()]);
    assert_eq!(stdout(&out), std::fs::read_to_string(&f).unwrap());
}

#[test]
fn project_dimension_mismatch() {
    let out = tropfw(&[
        "project",
        data("eight_by_five.csv").to_str().unwrap(),
        "--generators",
        data("segment.csv").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn search_eight_by_five() {
    let f = data("eight_by_five.csv");
    let out = tropfw(&["search", f.to_str().unwrap(), "--algorithm", "lex"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("pair: (3,5)") && text.contains("steps: 5"), "{text}");
    assert!(text.contains("u3: (0,-644,258,-644,-34)"), "{text}");

    let out = tropfw(&["search", f.to_str().unwrap(), "--algorithm", "priority", "--json"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["steps"], 4);
    assert_eq!(doc["visited"], serde_json::json!([[2, 3], [2, 4], [2, 5], [3, 5]]));
    assert_eq!(doc["pair"], serde_json::json!([3, 5]));
}

#[test]
fn search_needs_three_columns() {
    let out = tropfw(&["search", data("two_columns.csv").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("n >= 3 required"), "{}", stderr(&out));
}

#[test]
fn failed_search_exits_with_one() {
    let cfg = ExperimentConfig::new(ExperimentId::Table2, 1, 5);
    let x = (0..200)
        .map(|t| trial_matrix(&cfg, 30, 5, 10.0, t).unwrap())
        .find(|x| !search_lex(x).unwrap().is_success())
        .expect("some trial fails");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fails.csv");
    std::fs::write(&path, write_matrix(&x)).unwrap();
    for algorithm in ["lex", "priority"] {
        let out = tropfw(&["search", path.to_str().unwrap(), "--algorithm", algorithm]);
        assert_eq!(out.status.code(), Some(1));
        assert!(stdout(&out).contains("status: FAIL"));
        assert!(stdout(&out).contains("steps: 6"));
    }
}

#[test]
fn experiment_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = tropfw(&[
        "experiment", "table2", "--trials", "4", "--seed", "3", "--m", "10", "--n", "4,5", "--jobs", "2",
        "--out-dir", dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let json = std::fs::read_to_string(dir.path().join("table2.json")).unwrap();
    let report: ExperimentReport = serde_json::from_str(&json).unwrap();
    assert_eq!(report.metadata.seed, 3);
    assert_eq!(report.cells.len(), 2);
    assert_eq!(report.trials.len(), 8);
    let cells = std::fs::read_to_string(dir.path().join("table2_cells.csv")).unwrap();
    assert_eq!(cells.lines().count(), 3);
    assert!(dir.path().join("table2_trials.csv").exists());
}

#[test]
fn experiment_with_zero_trials() {
    let dir = tempfile::tempdir().unwrap();
    let out = tropfw(&["experiment", "table1", "--trials", "0", "--seed", "1", "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let report: ExperimentReport =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("table1.json")).unwrap()).unwrap();
    assert!(report.cells.is_empty());
}

#[test]
fn experiment_rejects_bad_arguments() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    assert_eq!(tropfw(&["experiment", "table9", "--seed", "1", "--out-dir", d]).status.code(), Some(2));
    assert_eq!(tropfw(&["experiment", "table2", "--seed", "1", "--n", "2", "--out-dir", d]).status.code(), Some(2));
    assert_eq!(tropfw(&["experiment", "table2", "--out-dir", d]).status.code(), Some(2));
}
