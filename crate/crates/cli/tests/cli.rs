use std::process::{Command, Output};

use isa_core::harness::{parse_csv, CSV_HEADER};
use serde_json::Value;

fn isa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isa"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn list_shows_the_catalog() {
    let catalog: Value = serde_json::from_str(&stdout(&isa(&["list"]))).unwrap();
    let rows = catalog.as_array().unwrap();
    assert_eq!(rows.len(), 23);
    assert_eq!(rows[0]["id"], "F1");
    assert_eq!(rows[0]["dimension"], 30);
    assert_eq!(rows[0]["bounds"][0], serde_json::json!([-100.0, 100.0]));
    assert_eq!(
        rows[16]["bounds"],
        serde_json::json!([[-5.0, 10.0], [0.0, 15.0]])
    );

    let csv = stdout(&isa(&["list", "--format", "csv"]));
    assert_eq!(csv.lines().count(), 24);
}

#[test]
fn run_is_byte_identical_across_invocations() {
    let args = ["run", "--fn", "F17", "--seed", "7", "--rho", "40"];
    let first = stdout(&isa(&args));
    assert_eq!(first, stdout(&isa(&args)));
    let record: Value = serde_json::from_str(&first).unwrap();
    assert_eq!(record["seed"], 7);
    assert_eq!(record["rho"], 40.0);
    assert_eq!(record["trajectory"].as_array().unwrap().len(), 500);
    assert!(record["elapsed_ms"].is_null());
}

#[test]
fn timing_is_opt_in() {
    let out = stdout(&isa(&[
        "run",
        "--fn",
        "F16",
        "--iterations",
        "3",
        "--timing",
    ]));
    let record: Value = serde_json::from_str(&out).unwrap();
    assert!(record["elapsed_ms"].is_number());
}

#[test]
fn experiment_csv_has_one_row_per_function() {
    let out = isa(&[
        "experiment",
        "--fn",
        "F16,F18",
        "--runs",
        "3",
        "--rho",
        "30",
        "--format",
        "csv",
        "--seed",
        "5",
    ]);
    let text = stdout(&out);
    assert_eq!(text.lines().next().unwrap(), CSV_HEADER.join(","));
    let rows = parse_csv(&text).unwrap();
    assert_eq!(
        rows.iter().map(|r| r.id.as_str()).collect::<Vec<_>>(),
        ["F16", "F18"]
    );
    assert!(rows.iter().all(|r| r.rho == 30.0 && r.stats.runs == 3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("seed=5"));
}

#[test]
fn experiment_json_carries_the_seed_and_records() {
    let out = stdout(&isa(&[
        "experiment",
        "--fn",
        "F17",
        "--runs",
        "2",
        "--rho",
        "40",
        "--verbose",
    ]));
    let report: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(report["base_seed"], 42);
    assert_eq!(
        report["functions"][0]["records"].as_array().unwrap().len(),
        2
    );
}

#[test]
fn grid_search_reports_every_point() {
    let out = stdout(&isa(&[
        "grid-search",
        "--fn",
        "F18",
        "--grid",
        "10,40",
        "--runs",
        "2",
    ]));
    let search: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(search["table"].as_array().unwrap().len(), 2);
    let best = search["best_rho"].as_f64().unwrap();
    assert!(best == 10.0 || best == 40.0);
}

#[test]
fn baseline_compares_at_equal_budget() {
    let out = stdout(&isa(&[
        "baseline", "--fn", "F16", "--runs", "2", "--rho", "30",
    ]));
    let cmp: Value = serde_json::from_str(&out).unwrap();
    let row = &cmp["functions"][0];
    assert_eq!(row["budget"], 50 * 1000);
    assert_eq!(row["isa"]["runs"], 2);
    assert_eq!(row["random"]["runs"], 2);
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["run", "--fn", "F99"][..],
        &["run", "--fn", "F1", "--rho", "150"],
        &["experiment", "--fn", "F1", "--runs", "0"],
        &["grid-search", "--fn", "F1", "--grid", ""],
        &["run"],
        &["frobnicate"],
    ] {
        let out = isa(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn output_flag_writes_a_file() {
    let dir = std::env::temp_dir().join(format!("isa-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("catalog.json");
    stdout(&isa(&["list", "-o", path.to_str().unwrap()]));
    let catalog: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(catalog.as_array().unwrap().len(), 23);
    std::fs::remove_dir_all(dir).unwrap();
}
