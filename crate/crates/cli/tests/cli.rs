//! End-to-end checks of the experiment driver: determinism, the catalog,
//! table output and exit codes.

use std::process::{Command, Output};

fn catwalk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_catwalk"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn catalog_has_enough_experiments() {
    let out = catwalk(&["list"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let entries = report["result"].as_array().unwrap();
    assert!(
        entries.len() >= 15,
        "only {} catalog entries",
        entries.len()
    );
    for entry in entries {
        assert!(!entry["computes"].as_str().unwrap().is_empty());
    }
}

#[test]
fn unknown_subcommand_is_usage_error() {
    let out = catwalk(&["no-such-experiment"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn same_seed_means_identical_bytes() {
    let args = [
        "weighted-sum",
        "--graph",
        "petersen",
        "--k",
        "2",
        "--n",
        "2",
        "--trials",
        "300",
        "--seed",
        "7",
    ];
    let a = catwalk(&args);
    let b = catwalk(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "reports must be byte-identical");
}

#[test]
fn pipeline_reference_values() {
    let out = catwalk(&["pipeline", "--lambda0", "1", "--c-abs", "1"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["result"]["n"], 2);
    assert_eq!(report["result"]["g0"], 4);
}

#[test]
fn building_bounds_emits_csv_table() {
    let out = catwalk(&["building-bounds", "--n-max", "6"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let csv = report["result"]["csv"].as_str().unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("n,r,d_min,d_rad_bound,delta_bound"));
    assert_eq!(csv.lines().count(), 7); // header + 6 rows
                                        // n = 2 certificate rides along
    assert!(report["result"]["simplex_certificate"]["max_ratio"].is_number());
}

#[test]
fn descent_writes_trace_csv() {
    let dir = std::env::temp_dir().join("catwalk-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let trace = dir.join("trace.csv");
    let out = catwalk(&[
        "descent",
        "--action",
        "z:-1,1.0,3.0",
        "--trace",
        trace.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&trace).unwrap();
    assert!(text.starts_with("iteration,energy,gradient_norm"));
    assert!(text.lines().count() > 2);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["result"]["outcome"], "EnergyConverged");
}

#[test]
fn graph_file_round_trip() {
    let dir = std::env::temp_dir().join("catwalk-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("square.json");
    std::fs::write(&path, r#"{"n": 4, "edges": [[0,1],[1,2],[2,3],[3,0]]}"#).unwrap();
    let out = catwalk(&["graph-cert", "--graph", path.to_str().unwrap()]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["result"]["girth"], 4);
    assert_eq!(report["result"]["diameter"], 2);
}

#[test]
fn failing_assertion_gives_exit_one() {
    // a pipeline whose girth requirement fails on the supplied graph
    let out = catwalk(&[
        "pipeline",
        "--lambda0",
        "0.1",
        "--c-abs",
        "1",
        "--graph",
        "petersen",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["pass"], false);
}

#[test]
fn io_error_gives_exit_three() {
    let out = catwalk(&[
        "barycenter",
        "--space",
        "/no/such/file.json",
        "--measure",
        "/none.json",
    ]);
    assert_eq!(out.status.code(), Some(3));
}
