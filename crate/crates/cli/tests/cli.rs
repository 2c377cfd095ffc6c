use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn swarmselect(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_swarmselect"))
        .args(args)
        .env("SWARMSELECT_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> Output {
    let out = swarmselect(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn synthetic(dir: &Path) -> PathBuf {
    let path = dir.join("synthetic.csv");
    ok(&[
        "gen-synthetic",
        "--output",
        path.to_str().unwrap(),
        "--samples",
        "60",
        "--informative",
        "2",
        "--noise",
        "4",
    ]);
    path
}

const SMALL: [&str; 6] = [
    "--population",
    "5",
    "--iterations",
    "4",
    "--ssa-iterations",
    "2",
];

fn run_into(data: &Path, out: &Path, extra: &[&str]) {
    let mut args = vec![
        "--dataset",
        data.to_str().unwrap(),
        "--output",
        out.to_str().unwrap(),
    ];
    args.extend_from_slice(&SMALL);
    args.extend_from_slice(extra);
    ok(&args);
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Drops every measured-time field so the rest can be compared exactly.
fn without_timing(mut doc: Value) -> Value {
    for run in doc["runs"].as_array_mut().unwrap() {
        run.as_object_mut().unwrap().remove("timing");
    }
    let summary = doc["summary"].as_object_mut().unwrap();
    summary.remove("median_classification_seconds");
    summary.remove("median_optimization_seconds");
    doc
}

#[test]
fn gen_synthetic_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = synthetic(dir.path());
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap().split(',').count(), 7);
    assert_eq!(lines.count(), 60);
}

#[test]
fn same_seed_same_results() {
    let dir = tempfile::tempdir().unwrap();
    let data = synthetic(dir.path());
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        run_into(&data, out, &["--algo", "hhossa", "--seed", "7"]);
    }
    let ja = without_timing(read_json(&a.join("hhossa.json")));
    let jb = without_timing(read_json(&b.join("hhossa.json")));
    assert_eq!(
        serde_json::to_string(&ja).unwrap(),
        serde_json::to_string(&jb).unwrap()
    );
    for name in ["metrics.csv", "summary.csv", "traces.csv"] {
        assert_eq!(
            std::fs::read(a.join(name)).unwrap(),
            std::fs::read(b.join(name)).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn hho_and_ssa_share_a_schema() {
    let dir = tempfile::tempdir().unwrap();
    let data = synthetic(dir.path());
    let out = dir.path().join("out");
    run_into(&data, &out, &["--algo", "hho", "--algo", "ssa"]);
    let keys = |v: &Value| {
        let mut k: Vec<String> = v["runs"][0].as_object().unwrap().keys().cloned().collect();
        k.sort();
        k
    };
    let hho = read_json(&out.join("hho.json"));
    let ssa = read_json(&out.join("ssa.json"));
    assert_eq!(keys(&hho), keys(&ssa));
    assert_eq!(hho["algo"], "hho");
    assert_eq!(ssa["algo"], "ssa");
}

#[test]
fn repeat_reports_median_accuracy() {
    let dir = tempfile::tempdir().unwrap();
    let data = synthetic(dir.path());
    let out = dir.path().join("out");
    run_into(
        &data,
        &out,
        &["--algo", "hho", "--repeat", "10", "--seed", "3"],
    );
    let doc = read_json(&out.join("hho.json"));
    let runs = doc["runs"].as_array().unwrap();
    assert_eq!(runs.len(), 10);
    let seeds: Vec<u64> = runs.iter().map(|r| r["seed"].as_u64().unwrap()).collect();
    assert_eq!(seeds, (3..13).collect::<Vec<_>>());
    let mut acc: Vec<f64> = runs
        .iter()
        .map(|r| r["test_metrics"]["accuracy"].as_f64().unwrap())
        .collect();
    acc.sort_by(f64::total_cmp);
    let median = 0.5 * (acc[4] + acc[5]);
    assert_eq!(doc["summary"]["median_accuracy"].as_f64().unwrap(), median);
    let summary = std::fs::read_to_string(out.join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 2);
    assert!(summary.lines().nth(1).unwrap().starts_with("hho,10,"));
}

#[test]
fn timing_table_compares_hybrid_with_sum() {
    let dir = tempfile::tempdir().unwrap();
    let data = synthetic(dir.path());
    let out = dir.path().join("out");
    run_into(&data, &out, &["--algo", "hhossa,hho,ssa"]);
    let timing = std::fs::read_to_string(out.join("timing.csv")).unwrap();
    let names: Vec<&str> = timing
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(names, ["hhossa", "hho", "ssa", "hho+ssa"]);
}

#[test]
fn config_file_is_honored() {
    let dir = tempfile::tempdir().unwrap();
    let data = synthetic(dir.path());
    let out = dir.path().join("out");
    let config = dir.path().join("run.toml");
    std::fs::write(
        &config,
        format!(
            "dataset = {:?}\noutput = {:?}\nalgo = \"ssa\"\nseed = 11\n[ssa]\npopulation = 4\n[hho]\niterations = 3\n",
            data.to_str().unwrap(),
            out.to_str().unwrap()
        ),
    )
    .unwrap();
    ok(&["run", "--config", config.to_str().unwrap()]);
    let doc = read_json(&out.join("ssa.json"));
    assert_eq!(doc["runs"][0]["seed"], 11);
    assert_eq!(doc["runs"][0]["config"]["ssa_population"], 4);
    assert_eq!(doc["runs"][0]["trace"].as_array().unwrap().len(), 4);
}

#[test]
fn errors_exit_nonzero_with_stage() {
    let dir = tempfile::tempdir().unwrap();
    let missing = swarmselect(&["--dataset", dir.path().join("nope.csv").to_str().unwrap()]);
    assert!(!missing.status.success());
    assert!(String::from_utf8_lossy(&missing.stderr).contains("loading dataset"));

    let data = synthetic(dir.path());
    let bad_algo = swarmselect(&["--dataset", data.to_str().unwrap(), "--algo", "gwo"]);
    assert!(!bad_algo.status.success());
    assert!(String::from_utf8_lossy(&bad_algo.stderr).contains("resolving configuration"));

    let no_dataset = swarmselect(&[]);
    assert!(!no_dataset.status.success());
}
