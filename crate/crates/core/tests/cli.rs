use std::process::{Command, Output};

use serde_json::Value;

fn chebdeg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chebdeg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

const QUICK_SWEEP: [&str; 7] = ["sweep", "--n", "2:12:2", "--base-n", "24", "--eval-grid", "cheb:41"];

#[test]
fn sweep_csv_header_and_rows() {
    let out = chebdeg(&QUICK_SWEEP);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("family,n,dof,max_error,l2_error"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 18);
    assert!(rows[0].starts_with("total,2,6,"));
    assert!(rows[1].starts_with("euclidean,2,6,"));
    assert!(rows[2].starts_with("max,2,9,"));
}

#[test]
fn sweep_output_is_reproducible() {
    let a = chebdeg(&QUICK_SWEEP);
    let b = chebdeg(&QUICK_SWEEP);
    assert_eq!(a.stdout, b.stdout);

    let random = [
        "sweep",
        "--n",
        "2:8:2",
        "--base-n",
        "16",
        "--eval-grid",
        "random:30",
        "--seed",
        "11",
    ];
    assert_eq!(chebdeg(&random).stdout, chebdeg(&random).stdout);
}

#[test]
fn sweep_json_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.json");
    let mut args = QUICK_SWEEP.to_vec();
    let p = path.to_str().unwrap();
    args.extend([
        "--format",
        "json",
        "--output",
        p,
        "--fit-window",
        "4:12",
        "--family",
        "euclidean",
    ]);
    let out = chebdeg(&args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    for key in ["config", "records", "fitted_rate", "theoretical_rate"] {
        assert!(doc.get(key).is_some(), "missing {key}");
    }
    assert_eq!(doc["records"].as_array().unwrap().len(), 6);
    assert!(doc["fitted_rate"]["euclidean"].as_f64().unwrap() > 1.0);
    let theory = doc["theoretical_rate"]["euclidean"].as_f64().unwrap();
    assert!((theory - 1.3650366).abs() < 1e-6);
}

#[test]
fn count_prints_index_set_sizes() {
    let out = chebdeg(&["count", "--dims", "2", "--family", "euclidean", "--n", "2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "family,n,count\neuclidean,2,6\n");

    let out = chebdeg(&["count", "--dims", "3", "--n", "2", "--format", "json"]);
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    let counts: Vec<u64> = doc["counts"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["count"].as_u64().unwrap())
        .collect();
    assert_eq!(counts, vec![10, 11, 27]);
}

#[test]
fn ratio_json() {
    let out = chebdeg(&["ratio", "--dims", "10"]);
    assert!(out.status.success());
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((doc["total"].as_f64().unwrap() - 11.0654).abs() < 1e-3);
    assert!((doc["max"].as_f64().unwrap() - 401.5428).abs() < 1e-3);
}

#[test]
fn checks_pass_with_default_seed() {
    for cmd in ["regions-check", "lemma-check"] {
        let out = chebdeg(&[cmd]);
        assert!(out.status.success(), "{cmd}: {}", String::from_utf8_lossy(&out.stderr));
        let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(doc["passed"], Value::Bool(true));
    }
}

#[test]
fn bad_configuration_exits_with_two() {
    for args in [
        vec!["sweep", "--dims", "0"],
        vec!["sweep", "--family", "manhattan"],
        vec!["sweep", "--n", "30:2"],
        vec!["sweep", "--eval-grid", "hex:10"],
        vec!["count", "--dims", "2"],
        vec!["frobnicate"],
    ] {
        let out = chebdeg(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8_lossy(&out.stderr);
        let record = err.lines().last().unwrap();
        let doc: Value = serde_json::from_str(record).unwrap_or_else(|_| panic!("{args:?}: {err}"));
        assert!(doc.get("error").is_some(), "{record}");
    }
}
