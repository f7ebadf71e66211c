//! The `rauzy-lab` binary end to end.

use std::path::Path;
use std::process::{Command, Output};

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rauzy-lab")).args(args).output().expect("binary runs")
}

fn config(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

fn rows(path: &Path) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_path(path).unwrap();
    r.records().map(|x| x.unwrap().iter().map(String::from).collect()).collect()
}

#[test]
fn golden_types_alternate() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "c.json", r#"{"map": {"preset": "golden-standard"}, "depth": 10}"#);
    let out = dir.path().join("out");
    let o = lab(&["renormalize", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let types: Vec<String> = rows(&out.join("types.csv")).into_iter().map(|r| r[1].clone()).collect();
    assert_eq!(types, ["0", "1", "0", "1", "0", "1", "0", "1", "0", "1"]);
    let states: serde_json::Value = serde_json::from_slice(&std::fs::read(out.join("states.json")).unwrap()).unwrap();
    assert_eq!(states.as_array().unwrap().len(), 11);
}

#[test]
fn rational_rotation_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(
        dir.path(),
        "c.json",
        r#"{"map": {"pair": {"alphabet": ["A", "B"], "pi0": [1, 2], "pi1": [2, 1]}, "lengths": ["0.4", "0.6"]}, "depth": 20}"#,
    );
    let o = lab(&["renormalize", "--config", &cfg, "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("connection at level"));
}

#[test]
fn depth_zero_is_a_single_level() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "c.json", r#"{"map": {"random": {"d": 3}}, "depth": 0, "seed": 4}"#);
    let out = dir.path().join("o");
    assert!(lab(&["renormalize", "--config", &cfg, "--out", out.to_str().unwrap()]).status.success());
    let levels: Vec<String> = rows(&out.join("lengths.csv")).into_iter().map(|r| r[0].clone()).collect();
    assert!(levels.iter().all(|n| n == "0"));
    assert!(rows(&out.join("types.csv")).is_empty());
}

#[test]
fn map_files_resolve_relative_to_the_config() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::create_dir(dir.path().join("maps")).unwrap();
    config(
        &dir.path().join("maps"),
        "m.json",
        r#"{"pair": {"alphabet": ["A", "B"], "pi0": [1, 2], "pi1": [2, 1]}, "lengths": ["0.3", "0.7"],
            "branches": [{"kind": "moebius", "m": "1.2"}, {"kind": "affine"}], "image_lengths": ["0.35", "0.65"]}"#,
    );
    let cfg = config(dir.path(), "c.json", r#"{"map": {"file": "maps/m.json"}, "depth": 5, "precision": "dd"}"#);
    let o = lab(&["renormalize", "--config", &cfg, "--out", dir.path().join("o").to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn identical_runs_give_identical_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "c.json", r#"{"map": {"random": {"d": 4}}, "depth": 12}"#);
    let mut outputs = Vec::new();
    for k in 0..2 {
        let out = dir.path().join(format!("o{k}"));
        assert!(lab(&["renormalize", "--config", &cfg, "--out", out.to_str().unwrap(), "--seed", "9"]).status.success());
        outputs.push(std::fs::read(out.join("lengths.csv")).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn cocycle_report_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(
        dir.path(),
        "c.json",
        r#"{"pair": {"alphabet": ["A", "B", "C"], "pi0": [1, 2, 3], "pi1": [3, 2, 1]}, "moves": "10", "depth": 24}"#,
    );
    let out = dir.path().join("o");
    let o = lab(&["cocycle", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let j: serde_json::Value = serde_json::from_slice(&std::fs::read(out.join("theta_products.json")).unwrap()).unwrap();
    assert_eq!(j["identities"]["class_edges"], true);
    assert_eq!(j["identities"]["class_edge_count"], 6);
    assert_eq!(j["products"].as_array().unwrap().len(), 25);
    assert_eq!(j["central"]["Ok"]["dim"], 1);
    assert!(out.join("growth.csv").exists());
}

#[test]
fn selftest_is_deterministic() {
    let a = lab(&["selftest", "--seed", "5"]);
    let b = lab(&["selftest", "--seed", "5"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(lab(&[]).status.code(), Some(1));
    assert_eq!(lab(&["converge"]).status.code(), Some(1));
    assert_eq!(lab(&["renormalize", "--config", "/nonexistent.json"]).status.code(), Some(1));
    assert_eq!(lab(&["selftest", "--precision", "quad"]).status.code(), Some(1));
    assert_eq!(lab(&["--help"]).status.code(), Some(0));
}
