use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn ascent(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ascent"))
        .args(args)
        .arg("--out-dir")
        .arg(dir)
        .env_remove("ASCENT_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn report(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is a JSON report")
}

fn read_csv(path: &Path) -> Vec<Vec<f64>> {
    csv::Reader::from_path(path)
        .unwrap()
        .records()
        .map(|r| r.unwrap().iter().map(|s| s.parse().unwrap()).collect())
        .collect()
}

#[test]
fn nonpositive_tolerance_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(ascent(dir.path(), &["--tol", "0", "wave3d"]).status.code(), Some(2));
    assert_eq!(ascent(dir.path(), &["verify", "--only", "99"]).status.code(), Some(2));
}

#[test]
fn malformed_fixture_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\"ops\": [{\"dim\": 2, \"rows\": [[[1, 0]]]}]}").unwrap();
    let o = ascent(dir.path(), &["ascent", "--fixture", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn zero_time_returns_the_initial_field() {
    let dir = tempfile::tempdir().unwrap();
    let o = ascent(dir.path(), &["wave3d", "--grid", "16", "--t", "0"]);
    assert!(o.status.success());
    let rows = read_csv(&dir.path().join("wave3d.csv"));
    let sigma = 0.6;
    let mut worst = 0.0_f64;
    for r in &rows {
        let x: Vec<f64> = r[1..4].to_vec();
        let f = (-x.iter().map(|v| v * v).sum::<f64>() / (2.0 * sigma * sigma)).exp();
        worst = worst.max((r[4] - f).abs());
    }
    assert_eq!(rows.len(), 16 * 16 * 16);
    assert!(worst <= 1e-12, "worst {worst}");
}

#[test]
fn massless_klein_gordon_matches_the_wave() {
    let dir = tempfile::tempdir().unwrap();
    assert!(ascent(dir.path(), &["kg", "--a", "0", "--n", "2", "--grid", "32"]).status.success());
    assert!(ascent(dir.path(), &["wave2d", "--grid", "32"]).status.success());
    let kg = read_csv(&dir.path().join("kg.csv"));
    let wave = read_csv(&dir.path().join("wave2d.csv"));
    let gap = kg.iter().zip(&wave).map(|(a, b)| (a[3] - b[3]).abs()).fold(0.0, f64::max);
    assert!(gap <= 1e-8, "gap {gap}");
}

#[test]
fn noncomm_table_decreases() {
    let dir = tempfile::tempdir().unwrap();
    let o = ascent(dir.path(), &["noncomm", "--m0", "8", "--mcap", "64"]);
    assert!(o.status.success());
    let rows = read_csv(&dir.path().join("noncomm.csv"));
    assert!(rows.len() >= 2);
    assert!(rows.windows(2).all(|w| w[1][1] < w[0][1]));
}

#[test]
fn same_seed_same_report() {
    let dir = tempfile::tempdir().unwrap();
    let a = ascent(dir.path(), &["--seed", "7", "verify", "--only", "3,7"]);
    let b = ascent(dir.path(), &["--seed", "7", "verify", "--only", "3,7"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_runs_all_checks() {
    let dir = tempfile::tempdir().unwrap();
    let o = ascent(dir.path(), &["verify"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(&o);
    assert_eq!(r["results"].as_array().unwrap().len(), 15);
    assert_eq!(r["pass"], Value::Bool(true));
}

#[test]
fn non_hermitian_fixture_warns() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("skew.json");
    let fixture = r#"{"ops": [
        {"dim": 2, "rows": [[[1, 0], [0.5, 0]], [[0, 0], [-1, 0]]]},
        {"dim": 2, "rows": [[[0, 0], [1, 0]], [[1, 0], [0, 0]]]}
    ]}"#;
    std::fs::write(&path, fixture).unwrap();
    let o = ascent(dir.path(), &["verify", "--only", "1", "--fixture", path.to_str().unwrap()]);
    let r = report(&o);
    assert!(!r["warnings"].as_array().unwrap().is_empty());
}

#[test]
fn fixture_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    assert!(ascent(dir.path(), &["fixture", "--kind", "commuting", "--dim", "3", "--count", "3"]).status.success());
    let path = dir.path().join("fixture.json");
    let o = ascent(dir.path(), &["ascent", "--fixture", path.to_str().unwrap(), "--t", "0.7"]);
    assert!(o.status.success());
    assert_eq!(report(&o)["formula"], "odd-dimensional sphere ascent");
}
