use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn adiapath(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_adiapath"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) {
    let out = adiapath(dir, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
}

fn summary(path: &Path) -> Value {
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert!(doc["config"].is_object());
    doc["summary"].clone()
}

/// Data rows of a CSV written by the runner, split into cells.
fn rows(path: &Path) -> Vec<Vec<String>> {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# config: {"));
    lines.next().unwrap();
    lines.map(|l| l.split(',').map(str::to_string).collect()).collect()
}

fn f(cell: &str) -> f64 {
    cell.parse().unwrap()
}

const EQ30: &str = "\
0 -2 -2 0 -2 0 0 0
-2 0 0 0 0 0 0 0
-2 0 0 0 0 0 0 0
0 0 0 0 0 0 0 2
-2 0 0 0 0 0 0 0
0 0 0 0 0 0 0 2
0 0 0 0 0 0 0 2
0 0 0 2 0 2 2 0
";

#[test]
fn gap_scan_symmetric_interior_and_reproducible() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    ok(d, &["gap-scan", "--n", "8", "--out", "a"]);
    ok(d, &["gap-scan", "--n", "8", "--out", "b"]);
    let a = std::fs::read(d.join("a/gap_scan.csv")).unwrap();
    assert_eq!(a, std::fs::read(d.join("b/gap_scan.csv")).unwrap());
    let s = summary(&d.join("a/gap_scan_summary.json"));
    let argmin = s["argmin_s"].as_f64().unwrap();
    assert!(argmin > 0.0 && argmin < 1.0);
    let r = rows(&d.join("a/gap_scan.csv"));
    assert_eq!(r.len(), 201);
    for row in &r {
        assert!((f(&row[2]) - f(&row[1]) - f(&row[3])).abs() < 1e-12);
    }
}

#[test]
fn capacity_and_config_exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    assert_eq!(adiapath(d, &["gap-scan", "--n", "13", "--out", "x"]).status.code(), Some(3));
    std::fs::write(d.join("bad.toml"), "sede = 1\n").unwrap();
    assert_eq!(adiapath(d, &["--config", "bad.toml", "gap-scan"]).status.code(), Some(2));
    assert_eq!(
        adiapath(d, &["gap-scan", "--instance", "file", "--out", "x"]).status.code(),
        Some(2)
    );
    assert_eq!(adiapath(d, &["effpot", "--ds", "0", "--no-he"]).status.code(), Some(2));
}

#[test]
fn config_file_is_resolved_and_echoed() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    std::fs::write(d.join("run.toml"), "seed = 11\n[instance]\nn = 5\n[scan]\npoints = 11\n").unwrap();
    ok(d, &["--config", "run.toml", "--seed", "12", "--format", "json", "gap-scan", "--out", "o"]);
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(d.join("o/gap_scan.json")).unwrap()).unwrap();
    assert_eq!(doc["config"]["seed"], 12);
    assert_eq!(doc["config"]["instance"]["n"], 5);
    assert_eq!(doc["config"]["command"], "gap-scan");
    assert_eq!(doc["rows"].as_array().unwrap().len(), 11);
    assert_eq!(summary(&d.join("o/gap_scan_summary.json"))["dim"], 32);
}

#[test]
fn evolve_zero_time_sweep_and_drift() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    ok(d, &["evolve", "--n", "4", "--time", "0,1,2", "--out", "o"]);
    let r = rows(&d.join("o/evolve.csv"));
    assert_eq!(r.len(), 3);
    assert!((f(&r[0][2]) - 1.0 / 16.0).abs() < 1e-12);
    let out = adiapath(d, &["evolve", "--n", "4", "--time", "50", "--steps", "10", "--max-dt", "100", "--method", "rk4"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn effpot_special_matrix_track_succeeds() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    std::fs::write(d.join("eq30.txt"), EQ30).unwrap();
    ok(d, &["effpot", "--matrix-file", "eq30.txt", "--mode", "track", "--out", "a"]);
    let s = summary(&d.join("a/effpot_track_summary.json"));
    assert_eq!(s["outcome"], "success");
    ok(d, &["effpot", "--no-he", "--mode", "track", "--out", "b"]);
    let s = summary(&d.join("b/effpot_track_summary.json"));
    assert_eq!(s["outcome"], "failure");
    let last = rows(&d.join("b/effpot_track.csv")).pop().unwrap();
    assert_eq!(f(&last[0]), 1.0);
    assert!((f(&last[1]) - std::f64::consts::PI).abs() < 2.6f64.to_radians());
}

#[test]
fn effpot_figure_without_extra_term_matches_closed_form() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    ok(d, &["effpot", "--mode", "figure", "--no-he", "--out", "o"]);
    let r = rows(&d.join("o/effpot_figure.csv"));
    assert_eq!(r.len(), 6 * 501);
    for row in r {
        let (s, th) = (f(&row[0]), f(&row[1]));
        let c = th.cos();
        let tail = s / 6.0 * (13.0 + 3.0 * c - 9.0 * c * c - 7.0 * c * c * c);
        assert!((f(&row[2]) - (2.0 * (1.0 - s) * (1.0 - th.sin()) + tail)).abs() < 1e-12);
        assert!((f(&row[3]) - (2.0 * (1.0 - s) * (1.0 + th.sin()) + tail)).abs() < 1e-12);
    }
}

#[test]
fn effpot_monte_carlo_fraction() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    ok(d, &["effpot", "--mode", "mc", "--trials", "1000", "--seed", "1", "--out", "o"]);
    let s = summary(&d.join("o/effpot_mc_summary.json"));
    let frac = s["fraction"].as_f64().unwrap();
    assert!((0.30..=0.40).contains(&frac), "fraction {frac}");
    assert_eq!(s["trials"], 1000);
    assert_eq!(s["seed"], 1);
    assert_eq!(rows(&d.join("o/effpot_mc.csv")).len(), 1000);
}

#[test]
fn sat_gap_study_reproducible_and_zero_scale() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let base = ["sat-gap-study", "--n", "6", "--clauses", "18", "--instances", "3", "--points", "21", "--seed", "4"];
    ok(d, &[&base[..], &["--out", "a"]].concat());
    ok(d, &[&base[..], &["--out", "b"]].concat());
    let a = std::fs::read(d.join("a/sat_gap_study.csv")).unwrap();
    assert_eq!(a, std::fs::read(d.join("b/sat_gap_study.csv")).unwrap());
    assert_eq!(rows(&d.join("a/sat_gap_study.csv")).len(), 3);
    let s = summary(&d.join("a/sat_gap_study_summary.json"));
    assert!(s["ratio"]["median"].as_f64().unwrap() > 0.0);

    ok(d, &[&base[..], &["--half-width", "0", "--out", "z"]].concat());
    for r in rows(&d.join("z/sat_gap_study.csv")) {
        assert_eq!(r[1], r[2]);
        assert_eq!(r[3], r[4]);
    }
}

#[test]
fn brute_force_cases() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    ok(d, &["brute-force", "--n", "4", "--format", "json", "--out", "sym"]);
    let s = summary(&d.join("sym/brute_force_summary.json"));
    assert_eq!(s["min"], 0);
    assert_eq!(s["argmins"], serde_json::json!(["0000"]));

    std::fs::write(d.join("one.txt"), "n 3\nclause 0 1 2 : 0 1 1 0 1 0 0 1\n").unwrap();
    ok(d, &["brute-force", "--instance-file", "one.txt", "--out", "one"]);
    let s = summary(&d.join("one/brute_force_summary.json"));
    assert_eq!(s["min"], 0);
    assert_eq!(s["argmins"], serde_json::json!(["000", "011", "101", "110"]));

    std::fs::write(d.join("empty.txt"), "n 2\n").unwrap();
    ok(d, &["brute-force", "--instance-file", "empty.txt", "--out", "empty"]);
    let s = summary(&d.join("empty/brute_force_summary.json"));
    assert_eq!(s["min"], 0);
    assert_eq!(s["argmins"].as_array().unwrap().len(), 4);
}

#[test]
fn stdout_mode_prints_primary_table() {
    let tmp = tempfile::tempdir().unwrap();
    let out = adiapath(tmp.path(), &["gap-scan", "--n", "3", "--points", "5"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().nth(1), Some("s,E0,E1,gap"));
    assert_eq!(text.lines().count(), 7);
}
