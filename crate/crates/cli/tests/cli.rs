use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use betweenness::{Lottery, PreferenceModel, RepresentationContext};
use serde_json::Value;

fn models() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("models")
}

fn run(args: &[&str], model: &Path, out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_betweenness"))
        .args(args)
        .arg("--model")
        .arg(model)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn rows(path: &Path) -> Vec<Vec<f64>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect()
}

#[test]
fn repr_expected_utility_two_outcomes() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["repr", "--grid", "10", "--t-grid", "4"], &models().join("eu2.json"), dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let header = fs::read_to_string(dir.path().join("U.csv")).unwrap();
    assert!(header.starts_with("p0,p1,U\n"));
    let table = rows(&dir.path().join("U.csv"));
    assert_eq!(table.len(), 11);
    for r in &table {
        assert!((r[2] - r[1]).abs() <= 1e-10, "{r:?}");
    }
    let u = rows(&dir.path().join("u.csv"));
    assert_eq!(u.len(), 11 * 5);
    for r in &u {
        // for expected utility u(x, t) is E[u] inside (0, 1)
        if r[2] > 0.0 && r[2] < 1.0 {
            assert!((r[3] - r[1]).abs() <= 1e-9, "{r:?}");
        }
    }
    let s = json(&dir.path().join("summary.json"));
    assert_eq!(s["x_star"], serde_json::json!([0.0, 1.0]));
    assert_eq!(s["tol_t"], 1e-10);
}

#[test]
fn repr_rows_are_rederivable() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["repr", "--grid", "4", "--t-grid", "5"], &models().join("da3.json"), dir.path());
    assert_eq!(out.status.code(), Some(0));
    let model = PreferenceModel::disappointment_aversion(vec![0.0, 0.4, 1.0], 1.0).unwrap();
    let ctx = RepresentationContext::new(model, 3).unwrap();
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-11 * (1.0 + b.abs());
    for r in rows(&dir.path().join("U.csv")) {
        let x = Lottery::new(r[..3].to_vec()).unwrap();
        assert!(close(r[3], ctx.solve_u(&x).unwrap()), "{r:?}");
    }
    for r in rows(&dir.path().join("u.csv")) {
        let x = Lottery::new(r[..3].to_vec()).unwrap();
        assert!(close(r[4], ctx.eval_u(&x, r[3]).unwrap()), "{r:?}");
    }
    let s = json(&dir.path().join("summary.json"));
    assert!(s["fixed_point_residual_max"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn invalid_model_file_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"kind":"expected_utility","u":[0, 1.5]}"#).unwrap();
    let out = run(&["repr"], &bad, dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("input error"));
    let out = run(&["check"], &dir.path().join("missing.json"), dir.path());
    assert_eq!(out.status.code(), Some(2));
    fs::write(&bad, "not json").unwrap();
    assert_eq!(run(&["triangle"], &bad, dir.path()).status.code(), Some(2));
}

#[test]
fn engine_errors_exit_three_with_name() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["repr"], &models().join("cyclic.json"), dir.path());
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("DegeneratePreference"));
}

#[test]
fn check_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    for m in ["eu3.json", "da3.json"] {
        let out = run(&["check"], &models().join(m), dir.path());
        assert_eq!(out.status.code(), Some(0), "{m}");
        let report = json(&dir.path().join("check.json"));
        assert_eq!(report["passed"], true);
        assert_eq!(report["reports"].as_array().unwrap().len(), 5);
    }
    let out = run(&["check"], &models().join("cyclic.json"), dir.path());
    assert_eq!(out.status.code(), Some(1));
    let report = json(&dir.path().join("check.json"));
    let rationality = &report["reports"][0];
    assert_eq!(rationality["axiom"], "Rationality");
    assert_eq!(rationality["passed"], false);
    assert!(!rationality["witnesses"].as_array().unwrap().is_empty());
}

#[test]
fn triangle_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["triangle", "--levels", "0.2,0.5,0.8", "--grid", "12"], &models().join("wu3.json"), dir.path());
    assert_eq!(out.status.code(), Some(0));
    let s = json(&dir.path().join("triangle.json"));
    let curves = s["curves"].as_array().unwrap();
    assert_eq!(curves.len(), 3);
    assert!(curves.iter().all(|c| c["collinearity_residual"].as_f64().unwrap() <= 1e-6));
    let svg = fs::read_to_string(dir.path().join("triangle.svg")).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 3);
    assert!(fs::read_to_string(dir.path().join("triangle.csv"))
        .unwrap()
        .starts_with("p0,p1,p2,level,p_worst,p_best\n"));

    let out = run(&["triangle"], &models().join("eu2.json"), dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("WrongDimension"));
}

#[test]
fn separation_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["separation", "--grid", "3"], &models().join("eu3.json"), dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let s = json(&dir.path().join("separation.json"));
    assert!(s["max_discrepancy"].as_f64().unwrap() <= 1e-6);
    assert!(s["results"][0]["polytopes"].as_array().unwrap().len() >= 3);

    let out = run(&["separation", "--grid", "3"], &models().join("overlap.json"), dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Infeasible"));
    assert!(fs::read_to_string(dir.path().join("separation.json")).unwrap().contains("Infeasible"));

    let out = run(&["separation", "--levels", "0,0.5"], &models().join("eu3.json"), dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn identical_runs_are_byte_identical() {
    let root = tempfile::tempdir().unwrap();
    for cmd in ["repr", "check", "triangle", "separation"] {
        let a = root.path().join(format!("{cmd}-a"));
        let b = root.path().join(format!("{cmd}-b"));
        for d in [&a, &b] {
            run(&[cmd, "--grid", "3", "--seed", "11"], &models().join("kernel3.json"), d);
        }
        let mut names: Vec<_> = fs::read_dir(&a).unwrap().map(|e| e.unwrap().file_name()).collect();
        names.sort();
        assert!(!names.is_empty());
        for n in names {
            assert_eq!(fs::read(a.join(&n)).unwrap(), fs::read(b.join(&n)).unwrap(), "{cmd}/{n:?}");
        }
    }
}
