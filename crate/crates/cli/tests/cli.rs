//! End-to-end runs of the `santalo-lab` binary.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_santalo-lab"))
        .args(args)
        .env("SANTALO_LAB_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn summary(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("JSON summary on stdout")
}

fn out_dir(dir: &Path) -> &str {
    dir.to_str().unwrap()
}

#[test]
fn square_product_is_eight() {
    let s = summary(&lab(&["product", "--body", "cube", "--dim", "2"]));
    assert!((s["product"].as_f64().unwrap() - 8.0).abs() < 1e-9);
    let s = summary(&lab(&["product", "--body", "cube", "--dim", "2", "--rational"]));
    assert_eq!(s["product"].as_f64().unwrap(), 8.0);
    assert_eq!(s["exact"]["product"], "8");
    assert_eq!(s["exact"]["certified"], true);
}

#[test]
fn rational_regular_polygons() {
    for (m, exact) in [("3", "27/4"), ("4", "8"), ("6", "9")] {
        let s = summary(&lab(&["product", "--body", "polygon-regular", "--m", m, "--rational"]));
        assert_eq!(s["exact"]["product"], exact, "m = {m}");
    }
}

#[test]
fn pentagon_profile_csv() {
    let dir = tempfile::tempdir().unwrap();
    let s = summary(&lab(&[
        "profile", "--body", "polygon-regular", "--m", "5", "--u-angle", "0.7", "--grid", "41", "--out",
        out_dir(dir.path()),
    ]));
    assert!(s["max_midpoint_violation"].as_f64().unwrap() <= 1e-6);
    let mut r = csv::Reader::from_path(dir.path().join("profile.csv")).unwrap();
    let header: Vec<String> = r.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(&header[..3], ["t", "f", "volume"]);
    let rows: Vec<csv::StringRecord> = r.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 41);
    assert_eq!(rows[0][0].parse::<f64>().unwrap(), -1.0);
    assert_eq!(rows[40][0].parse::<f64>().unwrap(), 1.0);
    let on_disk: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("summary.json")).unwrap()).unwrap();
    assert_eq!(on_disk, s);
}

#[test]
fn ellipse_is_certified() {
    let s = summary(&lab(&["certify", "--body", "ellipse", "--a", "2", "--b", "1", "--rot", "0.3"]));
    assert_eq!(s["verdict"], "consistent-with-ellipsoid");
    let s = summary(&lab(&["certify", "--body", "cube", "--dim", "2", "--u", "1,2"]));
    assert_eq!(s["verdict"], "not-local-maximizer");
}

#[test]
fn gen_round_trips_through_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let s = summary(&lab(&[
        "gen", "--body", "polygon-random", "--m", "9", "--seed", "5", "--out", out_dir(dir.path()),
    ]));
    let again = summary(&lab(&["gen", "--body", "polygon-random", "--m", "9", "--seed", "5"]));
    assert_eq!(s["vertices"], again["vertices"]);
    let file = dir.path().join("body.json");
    let t = summary(&lab(&["gen", "--body", "from-file", "--file", file.to_str().unwrap()]));
    assert_eq!(t["vertices"], s["vertices"]);
}

#[test]
fn polar_santalo_and_symmetrize() {
    let s = summary(&lab(&["santalo", "--body", "simplex", "--dim", "2"]));
    let z = s["santalo_point"].as_array().unwrap();
    assert!((z[0].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-8);
    let p = summary(&lab(&["polar", "--body", "cube", "--dim", "3"]));
    assert_eq!(p["polar"]["vertices"], 6);
    let p = summary(&lab(&["polar", "--body", "cube", "--dim", "2", "--z", "0.5,0", "--rational"]));
    assert_eq!(p["exact"]["polar_area"], "8/3");
    let st = summary(&lab(&["symmetrize", "--body", "simplex", "--dim", "2", "--u", "0,1"]));
    // Every triangle has the same volume product, so only rounding separates them.
    let (before, after) = (st["product_before"].as_f64().unwrap(), st["product_after"].as_f64().unwrap());
    assert!((after - before).abs() < 1e-9 * before && (before - 6.75).abs() < 1e-9);
}

#[test]
fn lemma_flow_and_probe() {
    let e = summary(&lab(&["ellipsoid-test", "--body", "ellipse", "--a", "2", "--b", "0.5", "--rot", "1"]));
    assert_eq!(e["passed"], true);
    let e = summary(&lab(&["ellipsoid-test", "--body", "cube", "--dim", "3"]));
    assert_eq!(e["passed"], false);
    let dir = tempfile::tempdir().unwrap();
    let f = summary(&lab(&["flow", "--body", "cube", "--dim", "2", "--steps", "20", "--out", out_dir(dir.path())]));
    assert!(f["min_relative_gain"].as_f64().unwrap() > -1e-6);
    let rows = csv::Reader::from_path(dir.path().join("flow.csv")).unwrap().records().count();
    assert_eq!(rows, 21);
    let p = summary(&lab(&["probe", "--body", "polygon-regular", "--m", "3", "--budget", "50"]));
    assert!(p["improvement"].as_f64().unwrap() > 0.0);
    assert!(p["evaluations"].as_u64().unwrap() <= 50);
}

#[test]
fn input_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let collinear = dir.path().join("flat.json");
    std::fs::write(&collinear, r#"{"dim": 2, "vertices": [[0, 0], [1, 1], [2, 2]]}"#).unwrap();
    let ragged = dir.path().join("ragged.json");
    std::fs::write(&ragged, r#"{"dim": 2, "vertices": [[0, 0], [1, 0, 3], [0, 1]]}"#).unwrap();
    for args in [
        vec!["product", "--body", "nonsense"],
        vec!["product", "--body", "ellipse", "--dim", "3"],
        vec!["profile", "--body", "cube", "--dim", "2", "--grid", "4"],
        vec!["product", "--body", "from-file", "--file", collinear.to_str().unwrap()],
        vec!["product", "--body", "from-file", "--file", ragged.to_str().unwrap()],
        vec!["probe", "--body", "cube", "--dim", "2", "--budget", "0"],
        vec!["frobnicate"],
    ] {
        let out = lab(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn bad_thread_count_is_rejected() {
    let out = Command::new(env!("CARGO_BIN_EXE_santalo-lab"))
        .args(["product", "--body", "cube", "--dim", "2"])
        .env("SANTALO_LAB_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
