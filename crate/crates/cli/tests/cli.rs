use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn spherangle(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spherangle")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("spherangle-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

fn without_timestamp(out: &Output) -> Value {
    let mut v = json(out);
    v.as_object_mut().unwrap().remove("timestamp");
    v
}

#[test]
fn identities_suite_passes_and_echoes_seed() {
    let out = spherangle(&["verify", "--suite", "identities", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&out);
    assert_eq!(report["seed"], 7);
    assert_eq!(report["passed"], true);
    let rows = report["rows"].as_array().unwrap();
    for quantity in ["two-crofton max residual", "three-crofton max residual", "partition max residual"] {
        let row = rows.iter().find(|r| r["quantity"] == quantity).unwrap();
        assert!(row["value"].as_f64().unwrap() < 1e-9);
    }
    for row in rows {
        for key in ["value", "stderr", "method", "samples"] {
            assert!(row.get(key).is_some(), "row without {key}: {row}");
        }
    }
}

#[test]
fn reports_are_reproducible() {
    let args = ["verify", "--suite", "crofton", "--seed", "3", "--samples", "20000"];
    let (a, b) = (spherangle(&args), spherangle(&args));
    assert_eq!(without_timestamp(&a), without_timestamp(&b));
}

#[test]
fn thread_count_does_not_change_results() {
    let run = |threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_spherangle"))
            .args(["verify", "--suite", "crofton", "--seed", "5", "--samples", "150000"])
            .env("SPHERANGLE_THREADS", threads)
            .output()
            .unwrap();
        json(&out)["rows"].clone()
    };
    assert_eq!(run("1"), run("3"));
}

#[test]
fn table_has_fixed_columns_for_all_solids() {
    let out = spherangle(&["table", "--solids", "all", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("solid,quantity,value_normalized,value_natural_units,stderr,method"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 21);
    assert!(rows.contains(&"cube,vertex,0.125,1.57079632679,0,exact"));
    assert!(rows.iter().any(|r| r.starts_with("cell120,vertex,") && r.ends_with(",monte-carlo")));
}

#[test]
fn degenerate_simplex_is_an_input_error() {
    let path = scratch("flat.json");
    std::fs::write(&path, r#"{"dim": 3, "kind": "simplex", "vertices": [[0,0,0],[1,0,0],[2,0,0],[0,0,1]]}"#).unwrap();
    let out = spherangle(&["angles", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Degenerate"));
}

#[test]
fn parse_errors_name_the_field() {
    let path = scratch("bad.json");
    std::fs::write(&path, r#"{"dim": 2, "kind": "simplex", "vertices": [[0,0],[1,"x"],[0,1]]}"#).unwrap();
    let out = spherangle(&["angles", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("vertices[1][1]"));
}

#[test]
fn threshold_violation_exits_one() {
    let out = spherangle(&["verify", "--suite", "crofton", "--samples", "20000", "--threshold", "crofton-sigmas=0"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["passed"], false);
}

#[test]
fn fixtures_feed_angles_and_polar() {
    let path = scratch("tetra.json");
    let out = spherangle(&["fixtures", "--name", "regular", "--dim", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let angles = json(&spherangle(&["angles", "--input", path.to_str().unwrap()]));
    let want = 3.0 * (1.0_f64 / 3.0).acos() - std::f64::consts::PI;
    let vertex = &angles["rows"][0];
    assert_eq!(vertex["method"], "exact");
    assert!((vertex["natural"].as_f64().unwrap() - want).abs() < 1e-11);

    let polar = spherangle(&["polar", "--input", path.to_str().unwrap()]);
    assert_eq!(polar.status.code(), Some(0));
    let rows = json(&polar)["rows"].as_array().unwrap().clone();
    let total = rows.iter().find(|r| r["quantity"] == "total measure").unwrap();
    assert!((total["value"].as_f64().unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn search_reads_a_config_file() {
    let path = scratch("search.json");
    std::fs::write(&path, r#"{"restarts": 4, "seed": 11}"#).unwrap();
    let out = spherangle(&["search", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["seed"], 11);
    assert_eq!(report["details"]["config"]["restarts"], 4);
    let best = report["rows"][0]["value"].as_f64().unwrap();
    let regular = report["rows"][1]["value"].as_f64().unwrap();
    assert!((best - regular).abs() < 1e-4);

    std::fs::write(&path, r#"{"restarts": 4, "colour": "red"}"#).unwrap();
    let out = spherangle(&["search", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn probes_run_on_regular_solids() {
    let out = spherangle(&["probe", "--target", "dodecahedron", "--trials", "5", "--seed", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let out = spherangle(&["probe", "--target", "tesseract", "--trials", "3", "--samples", "100000"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["samples"], 100000);
    let out = spherangle(&["probe", "--target", "dodecagon"]);
    assert_eq!(out.status.code(), Some(2));
}
