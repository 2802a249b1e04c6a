use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mukai-walls")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON output")
}

fn has_root(report: &Value, r: &str, c: &str, s: &str) -> bool {
    report["result"]["roots"]
        .as_array()
        .unwrap()
        .iter()
        .any(|e| e["vector"]["r"] == r && e["vector"]["c"] == c && e["vector"]["s"] == s)
}

#[test]
fn roots_small_degree() {
    let out = run(&["roots", "--h2", "2", "--bounds", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert!(has_root(&report, "1", "0", "1"));
    assert!(has_root(&report, "1", "1", "2"));
    assert_eq!(report["result"]["roots"][0]["projection"]["x"]["den"], "1");
}

#[test]
fn roots_in_empty_region() {
    let out = run(&["roots", "--h2", "2", "--region", "5,5,6,6"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["roots"], Value::Array(Vec::new()));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["roots"],
        vec!["roots", "--h2", "3"],
        vec!["roots", "--h2", "2", "--case-b", "13"],
        vec!["verify", "case-a", "--case-a", "2", "4"],
        vec!["verify", "case-b", "--case-b", "12"],
        vec!["verify", "case-a", "--case-b", "13"],
        vec!["verify", "h0", "--h2", "10"],
        vec!["verify", "u-region", "--h2", "10", "--precision", "32"],
        vec!["verify", "u-region", "--h2", "10", "--n", "1/3"],
        vec!["verify", "composite-region", "--h2", "20", "--m", "5", "--n", "4", "--eps", "1"],
        vec!["plot", "walls", "--h2", "10"],
        vec!["frobnicate"],
    ] {
        assert_eq!(run(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn verify_targets_succeed() {
    for args in [
        vec!["verify", "u-region", "--h2", "20"],
        vec!["verify", "u-region", "--h2", "26", "--n", "13/2"],
        vec!["verify", "composite-region", "--case-a", "3", "7"],
        vec!["verify", "composite-region", "--h2", "26", "--m", "2", "--n", "13/2", "--eps", "1/2"],
        vec!["verify", "first-wall", "--case-b", "15"],
        vec!["verify", "h0", "--case-a", "2", "6"],
        vec!["verify", "h0", "--h2", "20", "--vector", "2,1,5"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        let report = json(&out);
        assert_eq!(report["status"], "ok");
        assert!(!report["certificate"].as_array().unwrap().is_empty());
    }
}

#[test]
fn failed_certificate_exits_one_with_report() {
    // No class of the search box destabilizes (0,1,3) on H^2 = 10.
    let out = run(&["verify", "first-wall", "--h2", "10", "--vector", "0,1,3"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["status"], "failed");
}

#[test]
fn tampered_report_is_caught() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = run(&["verify", "case-b", "--case-b", "13", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let mut report: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let claim = &mut report["certificate"][0];
    claim["relation"] = Value::String(match claim["relation"].as_str().unwrap() {
        "lt" | "le" => "gt".into(),
        _ => "lt".into(),
    });
    std::fs::write(&path, serde_json::to_string(&report).unwrap()).unwrap();
    let out = run(&["check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["reproduced"], false);
}

#[test]
fn plots_are_deterministic() {
    for args in [
        vec!["plot", "regions", "--case-a", "2", "5"],
        vec!["plot", "walls", "--case-b", "13"],
        vec!["plot", "polygon", "--case-a", "3", "5"],
    ] {
        let (a, b) = (run(&args), run(&args));
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn polygon_markers_for_family_b() {
    let out = run(&["plot", "polygon", "--case-b", "13"]);
    let svg = String::from_utf8(out.stdout).unwrap();
    assert!(svg.contains(r#"data-label="g1" data-x="-9" data-y="2""#));
    assert!(svg.contains(r#"data-label="g2" data-x="0" data-y="4""#));
    assert!(svg.contains(r#"id="triangle""#) && svg.contains(r#"id="inner""#));
}

#[test]
fn regions_without_roots_show_parabola_only() {
    // No root of H^2 = 2 projects into this narrow window above the origin.
    let out = run(&["plot", "regions", "--h2", "2", "--n", "1", "--bounds", "1", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let fig = json(&out);
    assert_eq!(fig["parabola_h2"], "2");
    let holes: Vec<_> = fig["strokes"].as_array().unwrap().iter().filter(|s| s["class"] == "hole").collect();
    // Bound 1 only reaches (1,0,1), whose hole is the vertical ray from (0,1).
    assert_eq!(holes.len(), 1);
}

#[test]
fn plot_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.svg");
    let out = run(&["plot", "walls", "--case-a", "2", "5", "--svg", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let svg = std::fs::read_to_string(&path).unwrap();
    assert!(svg.starts_with("<?xml"));
    assert!(svg.contains(r#"data-p1="-1/5,2/5" data-p2="1/5,2/5""#));
}
