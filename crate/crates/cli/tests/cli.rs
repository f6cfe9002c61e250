use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn signwalk(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_signwalk"))
        .current_dir(dir)
        .env_remove("SIGNWALK_PREC_CAP")
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = signwalk(dir, args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8 output")
}

fn json(dir: &Path, args: &[&str]) -> Value {
    serde_json::from_str(&ok(dir, args)).expect("json output")
}

fn hit_count(summary: &Value, k: u64) -> u64 {
    summary["hits"]
        .as_array()
        .unwrap()
        .iter()
        .find(|h| h["k"] == k)
        .map(|h| h["count"].as_u64().unwrap())
        .unwrap()
}

#[test]
fn sqrt2_summary_reports_level_four_hits() {
    let dir = tempfile::tempdir().unwrap();
    let s = json(
        dir.path(),
        &["approximate", "--target", "sqrt(2)", "--seq", "harmonic", "--steps", "100000", "--stride", "1000", "--format", "json"],
    );
    assert!(hit_count(&s, 4) > 0);
    assert!(s["highest_level_hit"].as_u64().unwrap() >= 4);
    assert_eq!(s["suspected_exceptional"], false);
    assert!(dir.path().join("trace.json").exists());
    let csv = std::fs::read_to_string(dir.path().join("trace.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("n,sign,log10_error_lo,log10_error_hi"));
    assert_eq!(csv.lines().count(), 1 + 100);
}

#[test]
fn log2_summary_flags_alternation() {
    let dir = tempfile::tempdir().unwrap();
    let s = json(
        dir.path(),
        &["approximate", "--target", "log(2)", "--seq", "harmonic", "--steps", "10000", "--format", "json"],
    );
    assert_eq!(s["suspected_exceptional"], true);
    assert_eq!(s["alternation"]["tail_start"], 1);
    assert_eq!(hit_count(&s, 2), 0);
    let text = ok(dir.path(), &["approximate", "--target", "log(2)", "--seq", "harmonic", "--steps", "10000"]);
    assert!(text.contains("suspected exceptional target"));
}

#[test]
fn prime_control_reaches_lower_levels_than_harmonic() {
    let dir = tempfile::tempdir().unwrap();
    let args = |seq| ["approximate", "--target", "sqrt(2)", "--seq", seq, "--steps", "10000", "--format", "json"];
    let primes = json(dir.path(), &args("primes"));
    let harmonic = json(dir.path(), &args("harmonic"));
    assert_eq!(hit_count(&primes, 5), 0);
    assert!(hit_count(&harmonic, 5) > 0);
    assert!(hit_count(&primes, 3) < hit_count(&harmonic, 3) / 10);
}

#[test]
fn analysis_is_deterministic_across_a_trace_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["approximate", "--target", "sqrt(2)", "--seq", "harmonic", "--steps", "3000", "--stride", "7", "--out", "a.json"]);
    ok(d, &["analyze", "--file", "a.json", "--beta", "1.5", "--out", "r1.json"]);
    ok(d, &["analyze", "--file", "a.json", "--beta", "1.5", "--out", "r2.json"]);
    let r1 = std::fs::read(d.join("r1.json")).unwrap();
    assert_eq!(r1, std::fs::read(d.join("r2.json")).unwrap());
    let report: Value = serde_json::from_slice(&r1).unwrap();
    assert_eq!(report["steps"], 3000);
    assert!(report["liminf"]["final_value"].is_number());
    // no temporary files are left next to the outputs
    let names: Vec<String> = std::fs::read_dir(d)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(sorted, ["a.csv", "a.json", "r1.json", "r2.json"]);
}

#[test]
fn thue_morse_window_for_point_eight() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["approximate", "--target", "0.8", "--seq", "harmonic", "--steps", "200", "--stride", "1", "--out", "tm.json"]);
    let r = json(d, &["analyze", "--file", "tm.json", "--no-liminf", "--k", "2"]);
    let windows = r["thue_morse"].as_array().unwrap();
    assert!(windows.iter().any(|w| w["start"] == 55 && w["length"].as_u64().unwrap() >= 12));
    let csv = ok(d, &["analyze", "--file", "tm.json", "--format", "csv", "--k", "1"]);
    assert_eq!(csv.lines().next(), Some("k,n,status"));
}

#[test]
fn density_at_one_and_a_half() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["approximate", "--target", "sqrt(2)", "--seq", "harmonic", "--steps", "100000", "--stride", "1000"]);
    let r = json(d, &["analyze", "--file", "trace.json", "--beta", "1.5", "--k", "1", "--no-liminf"]);
    let f = r["density"]["fraction"].as_f64().unwrap();
    assert!((0.3..=0.7).contains(&f), "density {f}");
}

#[test]
fn check_examples() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let w = json(d, &["check", "--seq", "invsq", "--ell", "5", "--jmax", "1000"]);
    assert_eq!(w["diamond"]["first_failure"], 1);
    let s = json(d, &["check", "--seq", "invsq", "--sum"]);
    let basel = std::f64::consts::PI.powi(2) / 6.0;
    let e = &s["sum"]["enclosure"];
    assert!(e["lo_approx"].as_f64().unwrap() <= basel && basel <= e["hi_approx"].as_f64().unwrap());
    let h = json(d, &["check", "--seq", "harmonic", "--sum"]);
    assert_eq!(h["sum"]["divergent"], true);
    let q = json(d, &["check", "--n", "2", "--k", "1", "--sec33"]);
    assert_eq!(q["sec33"]["holds"], false);
    assert_eq!(q["sec33"]["lhs"], "1/2");
    assert_eq!(signwalk(d, &["check", "--seq", "invsq"]).status.code(), Some(1));
}

#[test]
fn walks() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let rot = ok(d, &["walk", "--gen", "rotation", "--alpha", "0", "--steps", "3"]);
    assert_eq!(rot, "n,x,y\n1,1,0\n2,0,0\n3,1,0\n");
    std::fs::write(d.join("vs.csv"), "x,y\n1,0\n0,1\n-1/2,0\n").unwrap();
    let ex = ok(d, &["walk", "--gen", "explicit", "--file", "vs.csv"]);
    // ties take +; each step moves toward the origin when it can
    assert_eq!(ex, "n,x,y\n1,1,0\n2,1,1\n3,0.5,1\n");
    ok(d, &["walk", "--gen", "nearestint", "--beta", "sqrt3", "--steps", "100000", "--out", "w.csv"]);
    let first = std::fs::read(d.join("w.csv")).unwrap();
    assert_eq!(first.iter().filter(|&&b| b == b'\n').count(), 100_001);
    ok(d, &["walk", "--gen", "nearestint", "--beta", "sqrt3", "--steps", "100000", "--out", "w.csv"]);
    assert_eq!(first, std::fs::read(d.join("w.csv")).unwrap());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let code = |args: &[&str]| signwalk(d, args).status.code();
    assert_eq!(code(&["--help"]), Some(0));
    assert_eq!(code(&["approximate", "--bogus"]), Some(1));
    assert_eq!(code(&["approximate", "--target", "sqrt(2", "--seq", "harmonic", "--steps", "5"]), Some(1));
    assert_eq!(code(&["approximate", "--target", "sqrt(2)", "--seq", "zeta", "--steps", "5"]), Some(1));
    assert_eq!(code(&["analyze", "--file", "missing.json"]), Some(1));
    std::fs::write(d.join("corrupt.json"), "{\"format\":\"nope\"}").unwrap();
    assert_eq!(code(&["analyze", "--file", "corrupt.json"]), Some(1));
    let capped = ["approximate", "--target", "sqrt(2)", "--seq", "harmonic", "--steps", "10000", "--prec-init", "8", "--prec-cap", "16"];
    assert_eq!(code(&capped), Some(2));
}

#[test]
fn env_var_sets_the_cap() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_signwalk"))
        .current_dir(dir.path())
        .env("SIGNWALK_PREC_CAP", "16")
        .args(["approximate", "--target", "sqrt(2)", "--seq", "harmonic", "--steps", "10000", "--prec-init", "8"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_file_fills_in_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(
        d.join("run.json"),
        r#"{"target": "sqrt(3)", "seq": "harmonic", "steps": 500, "out": "cfg.json", "format": "json"}"#,
    )
    .unwrap();
    let s = json(d, &["approximate", "--config", "run.json", "--target", "sqrt(2)"]);
    assert_eq!(s["target"], "sqrt(2)");
    assert_eq!(s["steps"], 500);
    assert!(d.join("cfg.json").exists());
    std::fs::write(d.join("bad.json"), r#"{"target": "1/2", "colour": "red"}"#).unwrap();
    assert_eq!(signwalk(d, &["approximate", "--config", "bad.json"]).status.code(), Some(1));
}

#[test]
fn repro_presets() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let list = ok(d, &["repro", "--list"]);
    for name in ["sqrt2-harmonic", "log2-harmonic", "thue-morse", "hits", "liminf", "walk-sqrt3"] {
        assert!(list.contains(name), "{name} missing from preset list");
    }
    ok(d, &["repro", "inequality", "--out", "r"]);
    let q: Value = serde_json::from_slice(&std::fs::read(d.join("r/inequality.json")).unwrap()).unwrap();
    assert_eq!(q["sec33"]["holds"], false);
    ok(d, &["repro", "thue-morse", "--out", "r"]);
    assert!(d.join("r/tm-report.json").exists());
    assert_eq!(signwalk(d, &["repro", "nope"]).status.code(), Some(1));
}
