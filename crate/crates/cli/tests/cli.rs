use std::process::{Command, Output};

use serde_json::Value;

fn shadows(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shadows"))
        .args(args)
        .env_remove("SHADOWS_ORACLE_LIMIT")
        .output()
        .expect("binary runs")
}

fn record(args: &[&str]) -> Value {
    let out = shadows(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1, "expected one JSON line");
    serde_json::from_str(&text).unwrap()
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

#[test]
fn record_has_fixed_keys() {
    let r = record(&["check", "--vec", "1,0,0"]);
    let mut keys: Vec<&str> = r.as_object().unwrap().keys().map(String::as_str).collect();
    keys.sort();
    assert_eq!(keys, ["command", "elapsed_ms", "params", "results", "seed", "version"]);
    assert_eq!(r["command"], "check");
    assert_eq!(r["seed"], Value::Null);
}

#[test]
fn check_examples() {
    let r = record(&["check", "--vec", "0.6,0.8"]);
    let c = &r["results"]["criterion"];
    assert_eq!(c["satisfied"], true);
    assert!((f(&c["product"]) - 1.12).abs() < 1e-12);
    assert!((f(&r["results"]["input_l2"]) - 1.0).abs() < 1e-15);
    let shadow = &r["results"]["canonical_shadow"];
    assert!((f(&shadow["inf_norm"]) - 0.16).abs() < 1e-12);
    assert!(
        (f(&r["results"]["closed_form_shadow_norm"]) - f(&shadow["inf_norm"])).abs() < 1e-12
    );

    let r = record(&["check", "--vec", "1,0,0"]);
    let c = &r["results"]["criterion"];
    assert_eq!(c["satisfied"], true);
    assert_eq!(f(&c["product"]), 1.0);
    assert_eq!(c["degenerate_zero_coords"], true);
    assert_eq!(r["results"]["closed_form_shadow_norm"], 1.0);

    let r = record(&["check", "--maximizer", "10"]);
    let c = &r["results"]["criterion"];
    assert_eq!(c["satisfied"], false);
    assert!((f(&c["product"]) - 2.08114).abs() < 1e-5);
}

#[test]
fn check_normalizes_and_reports_input_norm() {
    let r = record(&["check", "--vec", "-3,4"]);
    assert!((f(&r["results"]["input_l2"]) - 5.0).abs() < 1e-14);
    assert_eq!(r["results"]["criterion"]["witness"], serde_json::json!([-1, 1]));
}

#[test]
fn check_margin_and_detector() {
    let r = record(&["check", "--vec", "1,1", "--detect"]);
    assert_eq!(r["results"]["criterion"]["near_vertex_orthogonal"], true);
    let r = record(&["check", "--vec", "0.6,0.8", "--detect"]);
    assert_eq!(r["results"]["criterion"]["near_vertex_orthogonal"], false);
    // f = 1.12 fails a 0.9 margin.
    let r = record(&["check", "--vec", "0.6,0.8", "--margin", "0.9"]);
    assert_eq!(r["results"]["criterion"]["satisfied"], false);
}

#[test]
fn check_reads_vector_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("u.txt");
    std::fs::write(&path, "0.6\n 0.8 \n").unwrap();
    let r = record(&["check", "--file", path.to_str().unwrap()]);
    assert!((f(&r["results"]["criterion"]["product"]) - 1.12).abs() < 1e-12);
}

#[test]
fn oracle_examples() {
    let r = record(&["oracle", "--vec", "1,0"]);
    assert_eq!(r["results"]["verdict"]["exists_inside"], true);

    let r = record(&["oracle", "--maximizer", "10"]);
    assert_eq!(r["results"]["verdict"]["exists_inside"], false);
    assert_eq!(r["results"]["verdict"]["vertices_checked"], 1024);
    assert_eq!(r["results"]["agreement"], true);

    let r = record(&["oracle", "--vec", "0.70710678,0.70710678"]);
    assert_eq!(r["results"]["verdict"]["orthogonal_vertex_found"], true);
    assert_eq!(r["results"]["agreement"], "n/a (degenerate)");
}

#[test]
fn extremal_examples() {
    let r = record(&["extremal", "--n", "9"]);
    let row = &r["results"]["rows"][0];
    assert_eq!(row["max_value"], 2.0);
    assert_eq!(row["threshold_ok"], true);
    assert_eq!(r["results"]["threshold_dimension"], 9);

    let r = record(&["extremal", "--scan", "1..12"]);
    let rows = r["results"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 12);
    for row in rows {
        let n = row["n"].as_u64().unwrap();
        assert_eq!(row["threshold_ok"], n <= 9, "n = {n}");
    }

    let r = record(&["extremal", "--n", "10", "--verify"]);
    assert_eq!(r["seed"], 0);
    let gap = f(&r["results"]["rows"][0]["numerical"]["gap"]);
    assert!(gap.abs() <= 1e-7);
}

#[test]
fn measure_examples_and_csv_schema() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("m.csv");
    let r = record(&[
        "measure", "--dims", "5,9", "--samples", "1000", "--seed", "1", "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(r["seed"], 1);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(!text.contains('\r'));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "n,samples,seed,frac_satisfying,mean,median,q05,q95,growth_ratio"
    );
    assert_eq!(lines.len(), 3);
    for line in &lines[1..] {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols.len(), 9);
        assert_eq!(cols[3].parse::<f64>().unwrap(), 1.0);
    }

    // growth_ratio is blank below n = 3.
    let r = record(&[
        "measure", "--dims", "2", "--samples", "10", "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(r["results"]["rows"][0]["growth_ratio"], Value::Null);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.lines().nth(1).unwrap().ends_with(','));
}

#[test]
fn measure_single_sample_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        record(&["measure", "--dims", "3", "--samples", "1", "--seed", "7", "--out", p.to_str().unwrap()]);
    }
    let a = std::fs::read(a).unwrap();
    assert_eq!(a, std::fs::read(b).unwrap());
    assert_eq!(String::from_utf8(a).unwrap().lines().count(), 2);
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| shadows(args).status.code().unwrap();
    assert_eq!(code(&["check", "--vec", "1,abc"]), 2);
    assert_eq!(code(&["check", "--vec", "1,nan"]), 2);
    assert_eq!(code(&["check"]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
    assert_eq!(code(&["extremal", "--scan", "5..2"]), 2);
    assert_eq!(code(&["extremal", "--n", "0"]), 2);
    assert_eq!(code(&["measure", "--dims", "0"]), 2);
    assert_eq!(code(&["check", "--vec", "0,0,0"]), 3);
    assert_eq!(code(&["oracle", "--vec", "0,-0"]), 3);
    assert_eq!(code(&["oracle", "--maximizer", "10", "--limit", "9"]), 4);
    assert_eq!(code(&["check", "--file", "/nonexistent/u.txt"]), 5);
    assert_eq!(
        code(&["measure", "--dims", "3", "--samples", "5", "--out", "/nonexistent/dir/m.csv"]),
        5
    );
}

#[test]
fn oracle_limit_from_environment() {
    let run = |limit: &str| {
        Command::new(env!("CARGO_BIN_EXE_shadows"))
            .args(["oracle", "--maximizer", "10"])
            .env("SHADOWS_ORACLE_LIMIT", limit)
            .output()
            .unwrap()
    };
    assert_eq!(run("9").status.code(), Some(4));
    assert_eq!(run("10").status.code(), Some(0));
    assert_eq!(run("ten").status.code(), Some(2));
    // The flag wins over the environment.
    let out = Command::new(env!("CARGO_BIN_EXE_shadows"))
        .args(["oracle", "--maximizer", "10", "--limit", "12"])
        .env("SHADOWS_ORACLE_LIMIT", "3")
        .output()
        .unwrap();
    assert!(out.status.success());
}

#[test]
fn run_record_round_trips() {
    let out = shadows(&["extremal", "--scan", "1..3", "--verify", "--seed", "4"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let again: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(v, again);
    // Floats survive printing and parsing bit for bit.
    let x = f(&v["results"]["rows"][1]["maximizer"][0]);
    let m = cube_shadows::extremal::maximizer(2).unwrap();
    assert_eq!(x.to_bits(), m.coords()[0].to_bits());
}
