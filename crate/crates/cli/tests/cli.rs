use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_orbit-embed"))
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let out = run(args);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "{e}: stdout {:?} stderr {:?}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    });
    (out.status.code().unwrap(), v)
}

fn write(dir: &tempfile::TempDir, name: &str, v: &Value) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, v.to_string()).unwrap();
    path.to_str().unwrap().to_owned()
}

const SMALL: &[&str] = &["verify", "--n", "1..2", "--trials", "2", "--seed", "11"];

#[test]
fn verify_is_deterministic() {
    let a = run(SMALL);
    let b = run(SMALL);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stdout));
    assert_eq!(a.stdout, b.stdout);
    // timing goes to stderr only
    assert!(String::from_utf8_lossy(&a.stderr).contains("wall time"));
}

#[test]
fn seed_changes_instances_not_verdicts() {
    let (code, other) = run_json(&["verify", "--n", "1..2", "--trials", "2", "--seed", "12"]);
    let (_, base) = run_json(SMALL);
    assert_eq!(code, 0);
    assert_ne!(other["properties"], base["properties"]);
}

#[test]
fn default_config_passes() {
    let (code, v) = run_json(&["verify"]);
    assert_eq!(code, 0);
    assert_eq!(v["passed"], true);
    assert_eq!(v["config"]["trials"], 10);
    assert_eq!(v["config"]["mode"], "exact");
    assert_eq!(v["conventions"]["restriction_sign"], -1);
    assert_eq!(v["properties"].as_array().unwrap().len(), 26);
}

#[test]
fn zero_trials_pass_vacuously() {
    let (code, v) = run_json(&["verify", "--trials", "0"]);
    assert_eq!(code, 0);
    assert_eq!(v["totals"]["trials"], 0);
}

#[test]
fn config_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        &dir,
        "cfg.json",
        &json!({"schema": 1, "n": "1", "trials": 3, "seed": 5, "properties": ["sigma-involution"]}),
    );
    let (code, v) = run_json(&["verify", "--config", &cfg, "--trials", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["config"]["trials"], 1);
    assert_eq!(v["config"]["seed"], 5);
    assert_eq!(v["totals"]["trials"], 1);

    let bad = write(&dir, "bad.json", &json!({"schema": 1, "trails": 3}));
    assert_eq!(run(&["verify", "--config", &bad]).status.code(), Some(2));
}

#[test]
fn bad_flags_are_input_errors() {
    assert_eq!(
        run(&["verify", "--property", "no-such-property"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["verify", "--tol", "-1"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--n", "3..1"]).status.code(), Some(2));
}

#[test]
fn impossible_tolerance_fails_with_instances() {
    let (code, v) = run_json(&[
        "verify", "--mode", "approx", "--tol", "1e-30", "--trials", "1", "--n", "1..2",
    ]);
    assert_eq!(code, 1);
    assert_eq!(v["passed"], false);
    let failures: Vec<&Value> = v["properties"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|p| p["failures"].as_array().unwrap())
        .collect();
    assert!(!failures.is_empty());
    for f in failures {
        assert!(f["instance"].is_object());
        assert!(f["trial_seed"].as_str().unwrap().parse::<u64>().is_ok());
        assert_eq!(f["tolerances"]["residual"], 1e-30);
    }
}

#[test]
fn fuzz_failures_replay() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "fuzz",
        "--mode",
        "approx",
        "--tol",
        "1e-30",
        "--trials",
        "3",
        "--n",
        "1..2",
        "--property",
        "witness",
        "--property",
        "sqrt-residual",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    let n_failures = report["failures"].as_array().unwrap().len();
    assert!(n_failures > 0);
    let path = write(&dir, "dump.json", &report);

    let (code, replayed) = run_json(&["fuzz", "--replay", &path]);
    assert_eq!(code, 1);
    let records = replayed["records"].as_array().unwrap();
    assert_eq!(records.len(), n_failures);
    assert!(records.iter().all(|r| r["reproduced"] == true && r["passed"] == false));

    // a single dump, with its tolerance relaxed, now passes
    let mut single = report["failures"][0].clone();
    single["tolerances"] = json!({"residual": 1e-9, "verification": 1e-8, "cluster_radius": 1e-7});
    let path = write(&dir, "single.json", &single);
    let (code, replayed) = run_json(&["fuzz", "--replay", &path]);
    assert_eq!(code, 0);
    assert_eq!(replayed["records"][0]["passed"], true);
}

fn witness_of(path: &str) -> (i32, Value) {
    run_json(&["witness", path])
}

#[test]
fn symplectic_g_is_its_own_witness() {
    let (code, v) = witness_of(fixture("witness-symplectic.json").to_str().unwrap());
    assert_eq!(code, 0);
    assert_eq!(v["verified"], true);
    assert_eq!(v["report"]["witness"], json!([["1+0 i", "1+0 i"], ["0+0 i", "1+0 i"]]));
}

#[test]
fn scalar_stabilizer_gives_identity() {
    let (code, v) = witness_of(fixture("witness-scalar.json").to_str().unwrap());
    assert_eq!(code, 0);
    assert_eq!(v["report"]["witness"], json!([["1+0 i", "0+0 i"], ["0+0 i", "1+0 i"]]));
}

#[test]
fn scaling_is_removed() {
    // g = 2 s with s symplectic: the witness is s
    let dir = tempfile::tempdir().unwrap();
    let inst = json!({
        "schema": 1, "mode": "exact", "n": 1, "alpha": -1, "constraint": "symplectic",
        "X": {"u": [0, 0], "v": [0, 0], "A": [[1, 0], [0, -1]]},
        "Y": {"u": [0, 0], "v": [0, 0], "A": [[1, -2], [0, -1]]},
        "g": [[2, 2], [0, 2]],
    });
    let (code, v) = witness_of(&write(&dir, "w.json", &inst));
    assert_eq!(code, 0);
    assert_eq!(v["report"]["witness"], json!([["1+0 i", "1+0 i"], ["0+0 i", "1+0 i"]]));
}

#[test]
fn approx_witness_verifies() {
    let (code, v) = witness_of(fixture("witness-approx.json").to_str().unwrap());
    assert_eq!(code, 0);
    assert_eq!(v["report"]["mode"], "approx");
    for c in v["checks"].as_array().unwrap() {
        assert!(c["residual"].as_f64().unwrap() <= c["bound"].as_f64().unwrap());
    }
}

#[test]
fn y_outside_l_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let mut inst: Value =
        serde_json::from_str(&std::fs::read_to_string(fixture("witness-scalar.json")).unwrap()).unwrap();
    inst["Y"]["A"] = json!([[1, 0], [0, 1]]);
    let out = run(&["witness", &write(&dir, "w.json", &inst)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Y is not in L"));
    assert!(out.stdout.is_empty());
}

#[test]
fn missing_file_is_input_error() {
    assert_eq!(run(&["witness", "/nonexistent/instance.json"]).status.code(), Some(2));
}

#[test]
fn conjugate_found_and_not_found() {
    let (code, v) = run_json(&["conjugate", fixture("conjugate-found.json").to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["search"]["verdict"], "found");
    let (code, v) = run_json(&["conjugate", fixture("conjugate-none.json").to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_ne!(v["search"]["verdict"], "found");
    assert!(v["search"]["g"].is_null());
}

#[test]
fn invariants_table() {
    let (code, v) = run_json(&[
        "invariants",
        fixture("invariants.json").to_str().unwrap(),
        "--k-max",
        "2",
    ]);
    assert_eq!(code, 0);
    let gamma = v["gamma"].as_array().unwrap();
    assert_eq!(gamma.len(), 3);
    assert_eq!(gamma[0], json!({"k": 0, "value": "-1+0 i"}));
}

#[test]
fn case_study_reproduces() {
    let (code, v) = run_json(&["case-gl2"]);
    assert_eq!(code, 0);
    assert_eq!(v["reproduced"], true);
    assert_eq!(v["collapsing_pairs"].as_array().unwrap().len(), 3);
    let text = run(&["case-gl2", "--format", "text"]);
    assert!(String::from_utf8_lossy(&text.stdout).contains("3 collapsing pairs"));
}
