//! End-to-end runs of the `uniton` binary: golden build reports, exit codes,
//! and the stdout/stderr split.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn uniton(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_uniton")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&o.stdout)))
}

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("uniton-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

fn preset_names() -> Vec<String> {
    let out = uniton(&["--quiet", "preset"]);
    assert_eq!(code(&out), 0);
    serde_json::from_value(json(&out)).unwrap()
}

#[test]
fn build_reports_match_golden_files() {
    let names = preset_names();
    assert_eq!(names.len(), 9);
    for name in &names {
        let out = uniton(&["--quiet", "build", "--preset", name]);
        assert_eq!(code(&out), 0, "{name}");
        let want = std::fs::read_to_string(golden(&format!("build-{name}.json"))).unwrap();
        assert_eq!(String::from_utf8(out.stdout).unwrap(), want, "{name}");
    }
}

#[test]
fn summary_goes_to_stderr_unless_quiet() {
    let out = uniton(&["build", "--preset", "u3-example"]);
    assert_eq!(String::from_utf8_lossy(&out.stderr).trim(), "build: n=3 k=3 r=2 alpha ranks [1,2] F ranks [3,1,2]");
    assert_eq!(json(&out)["alpha_ranks"], serde_json::json!([1, 2]));
    let quiet = uniton(&["--quiet", "--json", "build", "--preset", "u3-example"]);
    assert!(quiet.stderr.is_empty());
    assert_eq!(String::from_utf8(quiet.stdout).unwrap().lines().count(), 1);
}

#[test]
fn verify_passes_on_a_grassmannian_preset() {
    let out = uniton(&["--quiet", "verify", "--preset", "g2c5-case-b", "--points", "1"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["pass"], true);
    assert_eq!(v["reports"].as_array().unwrap().len(), 10);
    assert_eq!(v["invariants"]["rank_formula_agrees"], true);
}

#[test]
fn violator_fails_verification_with_exit_5() {
    let out = uniton(&["--quiet", "verify", "--preset", "broken-pattern", "--checks", "unitary,splitting", "--points", "2"]);
    assert_eq!(code(&out), 5);
    let v = json(&out);
    assert_eq!(v["pass"], false);
    assert!(v["reports"].as_array().unwrap().iter().all(|r| r["pass"] == false));
}

#[test]
fn pattern_violation_exits_3() {
    let doc = json(&uniton(&["--quiet", "preset", "broken-pattern"]));
    let mut doc = doc.as_object().unwrap().clone();
    doc.remove("grid");
    let p = temp_file("pattern.json", &Value::Object(doc).to_string());
    let out = uniton(&["--quiet", "build", "--scenario", p.to_str().unwrap()]);
    assert_eq!(code(&out), 3);
    assert_eq!(json(&out)["exit_code"], 3);
}

#[test]
fn argument_and_parse_errors_exit_2() {
    assert_eq!(code(&uniton(&["--quiet", "build", "--preset", "no-such-preset"])), 2);
    let bad = temp_file("bad.json", "{");
    assert_eq!(code(&uniton(&["--quiet", "build", "--scenario", bad.to_str().unwrap()])), 2);
    assert_eq!(code(&uniton(&["--quiet", "enumerate", "5", "2", "0"])), 2);
    assert_eq!(code(&uniton(&["--quiet", "verify", "--preset", "u3-example", "--checks", "energy"])), 2);
}

#[test]
fn empty_array_is_the_constant_map() {
    let p = temp_file("empty.json", r#"{"n": 5, "k": 3, "array": []}"#);
    let out = uniton(&["--quiet", "build", "--scenario", p.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!((v["r"].as_u64(), v["f_ranks"].clone()), (Some(0), serde_json::json!([3])));
}

#[test]
fn enumerate_and_dual() {
    let v = json(&uniton(&["--quiet", "enumerate", "5", "2", "3"]));
    assert_eq!(v["count"], 3);
    let ks: Vec<u64> = v["pairs"].as_array().unwrap().iter().map(|p| p["k"].as_u64().unwrap()).collect();
    assert_eq!(ks, [5, 4, 0]);
    let d = json(&uniton(&["--quiet", "enumerate", "5", "3", "3"]));
    assert_eq!((d["count"].clone(), d["Q_sign"].clone()), (serde_json::json!(3), serde_json::json!(-1)));
    let dual_ks: Vec<u64> = d["pairs"].as_array().unwrap().iter().map(|p| p["k"].as_u64().unwrap()).collect();
    assert_eq!(dual_ks, [0, 1, 5]);
}

#[test]
fn bound_table() {
    let v = json(&uniton(&["--quiet", "bound", "5", "2"]));
    let r: Vec<i64> = v["rows"].as_array().unwrap().iter().map(|row| row["r_k"].as_i64().unwrap()).collect();
    assert_eq!(r, [3, 3, 1, 2, 3, 3]);
    let dual = json(&uniton(&["--quiet", "bound", "5", "3"]));
    assert_eq!(dual["dualized"], true);
}

#[test]
fn model_verdicts() {
    let v = json(&uniton(&["--quiet", "model", "--preset", "u3-example"]));
    assert_eq!(v["pass"], true);
    let raw = temp_file("raw.json", r#"{"n": 2, "r": 2, "k": 1, "spanning": [["1", "0", "0", "0"]]}"#);
    let out = uniton(&["--quiet", "model", "--raw-model", raw.to_str().unwrap()]);
    assert_eq!(code(&out), 5);
    assert_eq!(json(&out)["models"][0]["shift_stable"], false);
}
