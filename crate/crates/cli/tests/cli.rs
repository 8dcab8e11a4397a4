use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fmodlen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fmodlen")).args(args).output().unwrap()
}

fn write_input(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path
}

const ORDINARY: &str = r#"{"field": {"p": 5}, "vars": ["x", "y", "z"], "ideal": ["y^2*z - x^3 - x*z^2"]}"#;
const TWISTED_CUBIC: &str =
    r#"{"field": {"p": 3}, "vars": ["x", "y", "z", "w"], "ideal": ["x*z - y^2", "x*w - y*z", "y*w - z^2"]}"#;

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn json_report_on_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_input(dir.path(), "e.json", ORDINARY);
    let out = fmodlen(&["run", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&out);
    assert_eq!(report["rows"][0]["j"], 1);
    assert_eq!(report["rows"][0]["lambda"], 1);
    assert_eq!(report["rows"][0]["finite_length"], false);
    assert_eq!(report["resolution"]["cache"], "disabled");
}

#[test]
fn text_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_input(dir.path(), "e.json", ORDINARY);
    let out = fmodlen(&["run", input.to_str().unwrap(), "--text"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("resolution ranks: [1, 1]"), "{text}");

    let report = dir.path().join("report.json");
    let out = fmodlen(&["run", input.to_str().unwrap(), "--output", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["n"], 2);
}

#[test]
fn verify_and_both_paths() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_input(dir.path(), "e.json", ORDINARY);
    let out = fmodlen(&["run", input.to_str().unwrap(), "--verify", "--path", "both"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&out);
    assert_eq!(report["verification"]["passed"], true);
    assert_eq!(report["rows"][0]["lambda_hasse_witt"], 1);
    let names: Vec<&str> =
        report["verification"]["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    for name in ["dual_path", "groebner_audit", "generator_shift", "field_extension", "well_defined"] {
        assert!(names.contains(&name), "{name} missing from {names:?}");
    }
}

#[test]
fn hasse_witt_path_needs_a_hypersurface() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_input(dir.path(), "c.json", TWISTED_CUBIC);
    let out = fmodlen(&["run", input.to_str().unwrap(), "--path", "hassewitt"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("principal"));
}

#[test]
fn bad_inputs_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        r#"{"field": {"p": 4}, "vars": ["x", "y"], "ideal": ["x"]}"#,
        r#"{"field": {"p": 5}, "vars": ["x", "y"], "ideal": ["x + 1"]}"#,
        r#"{"field": {"p": 5}, "vars": ["x", "y", "z"], "ideal": ["x", "y", "z", "1"]}"#,
        r#"{"field": {"p": 5}, "vars": ["x", "y"], "ideal": ["x"], "bogus": 1}"#,
        "not json",
    ];
    for (k, body) in cases.iter().enumerate() {
        let input = write_input(dir.path(), &format!("bad{k}.json"), body);
        let out = fmodlen(&["run", input.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(1), "{body}");
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"), "{body}");
    }
    assert_eq!(fmodlen(&["run", "/nonexistent/input.json"]).status.code(), Some(1));
}

fn without_timings(rows: &Value) -> Value {
    let mut rows = rows.clone();
    for row in rows.as_array_mut().unwrap() {
        row.as_object_mut().unwrap().remove("timing_ms");
    }
    rows
}

#[test]
fn cache_hit_on_second_run() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let input = write_input(dir.path(), "c.json", TWISTED_CUBIC);
    let args = ["run", input.to_str().unwrap(), "--cache-dir", cache.to_str().unwrap()];
    let first = json(&fmodlen(&args));
    assert_eq!(first["resolution"]["cache"], "miss");
    let key = first["resolution"]["key"].as_str().unwrap();
    assert!(cache.join(key).join("resolution.bin").is_file());
    let second = json(&fmodlen(&args));
    assert_eq!(second["resolution"]["cache"], "hit");
    assert_eq!(without_timings(&first["rows"]), without_timings(&second["rows"]));
}

#[test]
fn zero_budget_writes_checkpoint() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_input(dir.path(), "c.json", TWISTED_CUBIC);
    let checkpoint = dir.path().join("ck.json");
    let out = fmodlen(&["run", input.to_str().unwrap(), "--budget-seconds", "0", "--checkpoint", checkpoint.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget exceeded"));
    assert!(checkpoint.is_file());

    // a rerun without a budget completes and clears the checkpoint
    let out = fmodlen(&["run", input.to_str().unwrap(), "--checkpoint", checkpoint.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["rows"].as_array().unwrap().len(), 3);
}

#[test]
fn default_checkpoint_sits_next_to_the_input() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_input(dir.path(), "c.json", TWISTED_CUBIC);
    let out = fmodlen(&["run", input.to_str().unwrap(), "--budget-seconds", "0"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(dir.path().join("c.json.checkpoint.json").is_file());
}

#[test]
fn output_conflicts_with_text() {
    let out = fmodlen(&["run", "x.json", "--text", "--output", "y.json"]);
    assert_eq!(out.status.code(), Some(2));
}
