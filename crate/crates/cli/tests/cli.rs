use std::fs;
use std::process::{Command, Output};

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lab")).args(args).output().expect("lab runs")
}

fn lab_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lab")).args(args).env(key, value).output().expect("lab runs")
}

fn stable(json: &str) -> String {
    let mut v: serde_json::Value = serde_json::from_str(json).unwrap();
    assert!(v.get("timestamp").is_some());
    v.as_object_mut().unwrap().remove("timestamp");
    v.to_string()
}

#[test]
fn presets_lists_the_named_examples() {
    let out = lab(&["presets"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["generic-diag-t2", "generic-diag-t3", "block3", "wierd-ex", "euler-t2", "euler-D1", "explicit-B-witness"] {
        assert!(text.contains(name), "{name}");
    }
}

#[test]
fn written_presets_run_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = lab(&["presets", "--write", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let file = dir.path().join("block3.json");
    let report = dir.path().join("report.json");
    let out = lab(&["run", file.to_str().unwrap(), "--out", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(report).unwrap()).unwrap();
    assert_eq!(v["schema"], "twistlab-report/1");
    assert_eq!(v["pass"], true);
}

#[test]
fn repeated_runs_are_identical_apart_from_the_timestamp() {
    let a = lab(&["run", "wierd-ex"]);
    let b = lab_env(&["run", "wierd-ex"], "LAB_THREADS", "1");
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(b.status.code(), Some(0));
    assert_eq!(stable(&String::from_utf8(a.stdout).unwrap()), stable(&String::from_utf8(b.stdout).unwrap()));
}

#[test]
fn tasks_run_in_canonical_order() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.json");
    let mut v: serde_json::Value = serde_json::from_slice(&lab(&["run", "block3"]).stdout).unwrap();
    let mut sc = v["scenario"].take();
    sc["tasks"].as_array_mut().unwrap().reverse();
    fs::write(&path, sc.to_string()).unwrap();
    let out = lab(&["run", path.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let names: Vec<&str> = v["tasks"].as_array().unwrap().iter().map(|t| t["task"].as_str().unwrap()).collect();
    assert_eq!(names, ["orbit", "position", "hilbert", "ring-equality", "modules", "opposite"]);
}

#[test]
fn a_failing_task_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    // the block3 orbit lies on a conic, so it is not in general position
    let text = r#"{
        "schema": "twistlab-scenario/1",
        "name": "block3-general",
        "field": { "characteristic": 0 },
        "t": 2,
        "phi": "[[1,1,0],[0,1,1],[0,0,1]]",
        "c": "(0:0:1)",
        "tasks": [{ "task": "position", "general_position": true }]
    }"#;
    fs::write(&path, text).unwrap();
    let out = lab(&["run", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("general position in degree 2"), "{err}");
}

#[test]
fn parse_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    fs::write(&path, "{ \"schema\": ").unwrap();
    assert_eq!(lab(&["run", path.to_str().unwrap()]).status.code(), Some(2));
    fs::write(&path, r#"{"schema":"twistlab-scenario/1","name":"x","field":{},"t":2,"phi":"[[1,0],[0,1]]","c":"(1:1:1)","tasks":[]}"#).unwrap();
    let out = lab(&["run", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("t = 2"));
    assert_eq!(lab(&["run", "no-such-preset"]).status.code(), Some(2));
    assert_eq!(lab(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn window_smaller_than_a_requested_degree_is_rejected() {
    let out = lab(&["run", "generic-diag-t2", "--window", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("beyond window"));
}

#[test]
fn bad_thread_count_is_a_usage_error() {
    assert_eq!(lab_env(&["presets"], "LAB_THREADS", "zero").status.code(), Some(2));
}

#[test]
fn explain_knows_every_task() {
    for t in ["orbit", "position", "hilbert", "ring-equality", "modules", "point-family", "collision", "witness", "euler", "opposite"] {
        let out = lab(&["explain", t]);
        assert!(out.status.success(), "{t}");
    }
    assert_eq!(lab(&["explain", "nothing"]).status.code(), Some(2));
}

#[test]
fn csv_rows_match_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("rows.csv");
    let out = lab(&["run", "euler-t2", "--csv", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(csv).unwrap();
    assert!(text.starts_with("task,report,degree,predicted,computed,pass"));
    // C(6+2,2) − 6 = 22 in both the Hilbert and the Euler table
    assert!(text.contains("hilbert,hilbert,6,22,22,true"));
    assert!(text.contains("euler,\"euler_dimension D(p1), D(p2)\",6,22,22,true"));
}
