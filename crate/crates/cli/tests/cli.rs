use std::process::{Command, Output};

use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_discharge")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn check_rules_summary() {
    let o = run(&["check-rules"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "103 rules (39 T / 28 P / 36 H), overlap audit: clean\n");
    let o = run(&["check-rules", "--semantics", "strict4", "--no-reflection", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["rules"], 103);
    assert_eq!(v["conflicts"].as_array().unwrap().len(), 0);
}

#[test]
fn verify_commands_exit_codes() {
    assert_eq!(run(&["verify-triangles"]).status.code(), Some(0));
    assert_eq!(run(&["verify-vertices", "--dmax", "10"]).status.code(), Some(0));
    let dir = TempDir::new().unwrap();
    let empty = dir.path().join("empty.txt");
    std::fs::write(&empty, "").unwrap();
    let o = run(&["verify-triangles", "--configs", empty.to_str().unwrap(), "--max-violations", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["violations"].as_array().unwrap().len(), 2);
    assert!(v["violation_count"].as_u64().unwrap() > 2);
    let o = run(&["verify-faces", "--size", "5", "--configs", empty.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("NOT VERIFIED"));
}

#[test]
fn hexagon_check_without_configurations_fails() {
    let dir = TempDir::new().unwrap();
    let empty = dir.path().join("empty.txt");
    std::fs::write(&empty, "# nothing\n").unwrap();
    let o = run(&["verify-faces", "--size", "6", "--configs", empty.to_str().unwrap(), "--format", "json", "--max-violations", "1"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["parameters"]["size"], 6);
    assert_eq!(v["checked_count"], 13_294_788u64);
}

#[test]
fn match_and_explain() {
    let o = run(&["match", "H:o3o", "H:oOoH6H6H6H6H"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("match"));
    let o = run(&["match", "H:o3o", "H:4H6H6H6H6H6H"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "no match\n");
    let o = run(&["explain", "H:oOoH6H6H6H6H"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("matched configurations: H:o3o"));
    let o = run(&["explain", "H:4t6x4H4H4H4H", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["slots"].as_array().unwrap().iter().any(|s| s["rule"] == "H:*T6T*" && s["amount"] == -40));
}

#[test]
fn usage_and_data_errors() {
    assert_eq!(run(&["verify-faces", "--size", "7"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["check-rules", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["check-rules", "--rules", "/nonexistent/rules.txt"]).status.code(), Some(2));
    assert_eq!(run(&["explain", "H:4Q"]).status.code(), Some(2));
    assert_eq!(run(&["match", "X:4", "H:4Q4Q4Q4Q4Q4Q"]).status.code(), Some(2));
    let o = run(&["verify-faces", "--size", "5", "--complete"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("193"));
}

#[test]
fn dumps_round_trip() {
    let dir = TempDir::new().unwrap();
    let rules = dir.path().join("rules.txt");
    std::fs::write(&rules, run(&["dump-rules"]).stdout).unwrap();
    let o = run(&["check-rules", "--rules", rules.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let a = run(&["verify-vertices", "--format", "json"]).stdout;
    let b = run(&["verify-vertices", "--format", "json", "--rules", rules.to_str().unwrap()]).stdout;
    assert_eq!(a, b);

    let cfg = dir.path().join("configs.txt");
    let text = run(&["dump-configs"]).stdout;
    std::fs::write(&cfg, &text).unwrap();
    assert_eq!(run(&["dump-configs", "--configs", cfg.to_str().unwrap()]).stdout, text);
    let v: serde_json::Value = serde_json::from_slice(&run(&["dump-configs", "--format", "json"]).stdout).unwrap();
    assert_eq!(v["pre_closure"], 10);
}

#[test]
fn semantics_diff_runs() {
    let o = run(&["diff-semantics", "--size", "5", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["checked_count"], 111_960);
}
