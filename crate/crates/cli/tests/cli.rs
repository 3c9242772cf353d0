use std::process::{Command, Output};

use serde_json::Value;

fn verify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_verify"))
        .args(args)
        .env_remove("A1TOWER_BUDGET")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

#[test]
fn default_run_writes_json_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = verify(&["--out", path.to_str().unwrap()]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["summary"]["pass"], 14);
    assert_eq!(v["config"]["lambdas"], serde_json::json!(["1", "2", "3"]));
    // one status line per check on stderr
    assert_eq!(String::from_utf8_lossy(&out.stderr).lines().count(), 14);
}

#[test]
fn markdown_report() {
    let out = verify(&["--report", "md", "--check", "C1,C2"]);
    assert_eq!(out.status.code(), Some(0));
    let md = String::from_utf8(out.stdout).unwrap();
    assert!(md.starts_with("# A1 tower verification"));
    assert!(md.contains("| C1 |") && md.contains("| C2 |") && !md.contains("| C3 |"));
}

#[test]
fn check_subset_and_negative_lambdas() {
    let out = verify(&["--lambdas", "-1,2,1/2", "--check", "C8,C11", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let ids: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["id"].as_str().unwrap())
        .collect();
    assert_eq!(ids, ["C8", "C11"]);
    assert_eq!(v["config"]["n"], 2);
}

#[test]
fn fault_fails_with_witness() {
    let out = verify(&["--break", "retain-lambda1"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    let failed: Vec<&Value> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["status"] == "fail")
        .collect();
    assert_eq!(failed.len(), 1);
    assert_eq!(failed[0]["id"], "C8");
    assert!(!failed[0]["witness"].as_str().unwrap().is_empty());
}

#[test]
fn bad_input_exits_two() {
    for args in [
        &["--lambdas", "1,2"][..],
        &["--lambdas", "1,two,3"],
        &["--lambdas", "1,1,3"],
        &["--lambdas", "0,1,3"],
        &["--break", "no-such-fault"],
        &["--n", "0"],
        &["--check", "C99"],
    ] {
        let out = verify(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(
            String::from_utf8_lossy(&out.stderr).starts_with("error:"),
            "{args:?}"
        );
    }
}

#[test]
fn budget_exhaustion_is_reported() {
    let tiny = verify(&["--budget", "1", "--check", "C13"]);
    assert_eq!(tiny.status.code(), Some(1));
    assert_eq!(json(&tiny)["checks"][0]["status"], "budget");

    let from_env = Command::new(env!("CARGO_BIN_EXE_verify"))
        .args(["--check", "C13"])
        .env("A1TOWER_BUDGET", "1")
        .output()
        .unwrap();
    assert_eq!(from_env.status.code(), Some(1));
    let v = json(&from_env);
    assert_eq!(v["config"]["budget"], 1);
    assert_eq!(v["checks"][0]["status"], "budget");
}
