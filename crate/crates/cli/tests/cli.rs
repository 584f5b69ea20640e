use std::process::{Command, Output};

use serde_json::Value;

fn tcale(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tcale")).args(args).output().expect("spawn tcale")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn lemma1_reports_unit_fidelity() {
    let out = tcale(&["lemma1", "--n", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["params"]["n"], 5);
    assert!(doc["fidelity_to_wtilde"].as_f64().unwrap() >= 1.0 - 1e-10);
}

#[test]
fn elect_has_no_failures() {
    let out = tcale(&["elect", "--n", "4", "--trials", "10000", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["failures"], 0);
    assert_eq!(doc["params"]["seed"], 7);
    assert_eq!(doc["leader_counts"].as_array().unwrap().len(), 4);
}

#[test]
fn bad_arguments_exit_2() {
    for args in [
        &["elect", "--n", "2"][..],
        &["elect", "--n", "4", "--alpha2", "1.5"],
        &["ilo-verify", "--n", "5"],
        &["lemma1", "--n", "13"],
        &["no-such-command"],
        &["elect"],
    ] {
        assert_eq!(tcale(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn ilo_verify_builtins() {
    for n in ["3", "4"] {
        let out = tcale(&["ilo-verify", "--n", n]);
        assert_eq!(out.status.code(), Some(0));
        assert!(json(&out)["fidelity"].as_f64().unwrap() >= 1.0 - 1e-9);
    }
}

#[test]
fn slocc_verdict_w_vs_wtilde() {
    let doc = json(&tcale(&["slocc-verdict", "--n", "6"]));
    assert_eq!(doc["config_a"], serde_json::json!([5, 1]));
    assert_eq!(doc["config_b"], serde_json::json!([1, 1, 1, 1, 1, 1]));
    assert_eq!(doc["inequivalent_proven"], true);
}

#[test]
fn state_file_feeds_degeneracy() {
    let path = std::env::temp_dir().join(format!("tcale-state-{}.json", std::process::id()));
    let path_str = path.to_str().unwrap();
    let out = tcale(&["state", "--n", "4", "--source", "w", "--out", path_str]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let doc = json(&tcale(&["degeneracy", "--n", "4", "--state-file", path_str]));
    std::fs::remove_file(&path).ok();
    assert_eq!(doc["config"], serde_json::json!([3, 1]));
    assert_eq!(doc["params"]["source"], "file");
}

#[test]
fn repeated_runs_are_byte_identical() {
    for args in [
        &["elect", "--n", "5", "--trials", "2000", "--seed", "3"][..],
        &["ilo-search", "--n", "3", "--restarts", "16", "--seed", "1"],
    ] {
        let a = tcale(args);
        let b = tcale(args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}
