//! End-to-end runs of the `twocycle` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twocycle"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("twocycle-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn read_json(p: &PathBuf) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn write_json(p: &PathBuf, v: &Value) {
    std::fs::write(p, serde_json::to_string(v).unwrap()).unwrap();
}

#[test]
fn rank_of_k5() {
    let o = run(&["--output", "machine", "rank", "--graph", "catalog:k5"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["rank"], 1);
    assert_eq!(v["edges"], 10);
}

#[test]
fn success_certificate_round_trip_and_tamper() {
    let cert = scratch("success.json");
    let o = run(&[
        "decompose",
        "--graph",
        "catalog:k34",
        "--form",
        "basis:0",
        "--certificate",
        cert.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        code(&run(&["check-certificate", cert.to_str().unwrap()])),
        0
    );

    let mut v = read_json(&cert);
    assert_eq!(v["kind"], "decomposition");
    let c = v["terms"][0]["coeff"].as_i64().unwrap();
    v["terms"][0]["coeff"] = Value::from(c + 1);
    let bad = scratch("success-tampered.json");
    write_json(&bad, &v);
    assert_eq!(code(&run(&["check-certificate", bad.to_str().unwrap()])), 1);
}

#[test]
fn failure_certificate_round_trip_and_tamper() {
    let cert = scratch("failure.json");
    let o = run(&[
        "decompose",
        "--graph",
        "catalog:k34",
        "--form",
        "quad:0",
        "--families",
        "pairs,kuratowski",
        "--certificate",
        cert.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 1);
    assert_eq!(
        code(&run(&["check-certificate", cert.to_str().unwrap()])),
        0
    );

    let mut v = read_json(&cert);
    assert_eq!(v["kind"], "non_membership");
    assert_eq!(v["order"]["free_rank"], 1);
    v["order"]["free_rank"] = Value::from(0);
    let bad = scratch("failure-tampered.json");
    write_json(&bad, &v);
    assert_eq!(code(&run(&["check-certificate", bad.to_str().unwrap()])), 1);
}

#[test]
fn machine_output_is_stable() {
    for args in [
        &[
            "--output",
            "machine",
            "generators",
            "--graph",
            "catalog:petersen",
            "--mode",
            "sym",
        ][..],
        &[
            "--output",
            "machine",
            "crossing",
            "--graph",
            "catalog:k33",
            "--seed",
            "7",
            "--trials",
            "4",
        ][..],
        &[
            "--output",
            "machine",
            "catalog",
            "run-all",
            "--theorem",
            "main",
        ][..],
    ] {
        let a = run(args);
        let b = run(args);
        assert_eq!(code(&a), 0, "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn malformed_graph_is_an_input_error() {
    let p = scratch("bad.json");
    std::fs::write(&p, r#"{"vertices": 3, "edges": [[0, 1], [1"#).unwrap();
    assert_eq!(code(&run(&["rank", "--graph", p.to_str().unwrap()])), 2);
    std::fs::write(&p, r#"{"vertices": 2, "edges": [[0, 5]]}"#).unwrap();
    assert_eq!(code(&run(&["rank", "--graph", p.to_str().unwrap()])), 2);
    assert_eq!(code(&run(&["rank", "--graph", "catalog:nosuch"])), 2);
}

#[test]
fn hitting_a_cap_is_inconclusive() {
    let o = run(&[
        "--cap-cycles",
        "1",
        "verify",
        "--graph",
        "catalog:k5",
        "--theorem",
        "main",
    ]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stdout).contains("cap reached"));
}

#[test]
fn main_theorem_holds_on_the_catalog() {
    let o = run(&["verify", "--graph", "catalog:all", "--theorem", "main"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("overall: pass"));
}
