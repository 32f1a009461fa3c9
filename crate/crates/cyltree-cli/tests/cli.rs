//! End-to-end runs of the binary against the shared fixture corpus.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_cyltree")
}

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn fixture(name: &str) -> String {
    fixtures().join(name).to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn tmp(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("cyltree-cli-{}-{name}", std::process::id()))
}

#[test]
fn toc_reports_three_nodes_and_two_edges() {
    let out = run(&["toc", &fixture("E1.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["nodes"], 3);
    assert_eq!(v["edges"], 2);
}

#[test]
fn analyze_idempotence_exits_zero() {
    let out = run(&["analyze", "--check", "idempotence", &fixture("E1.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["checks"]["idempotence"]["status"], "pass");
}

#[test]
fn refused_preconditions_exit_two_with_an_error_object() {
    let out = run(&["analyze", "--check", "segment5", &fixture("E2.json")]);
    assert_eq!(out.status.code(), Some(2));
    let v = stdout_json(&out);
    assert_eq!(v["error"]["kind"], "PreconditionNotDeclared");
}

#[test]
fn missing_and_malformed_inputs_exit_two() {
    let out = run(&["validate", "no-such-file.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["error"]["kind"], "IoError");

    let bad = tmp("garbage.json");
    fs::write(&bad, "not an instance").unwrap();
    let out = run(&["validate", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["error"]["kind"], "ParseError");
}

#[test]
fn violations_exit_one() {
    let out = run(&["analyze", "--check", "acylindricity", &fixture("E4.json")]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["checks"]["acylindricity"]["status"], "fail");
}

#[test]
fn gen_is_byte_identical_per_seed() {
    let a = run(&["gen", "--seed", "7", "--backend", "w", "--pairs"]);
    let b = run(&["gen", "--seed", "7", "--backend", "w", "--pairs"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());

    let c = run(&["gen", "--seed", "1", "--backend", "p"]);
    let d = run(&["gen", "--seed", "1", "--backend", "p"]);
    assert_eq!(c.stdout, d.stdout);
}

#[test]
fn generated_pairs_both_validate() {
    let out = run(&["gen", "--seed", "7", "--backend", "w", "--pairs"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert!(v["moves"].as_array().is_some_and(|m| !m.is_empty()));

    for side in ["base", "result"] {
        let path = tmp(&format!("pair-{side}.json"));
        fs::write(&path, serde_json::to_string(&v[side]).unwrap()).unwrap();
        let chk = run(&["validate", path.to_str().unwrap()]);
        assert_eq!(chk.status.code(), Some(0), "{side} failed validation");
    }
}

#[test]
fn bare_names_resolve_through_the_fixtures_env() {
    let out = Command::new(bin())
        .args(["toc", "E1.json"])
        .env("CYLTREE_FIXTURES", fixtures())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn the_identity_map_is_a_collapse_and_refines_trivially() {
    let map = tmp("idmap.json");
    fs::write(&map, r#"{"vertex_map": {"1": 1, "2": 2, "3": 3}}"#).unwrap();
    let e1 = fixture("E1.json");

    let out = run(&["map", &e1, &e1, map.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["collapse_map"], true);
    assert_eq!(v["dominates"], true);

    let out = run(&["refine", &e1, &e1, map.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["recovered_dual"], true);
    assert_eq!(v["recovered_target"], true);
}

#[test]
fn out_writes_the_same_bytes_as_stdout() {
    let target = tmp("toc-out.json");
    let direct = run(&["toc", &fixture("E1.json")]);
    let filed = run(&["toc", &fixture("E1.json"), "--out", target.to_str().unwrap()]);
    assert_eq!(filed.status.code(), Some(0));
    assert!(filed.stdout.is_empty());
    assert_eq!(fs::read(&target).unwrap(), direct.stdout);
}

#[test]
fn dot_renders_labels_and_tooltips() {
    let dual = tmp("e1.dot");
    run(&["toc", &fixture("E1.json"), "--dot", dual.to_str().unwrap()]);
    let text = fs::read_to_string(&dual).unwrap();
    assert!(text.starts_with("graph dual {"));
    assert!(text.contains("shape=box"));
    assert!(text.contains("tooltip=\"e1\""));

    let z = tmp("e1-z.dot");
    run(&["zgraph", &fixture("E1.json"), "--dot", z.to_str().unwrap()]);
    let text = fs::read_to_string(&z).unwrap();
    assert!(text.starts_with("graph zgraph {"));
    assert!(text.contains("penwidth=2"));
}
