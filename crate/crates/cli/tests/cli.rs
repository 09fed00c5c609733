use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn instance(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("instances").join(name)
}

fn fi_jordan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fi-jordan")).args(args).output().expect("binary runs")
}

fn report(args: &[&str]) -> Value {
    let out = fi_jordan(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn matrix_ring_spaces_agree() {
    let path = instance("m2_z2.toml");
    let r = report(&["compare", "--input", path.to_str().unwrap()]);
    assert_eq!(r["format_version"], 1);
    assert_eq!(r["command"], "compare");
    assert_eq!(r["results"]["verdict"], "Equal");
    assert_eq!(r["results"]["derivations"]["cardinality"], "8");
    assert_eq!(r["results"]["jordan_derivations"]["cardinality"], "8");
    assert!(r["results"]["witness"].is_null());
}

#[test]
fn antichain_verdict_is_conditional() {
    let path = instance("antichain2_z2.toml");
    let r = report(&["verdict", "--input", path.to_str().unwrap()]);
    assert_eq!(r["results"]["outcome"], "ConditionalOnCoefficientRing");
    assert_eq!(r["results"]["isolated_elements"], serde_json::json!(["x", "y"]));
}

#[test]
fn run_uses_task_command() {
    let path = instance("chain3_z2.toml");
    let r = report(&["run", "--input", path.to_str().unwrap()]);
    assert_eq!(r["command"], "cross-check");
    assert_eq!(r["instance"]["target_rank"], 6);
    assert_eq!(r["results"]["fi_rank"], 6);
    assert_eq!(r["results"]["verdict"]["outcome"], "AllJordanAreDerivations");
    assert_eq!(r["results"]["consistent"], true);
}

#[test]
fn dprime_reconstructs_every_generator() {
    let path = instance("chain2_z2.toml");
    let r = report(&["dprime-check", "--input", path.to_str().unwrap()]);
    assert_eq!(r["results"]["all_dprime_equal_d"], true);
    assert_eq!(r["options"]["seed"], 7);
}

#[test]
fn identities_pass_on_matrix_class() {
    let path = instance("cycle_dual_z3.toml");
    let r = report(&["identities", "--input", path.to_str().unwrap(), "--trials", "20"]);
    assert_eq!(r["results"]["all_passed"], true);
    assert_eq!(r["options"]["trials"], 20);
}

#[test]
fn reports_are_byte_identical() {
    let path = instance("cycle_dual_z3.toml");
    let args = ["identities", "--input", path.to_str().unwrap(), "--seed", "11", "--trials", "30"];
    let (a, b) = (fi_jordan(&args), fi_jordan(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn out_flag_writes_file() {
    let path = instance("m2_z2.toml");
    let out = std::env::temp_dir().join(format!("fi-jordan-out-{}.json", std::process::id()));
    let status = fi_jordan(&["solve-der", "--input", path.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(status.status.success());
    assert!(status.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    std::fs::remove_file(&out).unwrap();
    assert_eq!(r["results"]["generators_pass_direct_check"], true);
}

#[test]
fn exit_codes() {
    let bad = instance("nonassociative.toml");
    let out = fi_jordan(&["compare", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("(0, 0, 0)"));

    let chain = instance("chain3_z2.toml");
    let out = fi_jordan(&["compare", "--input", chain.to_str().unwrap(), "--budget", "5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--budget 6"));

    let out = fi_jordan(&["compare", "--input", "/nonexistent/instance.toml"]);
    assert_eq!(out.status.code(), Some(1));

    let search = instance("search_small.toml");
    let out = fi_jordan(&["verdict", "--input", search.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn search_without_input_uses_defaults() {
    let r = report(&["search"]);
    let res = &r["results"];
    assert_eq!(res["tables_examined"], 72362);
    assert_eq!(res["unital_hits"], 0);
    for hit in res["hits"].as_array().unwrap() {
        assert!(hit["unit"].is_null());
    }
}
