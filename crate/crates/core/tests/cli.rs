use std::process::{Command, Output};

use serde_json::Value;

fn nbasis(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nbasis"))
        .args(args)
        .env_remove("NB_SEED")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (Option<i32>, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = nbasis(&full);
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code(), v)
}

fn identity(n: usize) -> Value {
    Value::Array(
        (0..n)
            .map(|i| Value::Array((0..n).map(|j| Value::from(u64::from(i == j))).collect()))
            .collect(),
    )
}

#[test]
fn demo_split_gram_is_identity() {
    let (code, v) = json(&["demo-split", "--prime", "5", "--group", "3"]);
    assert_eq!(code, Some(0));
    assert_eq!(v["certificate"]["gram"], identity(3));
    assert_eq!(v["self_dual"], true);
    assert_eq!(v["generator"], serde_json::json!([1, 0, 0]));
}

#[test]
fn demo_split_trivial_group() {
    let (code, v) = json(&["demo-split", "--prime", "2", "--group", "1"]);
    assert_eq!(code, Some(0));
    assert_eq!(v["generator"], serde_json::json!([1]));
}

#[test]
fn usage_errors_exit_2() {
    let out = nbasis(&["demo-split", "--prime", "4", "--group", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not prime"));
    assert_eq!(nbasis(&["ff-basis", "--p", "2", "--n", "3", "--frobnicate"]).status.code(), Some(2));
    assert_eq!(nbasis(&["diagnose", "--element", "{not json"]).status.code(), Some(2));
    assert_eq!(nbasis(&["ff-basis", "--p", "2", "--f", "1,0,1"]).status.code(), Some(2));
    assert_eq!(
        nbasis(&["descend", "--p", "2", "--n", "6", "--subgroup-order", "4"]).status.code(),
        Some(2)
    );
}

#[test]
fn self_dual_in_gf8() {
    let (code, v) = json(&["ff-basis", "--p", "2", "--n", "3", "--self-dual"]);
    assert_eq!(code, Some(0));
    assert_eq!(v["self_dual"]["certificate"]["gram"], identity(3));
    assert_eq!(v["self_dual"]["gram_is_identity"], true);
}

#[test]
fn even_degree_self_dual_exits_3() {
    let out = nbasis(&["ff-basis", "--p", "2", "--n", "2", "--self-dual"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("EvenExponent"));
    assert_eq!(nbasis(&["self-dual", "--p", "3", "--n", "4"]).status.code(), Some(3));
}

#[test]
fn exhaustive_count_in_gf27() {
    let (code, v) = json(&["ff-basis", "--p", "3", "--n", "3", "--exhaustive"]);
    assert_eq!(code, Some(0));
    assert_eq!(v["generator_count"], 18);
    assert_eq!(v["extension"]["modulus"], serde_json::json!([1, 2, 0, 1]));
}

#[test]
fn self_dual_from_given_generator() {
    let (code, v) = json(&["self-dual", "--p", "2", "--f", "1,1,0,1", "--generator", "[1,1,0]"]);
    assert_eq!(code, Some(0));
    assert_eq!(v["self_dual"]["gram_is_identity"], true);
    let out = nbasis(&["self-dual", "--p", "2", "--f", "1,1,0,1", "--generator", "[1,0,0]"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn descend_to_gf8() {
    let (code, v) = json(&["descend", "--p", "2", "--n", "6", "--subgroup-order", "2"]);
    assert_eq!(code, Some(0));
    assert_eq!(v["fixed_extension"]["backend"], "fixed_subring");
    assert_eq!(v["certificate"]["gram"].as_array().unwrap().len(), 3);
}

#[test]
fn verify_suites() {
    for (suite, size) in [("thm1", "256"), ("thm2", "243"), ("cor1", "64")] {
        let (code, v) = json(&["verify", "--suite", suite, "--max-size", size]);
        assert_eq!(code, Some(0), "{suite}");
        assert_eq!(v["passed"], true);
        assert!(!v["instances"].as_array().unwrap().is_empty());
    }
    let (_, v) = json(&["verify", "--suite", "thm2", "--max-size", "243"]);
    let names: Vec<&str> = v["instances"].as_array().unwrap().iter().filter_map(Value::as_str).collect();
    assert!(names.iter().any(|n| n.contains("GF(3^5)")));
    let (_, v) = json(&["verify", "--suite", "cor1", "--max-size", "64"]);
    assert!(v["instances"].as_array().unwrap().iter().any(|n| n.as_str().unwrap().contains("GF(2^6)")));
}

#[test]
fn seed_flag_and_env_agree() {
    let flag = nbasis(&["--json", "--seed", "9", "ff-basis", "--p", "3", "--n", "5"]);
    let env = Command::new(env!("CARGO_BIN_EXE_nbasis"))
        .args(["--json", "ff-basis", "--p", "3", "--n", "5"])
        .env("NB_SEED", "9")
        .output()
        .unwrap();
    assert_eq!(flag.stdout, env.stdout);
}

#[test]
fn timings_only_on_request() {
    let (_, v) = json(&["demo-split", "--prime", "3", "--group", "3"]);
    assert!(v.get("timings").is_none());
    let (_, v) = json(&["--timings", "demo-split", "--prime", "3", "--group", "3"]);
    assert!(v["timings"]["total_ms"].is_number());
}

#[test]
fn diagnose_reports() {
    let (code, v) = json(&[
        "diagnose",
        "--element",
        r#"{"group":[3],"ring":{"kind":"integers"},"coeffs":[1,0,0]}"#,
    ]);
    assert_eq!(code, Some(0));
    assert_eq!(v["regular_trace"], 3);
    assert_eq!(v["x_xstar_is_one"], true);
    assert_eq!(v["torsion_order"], 1);

    let (_, v) = json(&[
        "diagnose",
        "--element",
        r#"{"group":[3],"ring":{"kind":"integers"},"coeffs":[-1,0,0]}"#,
    ]);
    assert_eq!(v["torsion_order"], 2);

    let (_, v) = json(&[
        "diagnose",
        "--element",
        r#"{"group":[3],"ring":{"kind":"cyclotomic_integers","m":3},"coeffs":[[0,1],[0,0],[0,0]]}"#,
    ]);
    assert_eq!(v["torsion_order"], 3);

    let (_, v) = json(&[
        "diagnose",
        "--element",
        r#"{"group":[2],"ring":{"kind":"integers"},"coeffs":[1,1]}"#,
        "--bound",
        "100",
    ]);
    assert_eq!(v["torsion_order"], Value::Null);
    assert_eq!(v["is_unit"], false);
}

#[test]
fn certificates_round_trip_through_diagnose() {
    let (_, v) = json(&["ff-basis", "--p", "2", "--n", "3"]);
    let unit = v["certificate"]["U"].to_string();
    let (code, d) = json(&["diagnose", "--element", &unit]);
    assert_eq!(code, Some(0));
    assert_eq!(d["is_unit"], true);
    assert_eq!(d["element"], v["certificate"]["U"]);
}
