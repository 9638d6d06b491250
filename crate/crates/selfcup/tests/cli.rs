use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

const EXAMPLE_POLY: &str = "6,1,0,0,0,0,1";

fn selfcup(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_selfcup")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let out = selfcup(&all);
    let code = out.status.code().expect("exit code");
    let value = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{args:?}: {e}; stderr {}", String::from_utf8_lossy(&out.stderr)));
    (code, value)
}

#[test]
fn verify_core_default_grid_passes() {
    let (code, v) = json(&["verify-core"]);
    assert_eq!(code, 0);
    assert_eq!(v["passed"], true);
    assert!(v["cells"].as_array().unwrap().len() > 40);
    assert_eq!(v["criteria"].as_array().unwrap().len(), 4);
    for cell in v["cells"].as_array().unwrap() {
        assert!(!cell["classes"].as_array().unwrap().is_empty(), "{cell}");
    }
}

#[test]
fn verify_core_restricted_to_z2() {
    let (code, v) = json(&["verify-core", "--group", "Z/2", "--module", "trivial F2"]);
    assert_eq!(code, 0);
    assert_eq!(v["classes_checked"], 2);
    let classes = v["cells"][0]["classes"].as_array().unwrap();
    assert_eq!(classes[0]["coords"], serde_json::json!([0]));
    assert_eq!(classes[1]["coords"], serde_json::json!([1]));
}

#[test]
fn corrupted_cup_fails_with_witness() {
    let (code, v) = json(&["verify-core", "--corrupt-cup", "--criteria", "1"]);
    assert_eq!(code, 1);
    assert_eq!(v["passed"], false);
    assert_eq!(v["first_failure"]["kind"], "class");
    assert!(v["first_failure"]["coords"].is_array());
}

#[test]
fn verify_core_rejects_bad_filters() {
    assert_eq!(selfcup(&["verify-core", "--group", "A5"]).status.code(), Some(2));
    assert_eq!(selfcup(&["verify-core", "--criteria", "11"]).status.code(), Some(2));
}

#[test]
fn theta_check_on_the_curve() {
    let (code, v) = json(&["theta-check", "--poly", EXAMPLE_POLY]);
    assert_eq!(code, 0);
    assert_eq!(v["genus"], 2);
    assert_eq!(v["group_order"], 720);
    assert_eq!(v["c_T_trivial"], false);
    assert_eq!(v["fixed_points"], serde_json::json!([]));
    assert_eq!(v["sha_style"], true);
    assert_eq!(v["identity_checked"], true);
    let table = v["cyclic_table"].as_array().unwrap();
    assert_eq!(table.len(), 11);
    assert!(table.iter().all(|r| r["trivial"] == true && r["generator_cycles"].is_string()));
    assert_eq!(v["scan"]["discriminant"], "-362793931");
}

#[test]
fn theta_check_on_generators() {
    let (code, v) = json(&["theta-check", "--generators", "(1 2)(5 6), (3 4)(5 6)", "--genus", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["c_T_trivial"], false);

    let (code, v) = json(&["theta-check", "--generators", "(1 2)", "--genus", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["c_T_trivial"], true);
    assert!(v["fixed_points"].as_array().unwrap().contains(&serde_json::json!([3])));
}

#[test]
fn theta_check_input_errors() {
    // both or neither source
    assert_eq!(selfcup(&["theta-check"]).status.code(), Some(2));
    let both = selfcup(&["theta-check", "--poly", EXAMPLE_POLY, "--generators", "(1 2)"]);
    assert_eq!(both.status.code(), Some(2));
    // reducible: S6 cannot be certified
    let out = selfcup(&["theta-check", "--poly", "1,1,1,1,1,0,1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("group undetermined"));
    assert_eq!(selfcup(&["theta-check", "--poly", "1,0,0,0,0,1"]).status.code(), Some(2));
    assert_eq!(selfcup(&["theta-check", "--generators", "(1 2"]).status.code(), Some(2));
}

#[test]
fn frobenius_scan_reports() {
    let out = selfcup(&["frobenius-scan", "--poly", EXAMPLE_POLY]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("-362793931"));

    let (_, v) = json(&["frobenius-scan", "--poly", "1,0,1", "--prime-bound", "50"]);
    assert_eq!(v["ramified"], serde_json::json!([2]));
    let (_, v) = json(&["frobenius-scan", "--poly", "1,0,1", "--prime-bound", "1"]);
    assert_eq!(v["table"], serde_json::json!([]));
}

#[test]
fn reports_are_byte_stable() {
    let a = selfcup(&["verify-core", "--json"]);
    let b = Command::new(env!("CARGO_BIN_EXE_selfcup"))
        .args(["verify-core", "--json"])
        .env("SELFCUP_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);
    let seeded = selfcup(&["verify-core", "--json", "--seed", "7"]);
    let again = selfcup(&["verify-core", "--json", "--seed", "0x7"]);
    assert_eq!(seeded.stdout, again.stdout);
}

#[test]
fn module_info_reads_descriptions() {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let good = dir.join("s3_standard.json");
    std::fs::write(
        &good,
        r#"{"generators": "(1 2 3), (1 2)", "modulus": 2, "dim": 2, "matrices": [[0,1,1,1],[0,1,1,0]]}"#,
    )
    .unwrap();
    let (code, v) = json(&["module-info", good.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["group_order"], 6);
    assert_eq!(v["selfcup_passed"], true);

    let z2 = dir.join("z2_trivial.json");
    std::fs::write(&z2, r#"{"generators": "(1 2)", "modulus": 2, "dim": 1, "matrices": [[1]]}"#).unwrap();
    let (_, v) = json(&["module-info", z2.to_str().unwrap()]);
    assert_eq!(v["log_h1"], 1);
    assert_eq!(v["log_h2"], 1);

    // x -> -x would need order 2 on an order-3 generator
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"generators": "(1 2 3)", "modulus": 3, "dim": 1, "matrices": [[-1]]}"#).unwrap();
    assert_eq!(selfcup(&["module-info", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(selfcup(&["module-info", "/nonexistent/module.json"]).status.code(), Some(2));
}
