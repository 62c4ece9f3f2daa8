//! End-to-end checks of the command-line surface: subcommand dispatch, exit
//! codes, and file round trips through the emitted formats.

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_patternlab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

#[test]
fn bound_subcommand() {
    let out = run(&["bound", "--q", "3", "--k", "1", "--n", "4", "--r", "3"]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_eq!(doc["schema"], "patternlab/v1");
    assert_eq!(doc["exact_bound"], "45");
    assert_eq!(doc["exact_count"], "15");
    let analytic = doc["analytic_bound"].as_f64().unwrap();
    assert!((analytic - 172.9).abs() < 0.5);
    assert_eq!(doc["exponential_saving"], true);
}

#[test]
fn bound_r4_reports_no_saving() {
    let out = run(&["bound", "--q", "3", "--k", "1", "--n", "2", "--r", "4"]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_eq!(doc["exponential_saving"], false);
    assert_eq!(doc["boundary"], true);
    assert!((doc["c_value"].as_f64().unwrap() - 3.0).abs() < 1e-6);
}

#[test]
fn validate_builtin_right_isosceles() {
    let out = run(&["validate", "--builtin", "right_isosceles", "--q", "7"]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_eq!(doc["full_rank"], true);
    assert_eq!(doc["generator_dets"], serde_json::json!([1, 1]));
    assert_eq!(doc["difference_dets"][0]["det"], 2);
}

#[test]
fn certify_inline_sets() {
    let out = run(&[
        "certify", "--pattern", "ap3", "--q", "3", "--n", "1", "--set", "{0,1}",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["avoiding"], true);

    let out = run(&[
        "certify", "--pattern", "ap3", "--q", "3", "--n", "1", "--set", "{0,1,2}",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let doc = stdout_json(&out);
    assert_eq!(doc["avoiding"], false);
    assert_eq!(doc["witness"], serde_json::json!([[0], [1], [2]]));
    assert_eq!(doc["d"], serde_json::json!([1]));
}

#[test]
fn search_and_certify_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let set_path = dir.path().join("set.json");
    let out = run(&[
        "search",
        "--builtin",
        "ap3",
        "--q",
        "3",
        "--n",
        "2",
        "--mode",
        "exact",
        "--out",
        set_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_eq!(doc["size"], 4);
    assert_eq!(doc["optimal"], true);
    assert_eq!(doc["certified"], true);

    // the emitted set file recertifies through the file path
    let set_doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&set_path).unwrap()).unwrap();
    let inner_set = serde_json::to_string(&set_doc["set"]).unwrap();
    let inner_path = dir.path().join("points.json");
    std::fs::write(&inner_path, inner_set).unwrap();
    let out = run(&[
        "certify",
        "--pattern",
        "ap3",
        "--q",
        "3",
        "--n",
        "2",
        "--set",
        inner_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["avoiding"], true);
}

#[test]
fn geometry_emit_then_validate_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("eq11.json");
    let out = run(&[
        "geometry",
        "emit",
        "--name",
        "equilateral",
        "--q",
        "11",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_eq!(doc["field"]["p"], 11);
    assert_eq!(doc["k"], 2);

    let out = run(&["validate", "--pattern", path.to_str().unwrap()]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_eq!(doc["full_rank"], true);
    assert_eq!(doc["generator_dets"], serde_json::json!([1, 1]));
}

#[test]
fn geometry_triangle_and_spread() {
    let out = run(&[
        "geometry",
        "triangle",
        "--q",
        "11",
        "--n",
        "1",
        "--points",
        "{(0,0),(1,0),(6,3)}",
    ]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_eq!(doc["equilateral"], true);
    assert_eq!(doc["sq_dists"], serde_json::json!([1, 1, 1]));

    let out = run(&[
        "geometry", "spread", "--q", "7", "--n", "1", "--k", "2", "--u", "(1,0)", "--v", "(5,5)",
    ]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_eq!(doc["spread"], 4);
    assert_eq!(doc["isotropic"], false);
}

#[test]
fn verify_tensor_subcommand() {
    let out = run(&[
        "verify-tensor", "--pattern", "ap3", "--q", "3", "--n", "1", "--set", "{0,1}",
    ]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_eq!(doc["diagonal"], true);
    assert_eq!(doc["evaluations"], 8);

    let out = run(&[
        "verify-tensor", "--pattern", "ap3", "--q", "3", "--n", "1", "--set", "{0,1,2}",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn count_subcommands() {
    let out = run(&[
        "count", "instances", "--pattern", "ap3", "--q", "3", "--n", "1", "--set", "{0,1,2}",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["count"], "6");

    let out = run(&["count", "monomials", "--q", "3", "--d", "4", "--r", "3"]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["count"], "15");

    let out = run(&["count", "slice-example"]);
    assert!(out.status.success());
}

#[test]
fn usage_errors_exit_2() {
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["bound", "--q", "4", "--k", "1", "--n", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["certify", "--pattern", "ap3", "--n", "1", "--set", "{0}"]);
    assert_eq!(out.status.code(), Some(2)); // missing field
    let out = run(&["validate", "--builtin", "equilateral", "--q", "5"]);
    assert_eq!(out.status.code(), Some(2)); // residue condition
}

#[test]
fn deterministic_reports_are_byte_identical() {
    let args = [
        "search", "--builtin", "ap3", "--q", "3", "--n", "2", "--mode", "greedy", "--seed", "42",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let args = ["bound", "--q", "7", "--k", "2", "--n", "3", "--r", "3"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn extension_field_pattern_file_roundtrip() {
    // GF(9) 3-AP through the file interface: coefficient-list entries
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ap9.json");
    let out = run(&[
        "geometry",
        "emit",
        "--name",
        "ap3",
        "--q",
        "9",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_eq!(doc["field"]["m"], 2);
    assert!(doc["field"]["modulus"].is_array());

    let out = run(&["validate", "--pattern", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["full_rank"], true);
}
