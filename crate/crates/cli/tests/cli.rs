//! End-to-end tests driving the compiled `thetaforge` binary.

use std::process::{Command, Output};

const G13: &str = "2,0,1,1;0,4,0,1;1,0,2,0;1,1,0,2";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thetaforge"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf8 output")
}

#[test]
fn lvalue_and_bernoulli_print_fractions() {
    assert_eq!(stdout(&["lvalue", "--disc", "13", "--k", "2"]).trim(), "-2/1");
    assert_eq!(stdout(&["lvalue", "--disc", "-3", "--k", "3"]).trim(), "-2/9");
    assert_eq!(
        stdout(&["bernoulli", "--disc", "-4", "--k", "1"]).trim(),
        "-1/2"
    );
}

#[test]
fn theta_json_round_trips_byte_identical() {
    let text = stdout(&["theta", "--gram", "2,0;0,2", "--bound", "5", "--json"]);
    let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(parsed.to_string(), text.trim());
    assert_eq!(parsed["counts"], serde_json::json!([1, 4, 4, 0, 4, 8]));
}

#[test]
fn theta_oracle_agrees() {
    let fast = stdout(&["theta", "--gram", G13, "--bound", "10", "--json"]);
    let slow = stdout(&["theta", "--gram", G13, "--bound", "10", "--oracle", "--json"]);
    assert_eq!(fast, slow);
}

#[test]
fn theta_csv_rows() {
    let text = stdout(&["theta", "--gram", G13, "--bound", "2", "--csv"]);
    assert_eq!(text, "n,count\n0,1\n1,12\n2,14\n");
}

#[test]
fn rq_shell_count() {
    assert_eq!(stdout(&["rq", "--gram", G13, "--n", "4"]).trim(), "36");
}

#[test]
fn eisenstein_json_round_trips() {
    let text = stdout(&[
        "eisenstein", "--k", "2", "--level", "13", "--kind", "h", "--bound", "4", "--json",
    ]);
    let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(parsed.to_string(), text.trim());
    assert_eq!(parsed["coeffs"][0], serde_json::json!(["0", "1"]));
    assert_eq!(parsed["coeffs"][1], serde_json::json!(["1", "1"]));
}

#[test]
fn eisenstein_explicit_characters() {
    // same series through the general entry point
    let via_kind = stdout(&[
        "eisenstein", "--k", "2", "--level", "13", "--kind", "g", "--bound", "6", "--json",
    ]);
    let via_chars = stdout(&[
        "eisenstein", "--k", "2", "--chi", "trivial", "--psi", "disc:13", "--bound", "6", "--json",
    ]);
    assert_eq!(via_kind, via_chars);
}

#[test]
fn hecke_image_coefficients() {
    let text = stdout(&["hecke", "--gram", G13, "--m", "2", "--bound", "4", "--json"]);
    let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
    // T_2 theta: a(0) = chi(2) * r_Q(0) = -1, a(1) = r_Q(2) = 14
    assert_eq!(parsed["coeffs"][0], serde_json::json!(["-1", "1"]));
    assert_eq!(parsed["coeffs"][1], serde_json::json!(["14", "1"]));
}

#[test]
fn decompose_catalog_coefficients() {
    let text = stdout(&["decompose", "--gram", G13]);
    assert_eq!(text, "c1 = -1/1\nc2 = 13/1\n");
}

#[test]
fn dim_and_classify() {
    assert_eq!(stdout(&["dim", "--k", "2", "--n", "13"]).trim(), "2");
    assert_eq!(stdout(&["dim", "--k", "3", "--n", "3"]).trim(), "2");
    assert_eq!(stdout(&["dim", "--k", "3", "--n", "7"]).trim(), "3");
    assert_eq!(
        stdout(&["classify"]).trim(),
        "[[2,5],[2,13],[2,17],[3,3],[4,5],[5,3]]"
    );
}

#[test]
fn table_passes_golden_check() {
    let out = run(&["table"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("(k=2, N=13)"));
    assert!(text.contains("theta=[1,8,24]"));
    // machine formats stay parseable
    let json = stdout(&["table", "--json"]);
    let rows: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 6);
    assert!(rows[1]["mismatches"].as_array().unwrap().is_empty());
    let csv = stdout(&["table", "--csv"]);
    assert_eq!(csv.lines().count(), 7);
}

#[test]
fn verify_modes() {
    let out = run(&[
        "verify", "--gram", G13, "--mode", "conditional", "--pmax", "20",
    ]);
    assert!(out.status.success());

    let out = run(&[
        "verify", "--gram", G13, "--mode", "main", "--pmax", "3", "--nmax", "20", "--json",
    ]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(report["pass"], serde_json::json!(true));
    assert_eq!(report["results"][0]["p"], serde_json::json!(2));
    assert!(report["results"][0]["failures"].as_array().unwrap().is_empty());

    let out = run(&["verify", "--gram", G13, "--mode", "formula", "--nmax", "30"]);
    assert!(out.status.success());

    let out = run(&["verify", "--gram", G13, "--mode", "square", "--nmax", "6"]);
    assert!(out.status.success());
}

#[test]
fn verify_conjecture_empty_and_small() {
    // pmax = 1: no primes at all, empty report, success
    let out = run(&["verify", "--mode", "conjecture", "--pmax", "1"]);
    assert!(out.status.success());
    let out = run(&[
        "verify", "--mode", "conjecture", "--pmax", "7", "--nmax", "10", "--json",
    ]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(report["pass"], serde_json::json!(true));
    // conditional rows for 2,3,5,7 plus main rows for 2,3,5,7
    assert_eq!(report["results"].as_array().unwrap().len(), 8);
}

#[test]
fn workers_do_not_change_output() {
    let one = stdout(&["--workers", "1", "theta", "--gram", G13, "--bound", "15", "--json"]);
    let four = stdout(&["--workers", "4", "theta", "--gram", G13, "--bound", "15", "--json"]);
    assert_eq!(one, four);
    let env_out = Command::new(env!("CARGO_BIN_EXE_thetaforge"))
        .env("THETA_FORGE_WORKERS", "2")
        .args(["theta", "--gram", G13, "--bound", "15", "--json"])
        .output()
        .unwrap();
    assert!(env_out.status.success());
    assert_eq!(String::from_utf8(env_out.stdout).unwrap(), one);
}

#[test]
fn usage_errors_exit_2() {
    // unknown flag
    assert_eq!(run(&["theta", "--nope"]).status.code(), Some(2));
    // missing required flag
    assert_eq!(run(&["theta", "--bound", "5"]).status.code(), Some(2));
    // invalid inline matrix (odd diagonal)
    assert_eq!(
        run(&["theta", "--gram", "1,0;0,2", "--bound", "5"]).status.code(),
        Some(2)
    );
    // non-fundamental discriminant
    assert_eq!(run(&["lvalue", "--disc", "45", "--k", "2"]).status.code(), Some(2));
    // oracle guard on an infeasible box
    assert_eq!(
        run(&["theta", "--gram", G13, "--bound", "100000", "--oracle"]).status.code(),
        Some(2)
    );
    // verify without a gram in a mode that needs one
    assert_eq!(
        run(&["verify", "--mode", "main", "--pmax", "3"]).status.code(),
        Some(2)
    );
    // zero workers
    assert_eq!(
        run(&["--workers", "0", "classify"]).status.code(),
        Some(2)
    );
}

#[test]
fn gram_file_input() {
    let dir = std::env::temp_dir().join("thetaforge-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("g13.json");
    std::fs::write(
        &path,
        r#"{"dim": 4, "entries": [[2,0,1,1],[0,4,0,1],[1,0,2,0],[1,1,0,2]]}"#,
    )
    .unwrap();
    let arg = path.to_str().unwrap();
    assert_eq!(stdout(&["rq", "--gram", arg, "--n", "1"]).trim(), "12");
    // --json to a file
    let out_path = dir.join("table.json");
    let out_arg = out_path.to_str().unwrap();
    assert!(run(&["theta", "--gram", arg, "--bound", "3", "--json", out_arg])
        .status
        .success());
    let written: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(written["counts"], serde_json::json!([1, 12, 14, 48]));
}
