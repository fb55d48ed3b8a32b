use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn dqp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dqp")).args(args).output().expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    dqp(args).status.code().expect("exit code")
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("dqp-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

const ONE_ARROW: &str = r#"{"vertices":["1","2"],"arrows":[["a","1","2"]]}"#;
const Q1_CASE2: &str = r#"{"case":"2","delta":1,"lambda":1}"#;

#[test]
fn check_admissible_free1_passes() {
    let o = dqp(&["check", "--catalog", "free1", "--params", r#"{"mu":"1/2"}"#]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["passed"], Value::Bool(true));
}

#[test]
fn check_inadmissible_parameters_is_a_parameter_error() {
    let o = dqp(&["check", "--catalog", "free1", "--params", r#"{"mu":"1"}"#]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("4(μ²−λν) = 1"));
}

#[test]
fn broken_antisymmetry_is_a_mathematical_failure() {
    let bundle = r#"{
      "algebra": {"idempotents": ["1"], "generators": [{"name": "t", "tail": "1", "head": "1"}]},
      "bracket": {"pairs": [{"left": "t", "right": "t", "value": [{"coeff": "1", "w1": ["t"], "w2": ["e1"]}]}]}
    }"#;
    let p = scratch("broken.json", bundle);
    let o = dqp(&["check", "--bundle", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let doc = stdout_json(&o);
    let anti = doc["reports"].as_array().unwrap().iter().find(|r| r["name"] == "cyclic-antisymmetry").unwrap();
    assert_eq!(anti["passed"], Value::Bool(false));
}

#[test]
fn malformed_json_reports_its_location() {
    let p = scratch("malformed.json", "{\"algebra\": [}");
    let o = dqp(&["check", "--bundle", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));
}

#[test]
fn fuse_unknown_idempotent_is_structural() {
    assert_eq!(code(&["fuse", "--catalog", "q1", "--params", Q1_CASE2, "--step", "1:9"]), 2);
}

#[test]
fn fuse_with_checks_passes_and_merges_vertices() {
    let o = dqp(&["fuse", "--catalog", "q1", "--params", Q1_CASE2, "--step", "1:2", "--check"]);
    assert_eq!(o.status.code(), Some(0));
    let doc = stdout_json(&o);
    assert_eq!(doc["bundle"]["algebra"]["idempotents"], serde_json::json!(["1"]));
    assert_eq!(doc["passed"], Value::Bool(true));
}

#[test]
fn fuse_request_file() {
    let built = dqp(&["catalog", "build", "q1", "--params", Q1_CASE2]);
    let mut req = stdout_json(&built);
    req["steps"] = serde_json::json!([["2", "1"]]);
    let p = scratch("request.json", &req.to_string());
    let o = dqp(&["fuse", "--request", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout_json(&o)["algebra"]["idempotents"], serde_json::json!(["2"]));
}

#[test]
fn rep_moment_on_localized_arrow() {
    let args = ["rep", "--catalog", "vdb_quiver", "--params", ONE_ARROW, "--dim", "1:2,2:1", "--mode", "moment", "--trials", "5", "--seed", "42"];
    assert_eq!(code(&args), 0);
    let mut alias = args;
    alias[0] = "rep-check";
    assert_eq!(code(&alias), 0);
}

#[test]
fn rep_qp_on_free_algebra() {
    assert_eq!(code(&["rep", "--catalog", "free2", "--params", r#"{"case":2}"#, "--dim", "2", "--mode", "qp"]), 0);
    assert_eq!(code(&["rep", "--catalog", "free2", "--params", r#"{"case":2}"#, "--dim", "2", "--mode", "jacobi"]), 0);
}

#[test]
fn rep_symbolic_modes_reject_inverse_letters() {
    assert_eq!(code(&["rep", "--catalog", "vdb_quiver", "--params", ONE_ARROW, "--dim", "1:1,2:1", "--mode", "qp"]), 2);
}

#[test]
fn rep_bad_dimension_vector() {
    assert_eq!(code(&["rep", "--catalog", "free1", "--params", r#"{"mu":"1/2"}"#, "--dim", "1:2,7:1"]), 2);
}

#[test]
fn suite_row_filter_selects_one_row() {
    let o = dqp(&["suite", "--quick", "--row", "kappa", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = stdout_json(&o);
    let names: Vec<&str> = rows.as_array().unwrap().iter().map(|r| r["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["fusion-kappa"]);
    assert_eq!(code(&["suite", "--row", "no-such-row"]), 2);
}

#[test]
fn triple_matches_anomaly_for_qp_bracket() {
    let o = dqp(&["triple", "--catalog", "free1", "--params", r#"{"mu":"1/2"}"#, "t", "t t", "t"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["residual"], serde_json::json!([]));
}

#[test]
fn emit_lists_bracket_pairs() {
    let o = dqp(&["emit", "--catalog", "q1", "--params", Q1_CASE2]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("⟪t,s⟫"));
}

#[test]
fn output_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("dqp-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join("catalog.txt");
    let o = dqp(&["--output", p.to_str().unwrap(), "catalog", "list"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert!(std::fs::read_to_string(&p).unwrap().contains("vdb_quiver"));
}

#[test]
fn unknown_subcommand_and_missing_source() {
    assert_eq!(code(&["frobnicate"]), 2);
    assert_eq!(code(&["check"]), 2);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let runs: [&[&str]; 3] = [
        &["suite", "--quick", "--json", "--seed", "7"],
        &["check", "--catalog", "vdb_quiver", "--params", ONE_ARROW, "--seed", "9", "--dim", "1:2,2:2"],
        &["rep", "--catalog", "free2", "--params", r#"{"case":3}"#, "--dim", "3", "--mode", "qp", "--samples", "40", "--seed", "5"],
    ];
    for args in runs {
        let (a, b) = (dqp(args), dqp(args));
        assert_eq!(a.status.code(), b.status.code());
        assert!(a.stdout == b.stdout, "{args:?} differs between runs");
    }
}

#[test]
fn in_process_runner_agrees_with_binary() {
    let args = ["dqp", "check", "--catalog", "free1", "--params", r#"{"mu":"-1/2"}"#];
    let inproc = dqp::cli::run(args);
    let bin = dqp(&args[1..]);
    assert_eq!(Some(inproc.status), bin.status.code());
    assert_eq!(inproc.stdout.as_bytes(), bin.stdout.as_slice());
}
