use std::process::{Command, Output};

use serde_json::Value;

const THETA: &str = r#"{"circles":0,"vertices":[[0,1,2],[3,4,5]],"edges":[[0,3],[1,5],[2,4]]}"#;
const TREFOIL_PD: &str = r#"{"crossings": [[1,4,2,5],[3,6,4,1],[5,2,6,3]], "signs": "auto"}"#;

fn tool(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lmo-tool")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = tool(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON output")
}

fn stdout(args: &[&str]) -> String {
    let out = tool(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap().trim_end().to_string()
}

#[test]
fn series_bcoeffs() {
    assert_eq!(stdout(&["series", "bcoeffs", "--max", "4"]), r#"{"2":"1/48","4":"-1/5760"}"#);
}

#[test]
fn series_nu() {
    assert_eq!(stdout(&["series", "nu", "--order", "4"]), r#""1 - 1/24*h^2 + 7/5760*h^4""#);
}

#[test]
fn series_aprime_figure_eight() {
    assert_eq!(stdout(&["series", "aprime", "--knot", "figure8", "--max", "4"]), r#"{"2":"1/2","4":"7/24"}"#);
}

#[test]
fn weval_theta() {
    assert_eq!(stdout(&["diagram", "weval", "--input", THETA]), r#""c^2 - c""#);
    assert_eq!(stdout(&["diagram", "weval", "--input", THETA, "--at", "3"]), r#""6""#);
}

#[test]
fn weval_reads_files() {
    let dir = std::env::temp_dir().join(format!("lmo-golden-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("theta.json");
    std::fs::write(&path, THETA).unwrap();
    assert_eq!(stdout(&["diagram", "weval", "--input", path.to_str().unwrap()]), r#""c^2 - c""#);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn close_two_wheel_is_theta() {
    let w2 = stdout(&["diagram", "wheel", "--n", "2"]);
    let closed = json(&["diagram", "close", "--input", &w2]);
    let terms = closed.as_array().unwrap();
    assert_eq!(terms.len(), 1);
    let theta = json(&["diagram", "canon", "--input", THETA]);
    assert_eq!(terms[0]["diagram"], theta["diagram"]);
}

#[test]
fn odd_wheel_canonicalizes_to_zero() {
    let w3 = stdout(&["diagram", "wheel", "--n", "3"]);
    assert_eq!(json(&["diagram", "canon", "--input", &w3])["zero"], Value::Bool(true));
}

#[test]
fn conway_weight_of_two_wheel() {
    let w2 = stdout(&["diagram", "wheel", "--n", "2"]);
    assert_eq!(stdout(&["diagram", "wc", "--input", &w2]), r#"{"2":"-2"}"#);
}

#[test]
fn lmo_forward_trefoil_theta() {
    let report = json(&["lmo", "forward", "--knot", "trefoil", "--degree", "1"]);
    assert_eq!(report["theta"], "-11/24");
    assert_eq!(report["wheels"][1]["coeff"], "-11/24");
}

#[test]
fn lmo_round_trip_through_files() {
    let path = std::env::temp_dir().join(format!("lmo-z-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let a = r#"{"span":1,"coeffs":["1","-1","1"]}"#;
    let status = tool(&["lmo", "forward", "--alexander", a, "--degree", "4", "--output", p]).status;
    assert!(status.success());
    assert_eq!(stdout(&["lmo", "invert", "--input", p, "--degree", "4", "--span", "1"]), a);
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn knot_polynomials() {
    assert_eq!(stdout(&["knot", "alexander", "--pd", TREFOIL_PD]), r#"{"span":1,"coeffs":["1","-1","1"]}"#);
    assert_eq!(stdout(&["knot", "alexander", "--knot", "figure8"]), r#"{"span":1,"coeffs":["-1","3","-1"]}"#);
    assert_eq!(json(&["knot", "conway", "--knot", "5_1"])["text"], "1 + 3*z^2 + z^4");
    let seifert = r#"{"matrix": [[-1,1],[0,-1]]}"#;
    assert_eq!(stdout(&["knot", "alexander", "--seifert", seifert]), r#"{"span":1,"coeffs":["1","-1","1"]}"#);
    assert_eq!(json(&["knot", "list"]).as_array().unwrap().len(), 6);
}

#[test]
fn space_dims() {
    assert_eq!(stdout(&["space", "dim", "--degree", "3"]), r#"{"degree":3,"ambient":7,"rank":4,"quotient_dim":3}"#);
}

#[test]
fn wheels_alpha_and_exp() {
    let alpha = stdout(&["wheels", "alpha", "--knot", "trefoil", "--degree", "4"]);
    assert_eq!(alpha, r#"{"2":"-11/24","4":"599/2880"}"#);
    let exp = json(&["wheels", "exp", "--alpha", &alpha, "--degree", "4"]);
    assert_eq!(exp[0]["wheels"], serde_json::json!([]));
}

#[test]
fn verify_single_check() {
    let report = json(&["verify", "--only", "1"]);
    assert_eq!(report["passed"], Value::Bool(true));
}

#[test]
fn pretty_output_is_same_json() {
    let pretty = stdout(&["--pretty", "series", "bcoeffs", "--max", "4"]);
    assert!(pretty.contains('\n'));
    assert_eq!(serde_json::from_str::<Value>(&pretty).unwrap(), json(&["series", "bcoeffs", "--max", "4"]));
}

#[test]
fn deterministic_output() {
    let args = ["lmo", "forward", "--knot", "figure8", "--degree", "3"];
    assert_eq!(stdout(&args), stdout(&args));
}

#[test]
fn exit_codes() {
    assert_eq!(tool(&["knot", "alexander", "--knot", "9_42"]).status.code(), Some(1));
    assert_eq!(tool(&["diagram", "weval", "--input", "{bad"]).status.code(), Some(2));
    assert_eq!(tool(&["frobnicate"]).status.code(), Some(2));
    // vanishes at t = 1
    let not_alexander = r#"{"span":1,"coeffs":["1","0","-1"]}"#;
    assert_eq!(tool(&["wheels", "alpha", "--alexander", not_alexander, "--degree", "2"]).status.code(), Some(1));
    let lmo = json(&["lmo", "forward", "--knot", "trefoil", "--degree", "2"]);
    let text = lmo.to_string();
    assert_eq!(tool(&["lmo", "invert", "--input", &text, "--degree", "2", "--span", "3"]).status.code(), Some(1));
}
