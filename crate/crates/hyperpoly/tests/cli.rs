use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

fn run(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_hyperpoly")).args(args).output().unwrap();
    let report: Value = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout));
    });
    (out.status.code().unwrap(), report)
}

fn instance(name: &str) -> String {
    corpus().join(name).to_string_lossy().into_owned()
}

fn suite<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["result"]["suites"].as_array().unwrap().iter().find(|s| s["name"] == name).unwrap()
}

#[test]
fn decide_on_a_permutation_product() {
    let (code, report) = run(&["decide", "--instance", &instance("product_perm3.json")]);
    assert_eq!(code, 0);
    assert_eq!(report["command"], "decide");
    assert_eq!(report["instance"]["name"], "permutation-3");
    assert_eq!(report["result"]["verdict"], "IN_POLYTOPE");
    assert!(report["oracle_calls"].as_u64().unwrap() > 0);
}

#[test]
fn decide_outside_the_polytope() {
    let (code, report) = run(&["decide", "--instance", &instance("product_hall_fail4.json")]);
    assert_eq!(code, 0);
    assert_eq!(report["result"]["verdict"], "NOT_IN_POLYTOPE");
}

#[test]
fn eval_and_roots_take_points() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    fs::write(&path, r#"{"kind": "product", "n": 2, "matrix": [[1.0, 0.0], [0.0, 2.0]]}"#).unwrap();
    let p = path.to_str().unwrap();
    let (code, report) = run(&["eval", "--instance", p, "--point", "3,-1"]);
    assert_eq!(code, 0);
    assert_eq!(report["result"]["value"].as_f64().unwrap(), -6.0);
    let (code, report) = run(&["roots", "--instance", p, "--point", "3,-1", "--direction", "1,1"]);
    assert_eq!(code, 0);
    let mut roots: Vec<f64> =
        report["result"]["roots"].as_array().unwrap().iter().map(|r| r[0].as_f64().unwrap()).collect();
    roots.sort_by(f64::total_cmp);
    assert!((roots[0] + 1.0).abs() < 1e-9 && (roots[1] - 3.0).abs() < 1e-9, "{roots:?}");
}

#[test]
fn malformed_input_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, r#"{"kind": "product", "n": 3, "matrix": [[1.0]]}"#).unwrap();
    let (code, report) = run(&["eval", "--instance", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(report["status"], "error");
    assert!(report["error"].is_string());
    let out = Command::new(env!("CARGO_BIN_EXE_hyperpoly")).arg("no-such-command").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_reports_a_bad_instance_by_name() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["product_perm3.json", "powersum3.json"] {
        fs::copy(corpus().join(name), dir.path().join(name)).unwrap();
    }
    fs::write(
        dir.path().join("indefinite.json"),
        r#"{"kind": "determinantal", "n": 2, "name": "indefinite-2",
            "matrices": [[[1.0, 0.0], [0.0, -1.0]], [[1.0, 0.0], [0.0, 1.0]]]}"#,
    )
    .unwrap();
    let (code, report) = run(&["verify", "--corpus", dir.path().to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(report["result"]["passed"], false);
    let load = suite(&report, "load");
    assert_eq!(load["passed"], false);
    assert!(load["failures"].as_array().unwrap().iter().any(|f| f["instance"] == "indefinite-2"), "{load}");
}

#[test]
fn shipped_corpus_verifies_and_is_reproducible() {
    let (code, first) = run(&["verify"]);
    assert_eq!(code, 0, "{first}");
    assert_eq!(first["result"]["passed"], true);
    // the powersum is a negative control: its failures are expected
    let hyperbolic = suite(&first, "hyperbolicity");
    assert_eq!(hyperbolic["passed"], true);
    assert!(hyperbolic["expected_failures"].as_array().unwrap().iter().any(|f| f["instance"] == "powersum-3"));
    let (_, second) = run(&["verify"]);
    assert_eq!(first, second);
}

#[test]
fn out_writes_the_same_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let (_, report) =
        run(&["hall", "--instance", &instance("product_hall_fail4.json"), "--out", out.to_str().unwrap()]);
    let written: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(written["result"], report["result"]);
}
