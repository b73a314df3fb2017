use serde_json::Value;
use std::process::Command;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["syndet".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = syndet_cli::run(&argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> (i32, Value) {
    let (code, out, err) = run(args);
    assert!(err.is_empty(), "stderr: {err}");
    (code, serde_json::from_str(&out).unwrap())
}

#[test]
fn jin_periodic_report() {
    let (code, r) = json(&[
        "jin", "--a", "ap:4:0", "--b", "ap:4:0", "--support", "-10000:10000", "--m", "50", "--alpha", "1/4",
        "--beta", "1/4",
    ]);
    assert_eq!(code, 0);
    assert_eq!(r["command"], "jin");
    assert_eq!(r["version"], 1);
    assert_eq!(r["verified"], true);
    assert_eq!(r["result"]["bound"], 16);
    assert_eq!(r["result"]["shifts"], serde_json::json!([0, 1, 2, 3]));
    assert_eq!(r["inputs"]["alpha"], "1/4");
    assert_eq!(r["inputs"]["tau"], "1/4");
}

#[test]
fn density_of_multiples_of_three() {
    let (code, r) = json(&["density", "--a", "ap:3:0", "--support", "0:999", "--lengths", "1:300"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["banach_estimate"], "1/3");
    assert_eq!(r["result"]["profile"].as_array().unwrap().len(), 300);
    // support does not start at 1
    assert_eq!(r["result"]["upper_density_estimate"], Value::Null);
    assert_eq!(r["result"]["nominal_density"]["value"], "1/3");
}

#[test]
fn density_floor_diagnostic() {
    let (_, r) = json(&["density", "--a", "ap:3:0", "--support", "1:600", "--lengths", "1:6", "--alpha", "1/2"]);
    assert_eq!(r["result"]["density_floor_violations"], serde_json::json!([3, 5, 6]));
    let (_, r) = json(&["density", "--a", "ap:3:0", "--support", "1:600", "--n", "600", "--limsup-from", "1"]);
    assert_eq!(r["result"]["upper_density_estimate"]["value"], "1/3");
}

#[test]
fn verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let (code, out, _) = run(&["jin", "--a", "ap:2:0", "--b", "ap:3:0", "--support=-10000:10000", "--m", "30"]);
    assert_eq!(code, 0);
    std::fs::write(&path, &out).unwrap();
    let (code, r) = json(&["verify", "--report", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(r["verified"], true);

    // a doctored witness no longer verifies
    let mut doctored: Value = serde_json::from_str(&out).unwrap();
    doctored["result"]["shifts"] = serde_json::json!([0]);
    doctored["inputs"]["b"] = serde_json::json!("ap:4:0");
    std::fs::write(&path, doctored.to_string()).unwrap();
    let (code, r) = json(&["verify", "--report", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(r["verified"], false);
}

#[test]
fn prop2_found_and_missing() {
    let (code, r) = json(&[
        "prop2", "--a", "compl:list:1,2,4,8,16,32,64,128,256,512,1024,2048", "--b", "ap:2:0", "--support",
        "1:4000", "--k", "10", "--alpha", "1/2",
    ]);
    assert_eq!(code, 0);
    assert_eq!(r["verified"], true);
    assert_eq!(r["result"]["witness"]["k"], 10);
    let (code, r) = json(&["prop2", "--a", "ap:2:0", "--b", "ap:2:0", "--support", "1:500", "--k", "2", "--alpha", "1/2"]);
    assert_eq!(code, 1);
    assert_eq!(r["result"]["witness"], Value::Null);
}

#[test]
fn structure_and_diffset() {
    let (code, r) = json(&["structure", "--a", "compl:ap:10:0", "--support", "1:1000", "--k", "5", "--m", "10"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["syndetic_bound"], 2);
    assert_eq!(r["result"]["thick_up_to"]["witness"], serde_json::json!([1, 5]));
    assert_eq!(r["result"]["longest_run"]["length"], 9);

    let (_, r) = json(&["diffset", "--a", "ap:3:0", "--support", "-300:300"]);
    assert_eq!(r["result"]["central_syndetic_bound"], 3);
    assert_eq!(r["result"]["gap_histogram"], serde_json::json!([[2, 400]]));
    let (_, r) = json(&["diffset", "--a", "list:1,2", "--b", "list:10", "--support", "0:20", "--sum"]);
    assert_eq!(r["result"]["min"], 11);
    assert_eq!(r["result"]["cardinality"], 2);
}

#[test]
fn jin_without_witness_exits_one() {
    // E_n = {1} for every n leaves [1, 3] uncoverable by the greedy
    let (code, r) = json(&[
        "jin", "--a", "list:0", "--b", "list:0", "--support", "0:2000", "--m", "3", "--alpha", "1/2", "--beta",
        "1/2", "--n-list", "7,9,11",
    ]);
    assert_eq!(code, 1);
    assert_eq!(r["verified"], false);
    assert!(r["result"]["error"].is_string());
}

#[test]
fn seed_override_changes_bernoulli_sets() {
    let base = ["density", "--a", "bernoulli:1/2:42", "--support", "1:500", "--lengths", "1:3"];
    let (_, r42) = json(&base);
    let mut args = base.to_vec();
    args.extend(["--seed", "7"]);
    let (_, r7) = json(&args);
    assert_ne!(r42["result"], r7["result"]);
    assert_eq!(r7["inputs"]["seed"], 7);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["density", "--a", "ap:0:1", "--support", "1:10"][..],
        &["density", "--a", "ap:3:0", "--support", "10:1"],
        &["density", "--a", "ap:3:0"],
        &["jin", "--a", "list:1", "--b", "list:2", "--support", "1:10000", "--m", "5"],
        &["jin", "--a", "ap:2:0", "--b", "ap:2:0", "--support", "1:100", "--m", "40"],
        &["prop2", "--a", "ap:2:0", "--b", "ap:2:0", "--support", "1:50", "--k", "2", "--alpha", "x"],
        &["verify", "--report", "/nonexistent/report.json"],
        &["frobnicate"],
    ] {
        let (code, out, err) = run(args);
        assert_eq!(code, 2, "{args:?}");
        assert!(out.is_empty(), "{args:?}");
        assert!(!err.is_empty(), "{args:?}");
    }
}

#[test]
fn binary_output_is_stable() {
    let exe = env!("CARGO_BIN_EXE_syndet");
    let args = ["diffset", "--a", "beatty:5/2", "--support", "-500:500"];
    let first = Command::new(exe).args(args).output().unwrap();
    let second = Command::new(exe).args(args).output().unwrap();
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    let bad = Command::new(exe).args(["density", "--a", "nope", "--support", "1:5"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
