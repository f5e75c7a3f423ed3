use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_projquot")).args(args).output().expect("binary runs");
    let stdout = String::from_utf8(out.stdout).unwrap();
    let json = serde_json::from_str(&stdout).unwrap_or_else(|e| panic!("{e}: {stdout}"));
    (out.status.code().unwrap(), json)
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array().unwrap().iter().map(|x| x.as_str().unwrap().to_string()).collect()
}

#[test]
fn quotient_report() {
    let (code, report) = run(&["quotient", "--gens", "3,5", "--d", "2"]);
    assert_eq!(code, 0);
    assert_eq!(report["command"], "quotient");
    assert_eq!(strings(&report["outputs"]["minimal_generators"]), ["3", "4", "5"]);
    for field in ["version", "seed", "inputs", "timing_ms"] {
        assert!(!report[field].is_null(), "missing {field}");
    }
}

#[test]
fn project_matches_quotient() {
    let (code, projected) = run(&["project", "--matrix", "[[11,13],[10,12]]"]);
    assert_eq!(code, 0);
    let (_, quotient) = run(&["quotient", "--gens", "11,13", "--d", "2"]);
    assert_eq!(projected["outputs"], quotient["outputs"]);
}

#[test]
fn matrix_from_file_and_general_projection() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    std::fs::write(&path, r#"{"generators": [[101,102,110,111],[1,1,0,0],[0,0,1,1]]}"#).unwrap();
    let (code, report) = run(&["project", "--matrix", path.to_str().unwrap(), "--pi", "1,0,0"]);
    assert_eq!(code, 0);
    assert_eq!(strings(&report["outputs"]["minimal_generators"]), ["101", "102", "110", "111"]);
    let (code, report) = run(&["canonicalize", "--matrix", path.to_str().unwrap(), "--pi", "1,0,0", "--mode", "ray"]);
    assert_eq!(code, 0);
    assert_eq!(report["outputs"]["matrix"].as_array().unwrap().len(), 4);
    assert_eq!(strings(&report["outputs"]["semigroup"]["minimal_generators"]), ["101", "102", "110", "111"]);
}

#[test]
fn trace_round_trip_and_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    let trace = path.to_str().unwrap();
    let (code, built) = run(&["construct-quotient", "--matrix", "[[6,8],[1,1]]", "--seed", "3", "--trace", trace]);
    assert_eq!(code, 0);
    let (_, again) = run(&["construct-quotient", "--matrix", "[[6,8],[1,1]]", "--seed", "3"]);
    assert_eq!(built["outputs"], again["outputs"]);

    let (code, verified) = run(&["verify-trace", "--trace", trace]);
    assert_eq!(code, 0);
    assert_eq!(verified["outputs"]["verified"], true);
    assert_eq!(strings(&verified["outputs"]["semigroup"]["minimal_generators"]), ["6", "7", "8"]);

    let mut t: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let entry = &mut t["a"][0][0];
    let negated = format!("-{}", entry.as_str().unwrap());
    *entry = Value::String(negated);
    std::fs::write(&path, t.to_string()).unwrap();
    let (code, err) = run(&["verify-trace", "--trace", trace]);
    assert_eq!(code, 2);
    assert_eq!(err["error"]["code"], "sandwich-violation");
}

#[test]
fn error_codes() {
    let (code, err) = run(&["project", "--matrix", "[[1,2],[3]]"]);
    assert_eq!((code, err["error"]["code"].as_str().unwrap()), (2, "ragged-rows"));
    let (code, err) = run(&["project", "--matrix", "[[1,2],"]);
    assert_eq!((code, err["error"]["code"].as_str().unwrap()), (2, "malformed-input"));
    let (code, err) = run(&["canonicalize", "--matrix", "[[1,2],[3,4]]", "--pi", "1,0,0"]);
    assert_eq!((code, err["error"]["code"].as_str().unwrap()), (2, "dimension-mismatch"));
    let (code, err) = run(&["sum", "--left", "23,25/2", "--right", "29,31/2", "--budget", "1"]);
    assert_eq!((code, err["error"]["code"].as_str().unwrap()), (3, "budget-exhausted"));
    let (code, err) = run(&["no-such-command"]);
    assert_eq!((code, err["error"]["code"].as_str().unwrap()), (2, "invalid-arguments"));
}

#[test]
fn rank_commands() {
    let (_, scan) = run(&["scan", "--gens", "101,102,110,111"]);
    assert_eq!(strings(&scan["outputs"]["witness_subset"]), ["1", "4"]);
    let (_, search) = run(&["search-quotient", "--gens", "23,24,25,29,30,31", "--k", "4", "--dmax", "4"]);
    assert!(search["outputs"]["found"].is_null());
    let (code, exp) = run(&["experiment", "full-rank", "--n", "3", "--q", "100", "--trials", "200", "--seed", "5"]);
    assert_eq!(code, 0);
    let (_, again) = run(&["experiment", "full-rank", "--n", "3", "--q", "100", "--trials", "200", "--seed", "5"]);
    assert_eq!(exp["outputs"], again["outputs"]);
}
