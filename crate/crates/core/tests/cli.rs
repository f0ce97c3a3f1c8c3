use std::process::{Command, Output};

use serde_json::{json, Value};

fn pfin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pfin"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn schema_for(def: &str) -> jsonschema::Validator {
    let text = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/schema/cli-output.schema.json"
    ))
    .unwrap();
    let full: Value = serde_json::from_str(&text).unwrap();
    let schema = json!({
        "$schema": full["$schema"],
        "$defs": full["$defs"],
        "$ref": format!("#/$defs/{def}"),
    });
    jsonschema::validator_for(&schema).unwrap()
}

fn assert_valid(def: &str, o: &Output) -> Value {
    let v: Value = serde_json::from_str(&stdout(o)).expect("one JSON value");
    let validator = schema_for(def);
    let errors: Vec<String> = validator.iter_errors(&v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{def}: {errors:?}\n{v}");
    v
}

#[test]
fn sum_prints_canonical_set() {
    let o = pfin(&["--output", "plain", "sum", "{-1,0,2}", "{0,1,3}"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "{-1,0,1,2,3,5}\n");
}

#[test]
fn bdim_example() {
    let o = pfin(&["bdim", "{-5,-4,-2,0,1,5,6,7}"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "4\n");
}

#[test]
fn malformed_literal_is_a_usage_error() {
    let o = pfin(&["sum", "{-1,0,2}", "bad"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert_eq!(err.lines().count(), 1);
    assert!(err.contains("bad"));
    let o = pfin(&["bdim", "{1,,2}"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let runs = [
        vec!["verify", "lemma21", "--seed", "7", "--samples", "100"],
        vec!["verify", "lemma23"],
        vec!["search-autos", "--window", "2", "--oracle"],
        vec!["factor", "-2..3"],
    ];
    for args in &runs {
        let a = pfin(args);
        let b = pfin(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.status.code(), Some(0), "{args:?}");
    }
}

#[test]
fn simple_outputs_match_schema() {
    assert_valid("set", &pfin(&["sum", "{-1,0,2}", "{0,1,3}"]));
    assert_valid("set", &pfin(&["kfold", "{0,1,5}", "3"]));
    assert_valid("set", &pfin(&["apply", "sigma0", "{0,2,3}"]));
    assert_valid("bdim", &pfin(&["bdim", "{0,2,4}"]));
    assert_valid("runs", &pfin(&["runs", "{-5,-4,-2,0,1,5,6,7}"]));
    let v = assert_valid("factor", &pfin(&["factor", "{-1,0,1,2}"]));
    assert_eq!(v["factorizations"].as_array().unwrap().len(), 3);
    let v = assert_valid("factor", &pfin(&["factor", "{-1,0,2}"]));
    assert_eq!(v["atom"], true);
}

#[test]
fn verify_reports_match_schema() {
    for lemma in ["lemma21", "lemma22", "lemma23"] {
        let o = pfin(&["verify", lemma, "--samples", "50"]);
        assert_eq!(o.status.code(), Some(0), "{lemma}");
        let v = assert_valid("report", &o);
        assert_eq!(v["lemma"], lemma);
    }
}

#[test]
fn theorem_case1_with_swap() {
    let o = pfin(&[
        "verify",
        "theorem",
        "--case",
        "1",
        "--A",
        "{-2,0,3,5}",
        "--B",
        "{-2,0,2,5}",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = assert_valid("theorem", &o);
    assert_eq!(v["swapped"], true);
    assert_eq!(v["A"], "{-2,0,2,5}");
    assert_eq!(v["helper_set"], "{0,1}");
    assert_eq!(v["witness_point"], 2);
    assert_eq!(v["pass"], true);
}

#[test]
fn theorem_case2() {
    let o = pfin(&[
        "verify",
        "theorem",
        "--case",
        "2",
        "--A",
        "{-2,0,1,2,5}",
        "--B",
        "{-2,0,1,5}",
        "--c",
        "11",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = assert_valid("theorem", &o);
    assert_eq!(v["swapped"], false);
    assert_eq!(v["params"]["A+C"], "{3,4,5,6,7,8,9,10,11,12,13,14,15,16}");
    assert_eq!(v["params"]["h"], 3);
    assert_eq!(v["witness_point"], 2);
}

#[test]
fn theorem_rejects_bad_input() {
    // wrong case for this pair
    let o = pfin(&[
        "verify",
        "theorem",
        "--case",
        "1",
        "--A",
        "{-2,0,1,2,5}",
        "--B",
        "{-2,0,1,5}",
    ]);
    assert_eq!(o.status.code(), Some(2));
    // c below the minimum
    let o = pfin(&[
        "verify",
        "theorem",
        "--case",
        "2",
        "--A",
        "{-2,0,1,2,5}",
        "--B",
        "{-2,0,1,5}",
        "--c",
        "5",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn search_output_matches_schema() {
    let o = pfin(&["search-autos", "--window", "1"]);
    let v = assert_valid("search", &o);
    assert_eq!(v["survivors"], 2);
    let names: Vec<&Value> = v["maps"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| &m["name"])
        .collect();
    assert_eq!(names, [&json!("identity"), &json!("negation")]);

    let o = pfin(&[
        "search-autos",
        "--window",
        "2",
        "--prune",
        "off",
        "--max-maps",
        "1",
    ]);
    let v = assert_valid("search", &o);
    assert_eq!(v["maps"].as_array().unwrap().len(), 1);
    assert_eq!(v["maps_truncated"], true);

    let o = pfin(&["search-autos", "--window", "2", "--oracle"]);
    let v = assert_valid("search", &o);
    assert_eq!(v["oracle"]["agrees"], true);
}
