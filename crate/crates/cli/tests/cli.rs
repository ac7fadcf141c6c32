use std::process::{Command, Output};

use serde_json::Value;

fn cyclokit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cyclokit")).args(args).env_remove("CYCLOKIT_PRECISION").output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn lists_the_maps_out_of_the_one_vertex_wheel() {
    let out = cyclokit(&["hom", "--cat", "lambda", "--src", "1", "--tgt", "5"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["count"], 5);
    assert_eq!(v["morphisms"][0], serde_json::json!({ "src": 1, "tgt": 5, "mod": 1, "lift": [0] }));
}

#[test]
fn smallest_exactness_check_passes() {
    let out = cyclokit(&["verify", "exactness", "--nmax", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["status"], "pass");
}

#[test]
fn compare_reports_a_match_for_the_tate_twist() {
    let out = cyclokit(&["compare", "--p", "2", "--prec", "2", "--depth", "3", "--fixture", "tate_twist"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"], "match");
    assert_eq!(v["degrees"].as_array().unwrap().len(), 3);
}

#[test]
fn bad_input_is_a_usage_error() {
    for args in [
        &["hom", "--src", "0", "--tgt", "2"][..],
        &["frobnicate"],
        &["verify", "no_such_suite"],
        &["syn", "--p", "4"],
        &["syn", "--fixture", "random_x"],
        &["dual", "--f", "{not json"],
        &["compose", "--g", r#"{"src":1,"tgt":1,"mod":1,"lift":[0]}"#, "--f", r#"{"src":1,"tgt":2,"mod":1,"lift":[0]}"#],
    ] {
        assert_eq!(cyclokit(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn default_precision_comes_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_cyclokit")).args(["syn", "--p", "3"]).env("CYCLOKIT_PRECISION", "3").output().unwrap();
    assert_eq!(json(&out)["syntomic"]["0"], "ℤ/27");
    assert_eq!(json(&cyclokit(&["syn", "--p", "3"]))["syntomic"]["0"], "ℤ/9");
}

#[test]
fn reports_are_byte_stable() {
    for args in [&["verify", "subdivision", "--nmax", "3", "--seed", "4"][..], &["tc", "--fixture", "random_5", "--depth", "2"]] {
        assert_eq!(cyclokit(args).stdout, cyclokit(args).stdout);
    }
}

#[test]
fn file_fixtures_match_the_built_in_ones() {
    for name in ["trivial", "tate_twist", "random_5"] {
        let path = format!("{}/fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"));
        let a = json(&cyclokit(&["tc", "--fixture", &path, "--p", "3"]));
        let b = json(&cyclokit(&["tc", "--fixture", name, "--p", "3"]));
        assert_eq!(a["tc"], b["tc"], "{name}");
    }
}

#[test]
fn calculators() {
    let f = r#"{"src":2,"tgt":3,"mod":1,"lift":[0,1]}"#;
    assert_eq!(json(&cyclokit(&["dual", "--f", f]))["lift"], serde_json::json!([0, 1, 1]));
    let g = r#"{"src":3,"tgt":1,"mod":1,"lift":[0,0,1]}"#;
    assert_eq!(json(&cyclokit(&["compose", "--g", g, "--f", f]))["tgt"], 1);
    let e = r#"{"src":1,"tgt":1,"degree":2,"witness":{"src":1,"tgt":2,"mod":1,"lift":[0]}}"#;
    let v = json(&cyclokit(&["factorize", "--f", e]));
    assert_eq!(v["vertical"]["degree"], 2);
    assert_eq!(v["horizontal"]["degree"], 1);
    let hc = json(&cyclokit(&["hc", "--degree-max", "4"]));
    assert_eq!(hc["hc"], serde_json::json!(["ℤ", "0", "ℤ", "0", "ℤ"]));
    let stab = json(&cyclokit(&["stab", "--p", "3", "--prec", "2", "--window", "1"]));
    assert!(stab["gr"].as_object().unwrap().values().all(|g| g == "ℤ/3"));
    let exp = json(&cyclokit(&["exp", "--fixture", "tate_twist", "--nmax", "2"]));
    assert_eq!(exp["homology"]["2"]["2"], "ℤ");
    assert_eq!(cyclokit(&["div", "--fixture", "random_3", "--n", "3"]).status.code(), Some(0));
}
