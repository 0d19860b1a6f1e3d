use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn eds(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eds")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = eds(&all);
    (code(&out), serde_json::from_str(&stdout(&out)).expect("one JSON document"))
}

#[test]
fn bcjs_random_certifies() {
    let (c, v) = json(&["bcjs", "--m", "2", "--N", "3", "--random", "7"]);
    assert_eq!(c, 0);
    assert_eq!(v["schema_version"], 1);
    let report = &v["certificate"]["report"];
    assert_eq!(report["sum_c"], 10);
    assert_eq!(report["verdict"], "ordinary");
    assert_eq!(report["c"], serde_json::json!([4, 6]));
    assert_eq!(v["certificate"]["dims"]["dim_Z"], 10);

    let (c, v) = json(&["bcjs", "--m", "3", "--N", "6", "--random", "7"]);
    assert_eq!(c, 0);
    assert_eq!(v["certificate"]["report"]["sum_c"], 42);
}

#[test]
fn bcjs_below_threshold() {
    let out = eds(&["bcjs", "--m", "2", "--N", "2"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("threshold"), "{}", stderr(&out));
}

#[test]
fn bcjs_from_curvature_file() {
    let (c, v) = json(&["bcjs", "--m", "3", "--N", "6", "--curvature", &data("curvature.json")]);
    assert_eq!(c, 0);
    assert_eq!(v["certificate"]["report"]["c"], serde_json::json!([9, 15, 18]));
    assert!(v["preimage"]["residual"].as_f64().unwrap() < 1e-9);
}

#[test]
fn reports_are_deterministic() {
    let args = ["--json", "bcjs", "--m", "3", "--N", "6", "--random", "11"];
    assert_eq!(eds(&args).stdout, eds(&args).stdout);
}

#[test]
fn dims_gauss_rank_conformal() {
    let (c, v) = json(&["dims", "--m", "2", "--N", "3"]);
    assert_eq!(c, 0);
    assert_eq!((v["dim_Fm"].clone(), v["dim_Km"].clone(), v["dim_H"].clone(), v["dim_Z"].clone()), (6.into(), 1.into(), 3.into(), 10.into()));

    let (c, v) = json(&["gauss-rank", "--m", "2", "--N", "3", &data("h.json")]);
    assert_eq!(c, 0);
    assert_eq!(v["rank"], 1);
    assert_eq!(code(&eds(&["gauss-rank", "--m", "3", &data("h.json")])), 2);

    let (c, v) = json(&["conformal", "--m", "3", "--n", "4"]);
    assert_eq!(c, 0);
    assert_eq!(v["deficit"], 1);
    assert_eq!(v["satisfied"], false);
}

#[test]
fn verdict_exit_codes() {
    let (c, v) = json(&["characters", &data("frobenius.json")]);
    assert_eq!(c, 0);
    assert_eq!(v["report"]["c"], serde_json::json!([1, 1]));
    assert_eq!(v["report"]["verdict"], "ordinary");

    let (c, v) = json(&["check", &data("not_ordinary.json")]);
    assert_eq!(c, 1);
    assert_eq!(v["report"]["verdict"], "not_ordinary");

    let (c, v) = json(&["characters", &data("empty.json")]);
    assert_eq!(c, 0);
    assert_eq!(v["report"]["c"], serde_json::json!([0, 0]));
}

#[test]
fn input_errors_exit_two() {
    let cases: Vec<(Vec<String>, &str)> = vec![
        (vec!["check".to_string(), data("contact.json")], "not an integral element"),
        (vec!["check".to_string(), data("bad_order.json")], "generators[0][0].indices"),
        (vec!["check".to_string(), data("syntax.json")], "line 3, column 35"),
        (vec!["characters".to_string(), data("not_ordinary.json")], "no split"),
        (vec!["check".to_string(), data("missing.json")], "cannot read"),
        (vec!["cartan-lemma".to_string(), data("lemma_bad.json")], "-1/1*w1^w2"),
        (vec!["polar".to_string(), data("frobenius.json"), "--k".into(), "3".into()], "exceeds"),
    ];
    for (args, needle) in cases {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = eds(&args);
        assert_eq!(code(&out), 2, "{args:?}");
        let err = stderr(&out);
        assert!(err.contains(needle), "{args:?}: {err}");
        assert!(!err.contains("panicked"), "{args:?}: {err}");
    }
    assert_eq!(code(&eds(&["bcjs", "--m", "x", "--N", "3"])), 2);
}

#[test]
fn polar_and_lemma() {
    let (c, v) = json(&["polar", &data("frobenius.json"), "--k", "1"]);
    assert_eq!(c, 0);
    assert_eq!(v["polar_dim"], 2);

    let (c, v) = json(&["cartan-lemma", &data("lemma.json")]);
    assert_eq!(c, 0);
    assert_eq!(v["h"], serde_json::json!([["2/1", "3/1"], ["3/1", "5/1"]]));
}

#[test]
fn json_errors_are_documents() {
    let (c, v) = json(&["check", &data("syntax.json")]);
    assert_eq!(c, 2);
    assert_eq!(v["exit_code"], 2);
    assert!(v["error"].as_str().unwrap().contains("syntax error"));
}

#[test]
fn sample_documents_are_canonical() {
    for name in ["frobenius.json", "contact.json", "empty.json", "not_ordinary.json"] {
        let text = std::fs::read_to_string(data(name)).unwrap();
        let doc = eds_core::document::EdsDocument::parse(&text).unwrap();
        assert_eq!(doc.to_canonical(), text, "{name}");
    }
}
