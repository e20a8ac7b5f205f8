use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tangle_calc::{classify, parse_tangle, read_jsonl};

fn tangle(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tangle"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let o = tangle(args);
    assert!(
        o.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    serde_json::from_slice(&o.stdout).unwrap()
}

fn enumerate_to(path: &Path, max_leaves: &str, alphabet: &str, jobs: &str) {
    let o = tangle(&[
        "enumerate",
        "--max-leaves",
        max_leaves,
        "--alphabet",
        alphabet,
        "--out",
        path.to_str().unwrap(),
        "--jobs",
        jobs,
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

fn check(path: &Path) -> Output {
    tangle(&[
        "check",
        "--suite",
        "invariants",
        "--corpus",
        path.to_str().unwrap(),
    ])
}

#[test]
fn classify_rational() {
    let v = json(&["classify", "T[2/3]", "--json"]);
    assert_eq!(v["status"], "non_hyperbolic");
    assert_eq!(v["reasons"][0]["kind"], "rational");
    assert_eq!(v["census"]["disk"]["separates_strings"], true);

    let o = tangle(&["classify", "T[2/3]"]);
    assert!(stdout(&o).contains("status: non_hyperbolic"));
    assert!(stdout(&o).contains("reason: rational"));
}

#[test]
fn classify_q_product() {
    let v = json(&["classify", "Q1 * (T[1/3] + T[1/4])", "--json"]);
    assert_eq!(v["status"], "non_hyperbolic");
    assert_eq!(v["reasons"][0]["kind"], "q_product");
    assert_eq!(v["reasons"][0]["m"], 1);
}

#[test]
fn classify_hyperbolic() {
    let v = json(&["classify", "T(1/3,1/3) * T(1/3,1/3)", "--json"]);
    assert_eq!(v["status"], "hyperbolic");
    assert_eq!(v["reasons"], Value::Array(vec![]));
}

#[test]
fn fmt_prints_the_normal_form() {
    let o = tangle(&["fmt", "T(1/2,-1/2)"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "Q1");

    let o = tangle(&["fmt", "rot(T[2/3])"]);
    assert_eq!(stdout(&o).trim(), "T[-3/2]");

    let o = tangle(&["fmt", "M(1/2, 1/3)"]);
    assert_eq!(stdout(&o).trim(), "M(1/2,1/3)");
}

#[test]
fn census_lists_surfaces() {
    let v = json(&["census", "T(1/3,1/3) * Q2", "--json"]);
    assert!(v["disk"].is_null());
    assert_eq!(v["annuli"].as_array().unwrap().len(), 2);
    assert_eq!(v["tori"].as_array().unwrap().len(), 1);
    assert_eq!(v["spheres"], Value::Array(vec![]));
}

#[test]
fn classify_link_reports() {
    let v = json(&["classify-link", "N(T[3])", "--json"]);
    assert_eq!(v["status"], "non_hyperbolic");
    assert_eq!(v["reasons"][0]["kind"], "two_bridge_torus");

    let v = json(&["classify-link", "M(1/2,1/3,-1/5)", "--json"]);
    assert_eq!(v["status"], "hyperbolic");
    assert_eq!(v["prime"], true);
}

#[test]
fn export_pd_json() {
    let v = json(&["export-pd", "N(T[3])", "--json"]);
    assert_eq!(v["crossings"].as_array().unwrap().len(), 3);
    assert_eq!(v["signs"], serde_json::json!([1, 1, 1]));
    assert_eq!(v["components"], 1);

    let v = json(&["export-pd", "N(T[2])", "--json"]);
    assert_eq!(v["crossings"].as_array().unwrap().len(), 2);
    assert_eq!(v["components"], 2);

    let o = tangle(&["export-pd", "N(T[3])"]);
    assert!(stdout(&o).starts_with("PD[X["));
}

#[test]
fn exit_codes() {
    // malformed or invalid input
    assert_eq!(tangle(&["classify", "T[1/"]).status.code(), Some(1));
    assert_eq!(tangle(&["classify", "T[0/0]"]).status.code(), Some(1));
    assert_eq!(
        tangle(&["classify-link", "M(1/2,inf)"]).status.code(),
        Some(1)
    );
    assert_eq!(tangle(&["export-pd", "T[1/2]"]).status.code(), Some(1));
    assert_eq!(tangle(&["classify-link", "T[1/2]"]).status.code(), Some(1));

    // usage
    assert_eq!(tangle(&[]).status.code(), Some(2));
    assert_eq!(tangle(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(tangle(&["classify"]).status.code(), Some(2));
    assert_eq!(
        tangle(&[
            "enumerate",
            "--max-leaves",
            "0",
            "--alphabet",
            "1/2",
            "--out",
            "x"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        tangle(&[
            "enumerate",
            "--max-leaves",
            "2",
            "--alphabet",
            "1/x",
            "--out",
            "x"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        tangle(&["check", "--suite", "nope", "--corpus", "x"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn malformed_input_reports_without_crashing() {
    for text in [
        "",
        "(((",
        "T[1/2] +",
        "Q",
        "rot(",
        "T[1/2] * * Q3h",
        "M(1/2)",
        "T[1/2]\u{7f}",
        "Q4000000000 * Q9h",
    ] {
        let o = tangle(&["classify", text]);
        assert_eq!(o.status.code(), Some(1), "{text:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn enumerate_is_deterministic_across_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.jsonl");
    let b = dir.path().join("b.jsonl");
    let c = dir.path().join("c.jsonl");
    enumerate_to(&a, "3", "1/2,-1/2,1/3,-1/3", "1");
    enumerate_to(&b, "3", "1/2,-1/2,1/3,-1/3", "4");
    enumerate_to(&c, "3", "1/2,-1/2,1/3,-1/3", "0");
    let bytes = fs::read(&a).unwrap();
    assert!(!bytes.is_empty());
    assert_eq!(bytes, fs::read(&b).unwrap());
    assert_eq!(bytes, fs::read(&c).unwrap());
}

#[test]
fn enumerate_small_cases() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("one.jsonl");
    enumerate_to(&p, "1", "1/2", "1");
    let recs = read_jsonl(fs::read(&p).unwrap().as_slice()).unwrap();
    assert_eq!(recs.len(), 1);
    assert_eq!(recs[0].expr, "T[1/2]");

    enumerate_to(&p, "2", "1/2", "1");
    let recs = read_jsonl(fs::read(&p).unwrap().as_slice()).unwrap();
    let nfs: Vec<_> = recs.iter().map(|r| r.normal_form.as_str()).collect();
    assert!(nfs.contains(&"Q1"), "{nfs:?}");
    assert!(nfs.contains(&"T[1/4]"), "{nfs:?}");
}

#[test]
fn check_suite_passes_on_a_fresh_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("c.jsonl");
    enumerate_to(&p, "3", "1/2,-1/2,1/3,-1/3", "0");
    let o = check(&p);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains(" 0 failed"));
}

#[test]
fn check_suite_on_an_empty_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("empty.jsonl");
    fs::write(&p, "").unwrap();
    let o = check(&p);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("records: 0"));
    assert!(stdout(&o).contains("total: 0 passed, 0 failed"));
}

#[test]
fn check_suite_catches_a_flipped_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("c.jsonl");
    enumerate_to(&p, "2", "1/2,1/3", "1");
    let text = fs::read_to_string(&p).unwrap();
    let mut lines: Vec<String> = text.lines().map(str::to_string).collect();
    let i = lines
        .iter()
        .position(|l| l.contains("\"status\":\"hyperbolic\""))
        .unwrap_or(0);
    let flipped = if lines[i].contains("\"status\":\"hyperbolic\"") {
        lines[i].replace("\"status\":\"hyperbolic\"", "\"status\":\"non_hyperbolic\"")
    } else {
        lines[i].replace("\"status\":\"non_hyperbolic\"", "\"status\":\"hyperbolic\"")
    };
    lines[i] = flipped;
    fs::write(&p, lines.join("\n") + "\n").unwrap();

    let o = check(&p);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("stored_verdict:"));
    assert!(
        stdout(&o).contains("total:") && stdout(&o).contains(" 1 failed\n"),
        "{}",
        stdout(&o)
    );
}

#[test]
fn check_suite_rejects_a_corrupt_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.jsonl");
    fs::write(&p, "{\"expr\": \"T[1/2]\"\nnot json\n").unwrap();
    let o = check(&p);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("corrupt corpus"));

    assert_eq!(
        check(&dir.path().join("missing.jsonl")).status.code(),
        Some(1)
    );
}

#[test]
fn cli_status_matches_the_library() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("c.jsonl");
    enumerate_to(&p, "3", "1/2,1/3", "0");
    let recs = read_jsonl(fs::read(&p).unwrap().as_slice()).unwrap();
    assert!(!recs.is_empty());
    for r in &recs {
        let v = json(&["classify", &r.expr, "--json"]);
        let lib = classify(&parse_tangle(&r.expr).unwrap()).unwrap();
        assert_eq!(
            v["status"],
            serde_json::to_value(lib.status).unwrap(),
            "{}",
            r.expr
        );
        assert_eq!(v["normal_form"], lib.normal_form.to_string());
    }
}
