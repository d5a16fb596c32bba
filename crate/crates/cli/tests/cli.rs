use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_freesep")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

const AABBA_DOT: &str = r#"graph omega {
    "a1";
    "A1";
    "a2";
    "A2";
    "a1" -- "A1";
    "a1" -- "A2";
    "A1" -- "a2";
    "a2" -- "A2";
}
"#;

#[test]
fn dot_golden_for_aabba() {
    let out = run(&["whitehead", "graph", "--n", "2", "--word", "aabba", "--format", "dot"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), AABBA_DOT);
}

#[test]
fn split_project_recovers_w() {
    let out = run(&["split", "project", "--n", "3", "--w", "ab"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["result"]["r"], "ab");
}

#[test]
fn exit_codes() {
    let cases: [(&[&str], i32, &str); 5] = [
        (&["word", "reduce", "--word", "a%"], 2, "parse"),
        (&["word", "mul", "--left", "c", "--right", "a", "--n", "2"], 2, "parse"),
        (&["suite", "no-such-suite"], 2, "invalid-input"),
        (&["whitehead", "primpair", "--word", "abAB"], 3, "precondition"),
        (&["whitehead", "separable", "--word", "aabbAbAB", "--node-cap", "1"], 4, "undecided"),
    ];
    for (args, code, kind) in cases {
        let out = run(args);
        assert_eq!(out.status.code(), Some(code), "{args:?}");
        let v = json(&out);
        assert_eq!(v["error"]["code"], code);
        assert_eq!(v["error"]["kind"], kind, "{args:?}");
    }
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn digests_are_deterministic() {
    let args = ["flat", "certify", "--m", "2", "--n", "2", "--range", "10", "--samples", "40", "--seed", "7"];
    let (a, b) = (run(&args), run(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["manifest"]["seed"], 7);
    assert_eq!(v["manifest"]["results_digest"].as_str().unwrap().len(), 64);
    let other = json(&run(&["flat", "certify", "--m", "2", "--n", "2", "--range", "10", "--samples", "40", "--seed", "8"]));
    assert_ne!(v["manifest"]["results_digest"], other["manifest"]["results_digest"]);
}

#[test]
fn suite_timings_stay_out_of_the_digest() {
    let a = json(&run(&["suite", "delta-identity"]));
    let b = json(&run(&["suite", "delta-identity"]));
    assert_eq!(a["result"]["passed"], true);
    assert_eq!(a["manifest"]["results_digest"], b["manifest"]["results_digest"]);
    assert!(a["timings"][0]["elapsed_ms"].is_u64());
}

#[test]
fn word_arithmetic() {
    let v = json(&run(&["word", "mul", "--left", "ab", "--right", "BA"]));
    assert_eq!(v["result"]["word"], "");
    let v = json(&run(&["word", "pow", "--word", "ab", "--exp", "-2"]));
    assert_eq!(v["result"]["word"], "BABA");
    let v = json(&run(&["word", "conjclass", "--word", "baB"]));
    assert_eq!(v["result"]["class"], "a");
}
