//! End-to-end runs of the binary.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_semifree-lab")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = run(&full);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap_or_else(|e| panic!("{args:?}: {e}"));
    (code(&out), v)
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn idsemifree_has_three_models_on_two_points() {
    let out = run(&["models", "builtin:idsemifree", "--carrier", "2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).lines().next(), Some("3 models"));
}

#[test]
fn finiteset_comonad_verifies() {
    assert_eq!(code(&run(&["verify-categorical", "finiteset", "--comonad"])), 0);
}

#[test]
fn simplified_list_presentation() {
    let out = run(&["semifree", "list", "--simplify"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("theory "));
    assert!(!text.contains("op a :"), "{text}");
}

#[test]
fn exit_codes() {
    // Verified.
    assert_eq!(code(&run(&["prove", "list", "mul(e, x) = mul(x, e)"])), 0);
    // Refuted with a witness.
    assert_eq!(code(&run(&["countermodel", "list", "mul(x, y) = mul(y, x)"])), 1);
    assert_eq!(code(&run(&["equiv", "list", "multiset"])), 1);
    // Usage and parse errors.
    assert_eq!(code(&run(&["prove", "list", "mul(x) = x"])), 2);
    assert_eq!(code(&run(&["models", "nosuchtheory", "--carrier", "2"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
    // Budget or feasibility refusal.
    assert_eq!(code(&run(&["prove", "list", "mul(x, y) = mul(y, x)", "--budget", "4"])), 3);
    assert_eq!(code(&run(&["models", "state:n=2", "--carrier", "3", "--cap", "1000"])), 3);
}

#[test]
fn json_verdicts_match_exit_codes() {
    let cases: Vec<(Vec<&str>, i32, &str)> = vec![
        (vec!["semifree", "exception:K=k"], 0, "generated"),
        (vec!["semifree", "list", "--simplify"], 0, "simplified"),
        (vec!["semifree", "identity", "--iterate", "2"], 0, "iterated"),
        (vec!["prove", "multiset", "mul(x, y) = mul(y, x)"], 0, "proved"),
        (vec!["countermodel", "multiset", "mul(x, x) = x"], 1, "refuted"),
        (vec!["free", "finiteset", "--vars", "x,y", "--bound", "5"], 0, "bounded"),
        (vec!["models", "identity", "--carrier", "2"], 0, "enumerated"),
        (vec!["verify-iso", "exception", "--carrier", "2", "--bound", "3"], 0, "verified"),
        (vec!["verify-monad", "writermin:n=2", "--set-size", "2", "--bound", "3"], 0, "verified"),
        (vec!["verify-categorical", "identity"], 0, "verified"),
        (vec!["equiv", "multiset", "multiset"], 0, "equivalent"),
        (vec!["models", "nope", "--carrier", "2"], 2, "usage"),
    ];
    for (args, want, verdict) in cases {
        let (c, v) = json(&args);
        assert_eq!(c, want, "{args:?}");
        assert_eq!(v["format"], "semifree-lab/1", "{args:?}");
        assert_eq!(v["verdict"], verdict, "{args:?}");
        assert!(v["items"].is_array() && v["metadata"].is_object(), "{args:?}");
    }
}

#[test]
fn iso_counts_for_exceptions() {
    let (_, v) = json(&["verify-iso", "exception:K=k", "--carrier", "2"]);
    assert_eq!(v["items"][0]["model_count"], 4);
    assert_eq!(v["items"][0]["brute_force_count"], 4);
}

#[test]
fn files_and_proof_lifting() {
    let theory = scratch("monoid.theory", "theory M\n  op e : 0\n  op mul : 2\n  eq mul(e, x) = x\n  eq mul(x, e) = x\nend\n");
    let th = theory.to_str().unwrap();
    let (c, v) = json(&["prove", th, "mul(e, mul(e, y)) = y"]);
    assert_eq!(c, 0);
    let proof = scratch("proof.json", &v.to_string());
    let (c, lifted) = json(&["lift-proof", th, proof.to_str().unwrap()]);
    assert_eq!(c, 0);
    assert_eq!(lifted["verdict"], "lifted");
    assert_eq!(lifted["metadata"]["judgment"], "mul(e, mul(e, a(y))) = a(y)");
    let broken = scratch("broken.theory", "theory B\n  op f : 1\n  eq f(x, y) = x\nend\n");
    let out = run(&["semifree", broken.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("broken.theory:3:"));
}

#[test]
fn output_is_deterministic() {
    let commands: [&[&str]; 5] = [
        &["--json", "semifree", "finiteset", "--simplify"],
        &["models", "writermin:n=2", "--carrier", "2"],
        &["--json", "countermodel", "list", "mul(x, y) = mul(y, x)"],
        &["verify-categorical", "multiset", "--seed-order", "canonical"],
        &["--json", "equiv", "identity", "identity"],
    ];
    for args in commands {
        let (a, b) = (run(args), run(args));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(code(&a), code(&b));
    }
}
