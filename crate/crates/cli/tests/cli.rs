//! The command line contract: files, exit codes and error JSON.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use entireforge::engine::ConstructionState;
use entireforge::persist::{cert_from_json, cert_to_json, state_from_json, state_to_json};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_entireforge"));
    c.env("SOURCE_DATE_EPOCH", "1700000000").env_remove("ENTIREFORGE_MAX_REFINE");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

/// The JSON error object printed on stderr.
fn error_json(o: &Output) -> serde_json::Value {
    let text = String::from_utf8_lossy(&o.stderr);
    serde_json::from_str(text.lines().last().expect("stderr line")).expect("stderr is JSON")
}

fn construct(dir: &Path, extra: &[&str]) -> Output {
    let out = dir.to_str().unwrap();
    let mut args = vec!["construct", "--steps", "1", "--seed", "1", "--out", out];
    args.extend_from_slice(extra);
    run(&args)
}

fn manifest(dir: &Path) -> String {
    dir.join("manifest.json").to_str().unwrap().to_string()
}

#[test]
fn construct_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let o = construct(dir.path(), &[]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("1/57601"));
    for f in ["manifest.json", "state.json", "cert-step-1.json"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let v = run(&["verify", &manifest(dir.path())]);
    assert_eq!(v.status.code(), Some(0));
    let text = stdout(&v);
    assert!(text.lines().filter(|l| l.starts_with("PASS")).count() >= 15);
    assert!(!text.contains("FAIL"));
    assert!(text.contains("PASS [step 1] (iv) epsilon bound"));
}

#[test]
fn written_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    assert!(construct(dir.path(), &[]).status.success());
    let state = fs::read_to_string(dir.path().join("state.json")).unwrap();
    assert_eq!(state_to_json(&state_from_json(&state).unwrap()), state);
    let cert = fs::read_to_string(dir.path().join("cert-step-1.json")).unwrap();
    assert_eq!(cert_to_json(&cert_from_json(&cert).unwrap()), cert);
}

#[test]
fn output_is_reproducible_across_thread_counts() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    assert!(construct(a.path(), &["--threads", "1"]).status.success());
    assert!(construct(b.path(), &["--threads", "2"]).status.success());
    for f in ["manifest.json", "state.json", "cert-step-1.json"] {
        let x = fs::read(a.path().join(f)).unwrap();
        let y = fs::read(b.path().join(f)).unwrap();
        assert_eq!(x, y, "{f}");
    }
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["construct", "--steps", "0", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_json(&o)["error"], "usage");
    let o = run(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_json(&o)["exit"], 2);
    let o = run(&["eval", "--state", "x.json", "--at", "1/2+", "--width", "1/8"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn io_and_parse_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["verify", &manifest(dir.path())]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(error_json(&o)["error"], "io");

    assert!(construct(dir.path(), &[]).status.success());
    fs::write(dir.path().join("state.json"), "{ not json").unwrap();
    let o = run(&["verify", &manifest(dir.path())]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(error_json(&o)["error"], "parse");
}

#[test]
fn tampered_certificates_fail_verification() {
    let dir = tempfile::tempdir().unwrap();
    assert!(construct(dir.path(), &[]).status.success());
    let path = dir.path().join("cert-step-1.json");
    let cert = fs::read_to_string(&path).unwrap();
    assert!(cert.contains("\"epsilon\": \"16/57601\""));
    fs::write(&path, cert.replace("\"epsilon\": \"16/57601\"", "\"epsilon\": \"32/57601\"")).unwrap();
    let o = run(&["verify", &manifest(dir.path())]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL [step 1] (iv) epsilon bound"));
    assert_eq!(error_json(&o)["error"], "verification");
}

#[test]
fn dropped_factor_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    assert!(construct(dir.path(), &[]).status.success());
    let path = dir.path().join("state.json");
    let mut state = state_from_json(&fs::read_to_string(&path).unwrap()).unwrap();
    state.steps[0].p.0.pop();
    fs::write(&path, state_to_json(&state)).unwrap();
    let o = run(&["verify", &manifest(dir.path())]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL [step 1] P fingerprint"));
}

#[test]
fn eval_encloses_values() {
    let dir = tempfile::tempdir().unwrap();
    let f1 = dir.path().join("f1.json");
    fs::write(&f1, state_to_json(&ConstructionState::init(1).unwrap())).unwrap();
    let o = run(&["eval", "--state", f1.to_str().unwrap(), "--at", "1/2", "--width", "2^-10"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("f_1(1/2) in [1/2, 1/2] + [0/1, 0/1] i"), "{}", stdout(&o));

    assert!(construct(dir.path(), &[]).status.success());
    let state = dir.path().join("state.json");
    let s = state.to_str().unwrap();
    let o = run(&["eval", "--state", s, "--at", "0"]);
    assert!(stdout(&o).starts_with("f_2(0/1) in [0/1, 0/1] + [0/1, 0/1] i"), "{}", stdout(&o));
    // f_2 fixes alpha_2 = (1 + i)/2.
    let o = run(&["eval", "--state", s, "--at", "1/2+1/2 i"]);
    assert!(stdout(&o).starts_with("f_2(1/2+1/2 i) in [1/2, 1/2] + [1/2, 1/2] i"), "{}", stdout(&o));
    let o = run(&["eval", "--state", s, "--at", "3/4-1/3 i", "--width", "1/1000000"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("|f - f_2| <="));
}

#[test]
fn enumerate_lists_the_pattern() {
    let o = run(&["enumerate", "--count", "1"]);
    assert!(o.status.success());
    let rows: Vec<String> = stdout(&o).lines().skip(1).map(String::from).collect();
    assert_eq!(rows.len(), 1);
    assert!(rows[0].contains("zero"));

    let o = run(&["enumerate", "--count", "7"]);
    let rows: Vec<String> = stdout(&o).lines().skip(1).map(String::from).collect();
    assert_eq!(rows.len(), 7);
    let kinds: Vec<&str> = rows.iter().map(|r| r.split_whitespace().nth(1).unwrap()).collect();
    assert_eq!(kinds, ["zero", "pair", "pair", "real", "pair", "pair", "real"]);
    assert!(rows[4..].iter().all(|r| r.contains("< 2")));
    assert!(rows[6].contains("x - 1"));
}
