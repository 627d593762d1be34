//! End-to-end runs of the `isoforge` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn isoforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isoforge"))
        .args(args)
        .env_remove("ISOFORGE_BUDGET")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field<'a>(text: &'a str, key: &str) -> Option<&'a str> {
    text.lines().find_map(|l| l.strip_prefix(key)?.strip_prefix('='))
}

#[test]
fn rigidify_then_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let metric = dir.path().join("s3.metric");
    let metric = metric.to_str().unwrap();
    for scheme in ["direct", "paper"] {
        let o = isoforge(&["--action", &data("s3_left.action"), "--scheme", scheme, "--out", metric, "--verify", "rigidify"]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        let text = stdout(&o);
        assert_eq!(field(&text, "exact"), Some("true"));
        assert_eq!(field(&text, "verified"), Some("true"));
        assert_eq!(field(&text, "corridor_ok"), Some("true"));
        let v = isoforge(&["--metric", metric, "--expect-order", "6", "verify"]);
        assert_eq!(v.status.code(), Some(0), "{}", stdout(&v));
        assert_eq!(field(&stdout(&v), "order"), Some("6"));
        let wrong = isoforge(&["--metric", metric, "--expect-order", "12", "verify"]);
        assert_eq!(wrong.status.code(), Some(1));
    }
}

#[test]
fn output_is_deterministic() {
    let args = ["--group", "zoo:dihedral:4", "--seed", "7", "rigidify"];
    let a = isoforge(&args);
    let b = isoforge(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    let args = ["--points", "4", "--trials", "20", "--seed", "3", "density"];
    assert_eq!(stdout(&isoforge(&args)), stdout(&isoforge(&args)));
}

#[test]
fn classify_reports_the_case() {
    for (name, case) in [("zoo:sym:3", "A"), ("zoo:cyclic:4", "B"), ("zoo:quaternion", "C")] {
        let o = isoforge(&["--group", name, "classify"]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(field(&stdout(&o), "case"), Some(case), "{name}");
    }
    let o = isoforge(&["--group", &data("s3.group"), "classify"]);
    assert_eq!(field(&stdout(&o), "case"), Some("A"));
}

#[test]
fn exit_codes() {
    assert_eq!(isoforge(&["--help"]).status.code(), Some(0));
    assert_eq!(isoforge(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(isoforge(&["classify"]).status.code(), Some(3));
    assert_eq!(isoforge(&["--group", "zoo:nope", "classify"]).status.code(), Some(1));
    let o = isoforge(&["--epsilon=-1", "--group", "zoo:sym:3", "rigidify"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("--epsilon"));
    let o = isoforge(&["--budget", "1", "--group", "zoo:sym:4", "hull"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).starts_with("error="));
}

#[test]
fn budget_from_environment() {
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_isoforge"));
        c.env_remove("ISOFORGE_BUDGET");
        if let Some(v) = env {
            c.env("ISOFORGE_BUDGET", v);
        }
        if let Some(v) = flag {
            c.args(["--budget", v]);
        }
        c.args(["--group", "zoo:quaternion", "classify"]).output().unwrap().status.code()
    };
    assert_eq!(run(None, None), Some(0));
    assert_eq!(run(Some("1"), None), Some(2));
    assert_eq!(run(Some("1"), Some("10000000")), Some(0));
    assert_eq!(run(None, Some("1")), Some(2));
}

#[test]
fn verify_rejects_an_invalid_metric() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.metric");
    std::fs::write(&path, "metric 3\n1 5\n1\n").unwrap();
    let o = isoforge(&["--metric", path.to_str().unwrap(), "verify"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(field(&stdout(&o), "error").is_some());
}
