//! Integration tests for the command-line front end (fast paths only; the
//! conformal pipeline is exercised through the acceptance suite).

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_slitmap"))
}

#[test]
fn gen_depth_zero_is_usage_error() {
    let out = bin().args(["gen", "--depth", "0"]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.starts_with("error: usage:"), "stderr: {err}");
    assert_eq!(err.lines().count(), 1, "single-line error expected");
}

#[test]
fn gen_missing_table_is_usage_error() {
    let out = bin()
        .args(["gen", "--depth", "2", "--table", "/nonexistent/table.json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn gen_writes_domain_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("table.json");
    std::fs::write(&table, r#"{"n_max":0,"s_max":9,"entries":[[0,2]]}"#).unwrap();
    let out = bin()
        .args(["gen", "--depth", "1"])
        .arg("--table")
        .arg(&table)
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc = std::fs::read_to_string(dir.path().join("domain.json")).unwrap();
    assert!(doc.contains("\"depth\": 1"));
    let svg = std::fs::read_to_string(dir.path().join("domain.svg")).unwrap();
    assert!(svg.contains("<svg"));
    // One tent: the apex (1/2, 1/2) appears as a path coordinate.
    assert!(svg.contains("<path"));
}

#[test]
fn gen_is_byte_deterministic() {
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    for d in [&d1, &d2] {
        let out = bin()
            .args(["gen", "--depth", "3"])
            .arg("--out")
            .arg(d.path())
            .output()
            .unwrap();
        assert!(out.status.success());
    }
    for name in ["domain.json", "domain.svg"] {
        let a = std::fs::read(d1.path().join(name)).unwrap();
        let b = std::fs::read(d2.path().join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between runs");
    }
}

#[test]
fn analyze_agrees_with_ground_truth() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("table.json");
    std::fs::write(&table, r#"{"n_max":2,"s_max":9,"entries":[[0,2],[2,5]]}"#).unwrap();
    let out = bin()
        .args(["analyze", "--depth", "3"])
        .arg("--table")
        .arg(&table)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("validity: ok"));
    assert!(text.contains("slot 0: decoded=true ground-truth=true"));
    assert!(text.contains("slot 1: decoded=false ground-truth=false"));
    assert!(text.contains("reduction agreement: true"));
}

#[test]
fn analyze_rejects_non_increasing_bcf() {
    let out = bin()
        .args(["analyze", "--depth", "2", "--bcf", "4,3,5,6,7"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("non-decreasing"));
}

#[test]
fn analyze_reports_counterexample_for_zero_table() {
    let out = bin()
        .args(["analyze", "--depth", "2", "--bcf", "0,0,0,0,0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("counterexample"), "stdout: {text}");
}

#[test]
fn enum_emits_deterministic_prefixes() {
    let run = || {
        bin()
            .args(["enum", "--depth", "2", "--count", "6"])
            .output()
            .unwrap()
    };
    let a = run();
    assert!(a.status.success());
    let text = String::from_utf8_lossy(&a.stdout).to_string();
    assert!(text.contains("closed rectangles inside D:"));
    assert!(text.contains("open rectangles meeting X:"));
    let b = run();
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn check_unknown_name_is_usage_error() {
    let out = bin().args(["check", "no-such-check"]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("known:"));
}

#[test]
fn check_gap_identity_passes() {
    let out = bin().args(["check", "gap-identity"]).output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("PASS gap-identity"));
}
