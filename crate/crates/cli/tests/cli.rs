use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crnpersist"))
        .args(args)
        .env("CRNPERSIST_THREADS", "2")
        .output()
        .expect("spawn crnpersist")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let out = run(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn analyze_example2_is_persistent_and_gac() {
    let path = fixture("example2.crn");
    let report = json(&["analyze", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(report["verdict"], "PersistentAndGAC");
    assert_eq!(report["siphons"][0]["I"], serde_json::json!([1, 2]));
    assert_eq!(report["siphons"][0]["status"]["J"], serde_json::json!([[3, 4]]));
}

#[test]
fn analyze_example3_reports_witness() {
    let path = fixture("example3.crn");
    let report = json(&["analyze", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(report["verdict"], "Inconclusive");
    let status = &report["siphons"][0]["status"];
    assert_eq!(status["kind"], "Unresolved");
    assert!(status["witness"].is_array());
}

#[test]
fn text_output_ends_with_verdict() {
    let path = fixture("example1.crn");
    let out = run(&["analyze", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.trim_end().ends_with("Verdict: PersistentAndGAC"), "{text}");
}

#[test]
fn missing_file_exits_2() {
    let out = run(&["analyze", "/nonexistent/net.crn"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn siphon_overflow_exits_3() {
    let path = fixture("example2.crn");
    let out = run(&["analyze", path.to_str().unwrap(), "--siphon-cap", "2"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn siphons_listing() {
    let path = fixture("example1.crn");
    let out = run(&["siphons", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().next(), Some("{A1}, {A1,A2}"));
}

#[test]
fn structure_summary() {
    let path = fixture("example1.crn");
    let text = stdout(&run(&["structure", path.to_str().unwrap()]));
    assert!(text.contains("deficiency 0"));
    assert!(text.contains("weakly reversible: yes"));
}

#[test]
fn certify_replays_known_certificate() {
    let path = fixture("example2.crn");
    let out = run(&[
        "certify",
        path.to_str().unwrap(),
        "--siphon",
        "A1,A2",
        "--pairs",
        "(3,4)",
        "--eps",
        "1/4",
        "--format",
        "json",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["status"]["verified"], true);
    assert_eq!(report["status"]["certificate"]["c"], serde_json::json!(["2", "1", "2"]));
}

#[test]
fn analyze_output_is_deterministic() {
    let path = fixture("example2.crn");
    let args = ["analyze", path.to_str().unwrap(), "--format", "json"];
    let first = run(&args).stdout;
    for _ in 0..3 {
        assert_eq!(run(&args).stdout, first);
    }
}

#[test]
fn simulate_writes_csv() {
    let path = fixture("example2.crn");
    let out = run(&["simulate", path.to_str().unwrap(), "--x0", "1,1,1", "--t-final", "1"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,x_1,x_2,x_3"));
    assert!(lines.count() > 1);
}
