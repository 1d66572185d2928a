//! End-to-end checks of the command-line surface: exit codes, report files,
//! path exports.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_verify"))
}

fn model_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../models")
        .join(name)
}

#[test]
fn formal_suite_exits_zero() {
    let out = bin()
        .args(["--suites", "formal", "--cutoff", "5", "--seed", "7"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("[PASS] formal"));
}

#[test]
fn missing_model_file_is_a_config_error() {
    let out = bin()
        .args(["--suites", "s3", "--model", "/nonexistent/model.json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn model_suites_without_model_are_config_errors() {
    let out = bin().args(["--suites", "jacobi"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_model_is_a_config_error() {
    let dir = std::env::temp_dir().join("ioa-cli-test-bad");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.json");
    std::fs::write(&path, "{\"colors\": \"nope\"}").unwrap();
    let out = bin()
        .args(["--suites", "jacobi", "--model", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_suite_is_a_config_error() {
    let out = bin().args(["--suites", "everything"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn s3_run_on_shipped_model_writes_report() {
    let dir = std::env::temp_dir().join("ioa-cli-test-report");
    std::fs::create_dir_all(&dir).unwrap();
    let report = dir.join("report.json");
    let out = bin()
        .args([
            "--suites",
            "s3",
            "--model",
            model_path("abelian_n4.json").to_str().unwrap(),
            "--cutoff",
            "6",
            "--mode",
            "exact",
            "--report",
            report.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&report).unwrap();
    let json: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(json["summary"]["fail"], 0);
    assert_eq!(json["config"]["mode"], "exact");
}

#[test]
fn reports_are_stable_across_runs() {
    let run = || {
        let out = bin()
            .args(["--suites", "formal", "--cutoff", "4", "--seed", "9"])
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
        String::from_utf8(out.stdout).unwrap()
    };
    assert_eq!(run(), run());
}

#[test]
fn dump_paths_writes_csv() {
    let dir = std::env::temp_dir().join("ioa-cli-test-paths");
    let _ = std::fs::remove_dir_all(&dir);
    let out = bin()
        .args([
            "--suites",
            "paths",
            "--dump-paths",
            dir.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    for name in ["gamma.csv", "sigma.csv"] {
        let text = std::fs::read_to_string(dir.join(name)).unwrap();
        assert!(text.starts_with("t,re_z1,im_z1,re_z2,im_z2"));
        assert!(text.lines().count() > 100);
    }
}

#[test]
fn float_mode_runs_shipped_synthetic_model() {
    let out = bin()
        .args([
            "--suites",
            "branches,moore-seiberg",
            "--model",
            model_path("synthetic_example.json").to_str().unwrap(),
            "--mode",
            "float",
            "--tolerance",
            "1e-9",
            "--cutoff",
            "5",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn bad_path_params_rejected() {
    let out = bin()
        .args(["--suites", "paths", "--path-params", "1,2,3,4,5,6,7,8"])
        .output()
        .unwrap();
    // a0 > b0 fails for (1,2)
    assert_eq!(out.status.code(), Some(2));
}
