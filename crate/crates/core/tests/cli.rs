//! Command-line behaviour: exit codes and report files.

use phi6_kinks::experiments::{read_report, ScenarioConfig, SUMMARY_FILE, TRAJECTORY_FILE, CSV_HEADER};
use std::path::Path;
use std::process::Command;

fn phi6() -> Command {
    Command::new(env!("CARGO_BIN_EXE_phi6"))
}

fn write_config(dir: &Path, cfg: &ScenarioConfig) -> std::path::PathBuf {
    let path = dir.join("scenario.json");
    std::fs::write(&path, cfg.to_json().unwrap()).unwrap();
    path
}

fn quick_config() -> ScenarioConfig {
    let mut cfg = ScenarioConfig::symmetric_pair(12.0, 0.05, 0.1, 0.04, 10.0, 0.0, "quick").unwrap();
    cfg.frame_cadence = 10;
    cfg
}

#[test]
fn run_then_verify_passes() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), &quick_config());
    let out = dir.path().join("report");
    let status = phi6().args(["run", "--config"]).arg(&config).arg("--out").arg(&out).output().unwrap();
    let stdout = String::from_utf8_lossy(&status.stdout);
    assert_eq!(status.status.code(), Some(0), "{stdout}");
    assert!(stdout.contains("PASS orbital_stability"));
    let csv = std::fs::read_to_string(out.join(TRAJECTORY_FILE)).unwrap();
    assert_eq!(csv.lines().next(), Some(CSV_HEADER));
    assert!(out.join(SUMMARY_FILE).exists());
    assert_eq!(read_report(&out).unwrap().rows.len(), 26);

    let verify = phi6().args(["verify", "--report"]).arg(&out).output().unwrap();
    assert_eq!(verify.status.code(), Some(0));
}

#[test]
fn overrides_change_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), &quick_config());
    let out = dir.path().join("short");
    let status = phi6()
        .args(["run", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&out)
        .args(["--t-end", "2", "--dx", "0.05"])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(0));
    let report = read_report(&out).unwrap();
    assert!((report.rows.last().unwrap().t - 2.0).abs() < 1e-9);
}

#[test]
fn tampered_report_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), &quick_config());
    let out = dir.path().join("report");
    assert_eq!(phi6().args(["run", "--config"]).arg(&config).arg("--out").arg(&out).output().unwrap().status.code(), Some(0));
    let path = out.join(SUMMARY_FILE);
    let mut summary: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    summary["epsilon"] = serde_json::json!(1e-12);
    std::fs::write(&path, summary.to_string()).unwrap();
    let verify = phi6().args(["verify", "--report"]).arg(&out).output().unwrap();
    assert_eq!(verify.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&verify.stdout).contains("FAIL"));
}

#[test]
fn invalid_input_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"grid":{"x0":0,"dx":0.1,"n":10},"t_end":1}"#).unwrap();
    let status = phi6().args(["run", "--config"]).arg(&bad).output().unwrap().status;
    assert_eq!(status.code(), Some(2));
    let missing = phi6().args(["verify", "--report"]).arg(dir.path().join("nope")).output().unwrap().status;
    assert_eq!(missing.code(), Some(2));
}

#[test]
fn suite_writes_loadable_configs() {
    let dir = tempfile::tempdir().unwrap();
    let status = phi6().args(["suite", "--out"]).arg(dir.path()).output().unwrap().status;
    assert_eq!(status.code(), Some(0));
    let mut count = 0;
    for entry in std::fs::read_dir(dir.path()).unwrap() {
        ScenarioConfig::load(&entry.unwrap().path()).unwrap();
        count += 1;
    }
    assert_eq!(count, 7);
}

#[test]
fn shipped_scenarios_match_default_suite() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios");
    for cfg in phi6_kinks::experiments::default_suite(0.05, 0.02).unwrap() {
        let shipped = ScenarioConfig::load(&root.join(format!("{}.json", cfg.seed_label))).unwrap();
        assert_eq!(shipped, cfg);
    }
}
