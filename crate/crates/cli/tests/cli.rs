use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sphere-csf")).args(args).output().expect("binary runs")
}

fn config_path(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name).display().to_string()
}

#[test]
fn simulate_writes_artifacts_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config_path("circle.json");
    let mut files = Vec::new();
    for sub in ["a", "b"] {
        let out = dir.path().join(sub);
        let o = cli(&["simulate", "--config", &cfg, "--out", out.to_str().unwrap(), "--quiet"]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        assert!(o.stdout.is_empty());
        let run = out.join("circle-pi-3");
        for f in ["manifest.json", "report.json", "trajectory.jsonl"] {
            assert!(run.join(f).exists(), "{f}");
        }
        files.push((fs::read(run.join("trajectory.jsonl")).unwrap(), fs::read(run.join("report.json")).unwrap()));
    }
    assert_eq!(files[0], files[1]);
}

#[test]
fn csv_format_and_seed_override() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = cli(&["graphflow", "--config", &config_path("graphflow.json"), "--out", out, "--format", "csv", "--seed", "9"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("graph-two-modes/manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["config"]["seed"], 9);
    assert!(dir.path().join("graph-two-modes/tables/final_profile.csv").exists());
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    let text = fs::read_to_string(config_path("circle.json")).unwrap().replace("\"dt\": 1e-4", "\"dt\": -1e-4");
    fs::write(&bad, text).unwrap();
    let o = cli(&["simulate", "--config", bad.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("dt"));

    let o = cli(&["spacing", "--config", &config_path("circle.json")]);
    assert_eq!(o.status.code(), Some(2), "kind mismatch");
    let o = cli(&["simulate", "--config", &config_path("circle.json"), "--format", "xml"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_selected_checks() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = cli(&["verify", "--check", "circle-oracle", "--out", out]);
    assert!(o.status.success());
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.lines().any(|l| l.starts_with("circle-oracle") && l.contains("PASS")), "{stdout}");
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("verify/report.json")).unwrap()).unwrap();
    assert_eq!(report["checks"].as_array().unwrap().len(), 1);
}
