use deligne_lab::cli::*;
use deligne_lab::deligne::{IdentityReport, PairingNormResult};
use deligne_lab::output::PolarizationRow;
use std::path::{Path, PathBuf};
use std::process::Command;

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn opts(dir: &Path) -> RunOptions {
    RunOptions {
        out_dir: Some(dir.to_path_buf()),
    }
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("task.json");
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn pairing_config_writes_one_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_file(&config("p1_pairing.json"), &opts(dir.path()));
    assert_eq!(out.exit_code, EXIT_OK, "{}", out.summary);
    let csv = std::fs::read_to_string(dir.path().join("p1_pairing.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], "s_re,s_im,log_norm,boundary_term,integral_term,error_estimate");

    let json = std::fs::read_to_string(dir.path().join("p1_pairing.json")).unwrap();
    let rec: RunRecord<Vec<PairingNormResult>> = serde_json::from_str(&json).unwrap();
    assert_eq!(rec.task, TaskKind::PairingNorm);
    assert!((rec.results[0].log_norm + 0.5).abs() < 1e-7);
}

#[test]
fn reruns_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        assert_eq!(run_file(&config("p1_pairing.json"), &opts(d.path())).exit_code, EXIT_OK);
    }
    for f in ["p1_pairing.csv", "p1_pairing.json"] {
        assert_eq!(
            std::fs::read(a.path().join(f)).unwrap(),
            std::fs::read(b.path().join(f)).unwrap()
        );
    }
}

#[test]
fn degree_mismatch_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_file(&config("bad_degree.json"), &opts(dir.path()));
    assert_eq!(out.exit_code, EXIT_INVALID);
    assert!(out.summary.contains("section0"), "{}", out.summary);
    assert!(out.files.is_empty());
}

#[test]
fn metric_change_passes_its_threshold() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_file(&config("p1_metric_change.json"), &opts(dir.path()));
    assert_eq!(out.exit_code, EXIT_OK, "{}", out.summary);
    let json = std::fs::read_to_string(dir.path().join("p1_metric_change.json")).unwrap();
    let rec: RunRecord<Vec<IdentityReport>> = serde_json::from_str(&json).unwrap();
    // u = -|x0|²/(2‖x‖²) averages to -1/4 on the line
    assert!((rec.results[0].rhs + 0.25).abs() < 1e-8);
}

#[test]
fn exceeded_threshold_exits_four() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(config("p1_metric_change.json"))
        .unwrap()
        .replace("\"threshold\": 1e-6", "\"threshold\": 0");
    let out = run_file(&write_config(dir.path(), &text), &opts(dir.path()));
    assert_eq!(out.exit_code, EXIT_THRESHOLD, "{}", out.summary);
    assert_eq!(out.files.len(), 2);
}

#[test]
fn unknown_fields_and_tasks_are_invalid() {
    let dir = tempfile::tempdir().unwrap();
    for text in [
        r#"{"task": "nope", "payload": {}}"#,
        r#"{"task": "polarization", "payload": {"n": 1}, "extra": 1}"#,
        r#"{"task": "polarization", "payload": {"n": "one"}}"#,
        r#"{"task": "polarization", "payload": {"n": 1, "tuples": [[1, 2, 3]]}}"#,
        r#"{"task": "pairing-norm", "payload": {"input": {"family": "nowhere.json"}, "base_points": [[0, 0]]}}"#,
        r#"{"task": "polarization", "payload": {"n": 1, "tuples": [[1, 2]]}, "output": {"stem": "a/b"}}"#,
    ] {
        let out = run_file(&write_config(dir.path(), text), &opts(dir.path()));
        assert_eq!(out.exit_code, EXIT_INVALID, "{text}: {}", out.summary);
    }
    let out = run_file(&write_config(dir.path(), r#"{"task": "polarization", "payload": {"n": "one"}}"#), &opts(dir.path()));
    assert!(out.summary.contains("payload.n"), "{}", out.summary);
}

#[test]
fn polarization_task_rows() {
    let dir = tempfile::tempdir().unwrap();
    let text = r#"{"task": "polarization",
        "payload": {"n": 2, "grid_radius": 1, "exact": true, "threshold": 0},
        "output": {"stem": "pol"}}"#;
    let out = run_file(&write_config(dir.path(), text), &opts(dir.path()));
    assert_eq!(out.exit_code, EXIT_OK, "{}", out.summary);
    let json = std::fs::read_to_string(dir.path().join("pol.json")).unwrap();
    let rec: RunRecord<Vec<PolarizationRow>> = serde_json::from_str(&json).unwrap();
    assert_eq!(rec.results.len(), 27);
    assert!(rec.results.iter().all(|r| r.defect == 0.0));
}

#[test]
fn family_file_reference() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("line.json"),
        r#"{"form": {"degree": 1, "terms": [{"exp": [0, 0, 1], "coeffs": [[1, 0]]}]},
            "base_domain": {"re_min": -1, "re_max": 1, "im_min": -1, "im_max": 1}}"#,
    )
    .unwrap();
    let text = std::fs::read_to_string(config("p1_pairing.json"))
        .unwrap()
        .replace("\"projective_line\"", "\"line.json\"");
    let out = run_file(&write_config(dir.path(), &text), &opts(dir.path()));
    assert_eq!(out.exit_code, EXIT_OK, "{}", out.summary);
}

#[test]
fn quick_suite_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_named_suite("quick", &opts(dir.path()));
    assert_eq!(out.exit_code, EXIT_OK, "{}", out.summary);
    assert!(dir.path().join("suite-quick.csv").exists());
}

#[test]
fn binary_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bin = env!("CARGO_BIN_EXE_dlab");
    let ok = Command::new(bin)
        .arg("--config")
        .arg(config("p1_pairing.json"))
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("p1_pairing.csv"));

    let bad = Command::new(bin)
        .arg("--config")
        .arg(config("bad_degree.json"))
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("section0"));

    let threads = Command::new(bin)
        .args(["--threads", "0", "--config"])
        .arg(config("p1_pairing.json"))
        .output()
        .unwrap();
    assert_eq!(threads.status.code(), Some(2));

    let missing = Command::new(bin).args(["--config", "/nonexistent.json"]).output().unwrap();
    assert_eq!(missing.status.code(), Some(2));
}
