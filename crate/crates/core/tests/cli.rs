use std::process::Command as Proc;

use roughwave::cli::{self, parse_pairs, Command, ExperimentConfig, EXIT_CERTIFICATE, EXIT_USAGE};

const BIN: &str = env!("CARGO_BIN_EXE_roughwave");

fn config(text: &str) -> ExperimentConfig {
    ExperimentConfig::from_pairs(&parse_pairs(text).unwrap()).unwrap()
}

#[test]
fn monte_carlo_report_is_reproducible() {
    let cfg = config("command = moments\norders = 3\nhorizons = 0.5, 1\nsamples = 65536\nseed = 99\n");
    let a = cli::run(&cfg).unwrap().render(&cfg);
    let b = cli::run(&cfg).unwrap().render(&cfg);
    assert_eq!(a, b);
    let other = config("command = moments\norders = 3\nhorizons = 0.5, 1\nsamples = 65536\nseed = 100\n");
    assert_ne!(a, cli::run(&other).unwrap().render(&other));
}

#[test]
fn binary_writes_identical_files_for_one_seed() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "command = moments\norders = 3\nhorizons = 1\nsamples = 32768\n").unwrap();
    let mut outs = Vec::new();
    for name in ["a.csv", "b.csv"] {
        let out = dir.path().join(name);
        let st = Proc::new(BIN)
            .args(["--config", cfg.to_str().unwrap(), "--seed", "5", "--out", out.to_str().unwrap()])
            .status()
            .unwrap();
        assert!(st.success());
        outs.push(std::fs::read(out).unwrap());
    }
    assert_eq!(outs[0], outs[1]);
}

#[test]
fn csv_records_follow_schema() {
    let cfg = config("command = threshold\nkappas = 1.6, 1.8, 2.0\nhurst_space = 0.3\n");
    let r = cli::run(&cfg).unwrap();
    let csv = r.to_csv();
    let mut lines = csv.lines();
    let header = lines.next().unwrap();
    let width = header.split(',').count();
    let records: Vec<&str> = lines.filter(|l| !l.starts_with('#')).collect();
    assert_eq!(records.len(), 3);
    assert!(records.iter().all(|l| l.split(',').count() == width));
    let verdicts: Vec<&str> = records.iter().map(|l| l.split(',').nth(5).unwrap()).collect();
    assert_eq!(verdicts, ["Divergent", "Divergent", "Convergent"]);
    assert!(r.passed());
    assert!(csv.ends_with('\n'));
}

#[test]
fn json_carries_metadata() {
    let cfg = config("command = validate\nformat = json\nseed = 3\n");
    let r = cli::run(&cfg).unwrap();
    let v: serde_json::Value = serde_json::from_str(&r.to_json(&cfg)).unwrap();
    assert_eq!(v["metadata"]["seed"], 3);
    assert_eq!(v["metadata"]["config"]["command"], "validate");
    assert_eq!(v["metadata"]["artifact_version"], cli::ARTIFACT_VERSION);
    assert!(v["records"].as_array().unwrap().len() >= 6);
}

#[test]
fn usage_errors_exit_nonzero() {
    let st = Proc::new(BIN).args(["frobnicate"]).output().unwrap();
    assert_eq!(st.status.code(), Some(EXIT_USAGE));
    let st = Proc::new(BIN).args(["moments", "--tol", "0.5"]).output().unwrap();
    assert_eq!(st.status.code(), Some(EXIT_USAGE));
    let st = Proc::new(BIN).args(["moments", "--set", "kappa=3"]).output().unwrap();
    assert_eq!(st.status.code(), Some(EXIT_USAGE));
}

#[test]
fn output_directory_comes_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let st = Proc::new(BIN)
        .arg("validate")
        .env(cli::OUT_DIR_ENV, dir.path())
        .status()
        .unwrap();
    assert!(st.success());
    assert!(dir.path().join("validate.csv").exists());
}

#[test]
fn certificate_failure_has_its_own_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("lemmas.csv");
    let st = Proc::new(BIN)
        .args(["lemmas", "--out", out.to_str().unwrap()])
        .status()
        .unwrap();
    let report = std::fs::read_to_string(&out).unwrap();
    let failed = report.lines().any(|l| l.contains(",fail,"));
    assert!(out.exists());
    if failed {
        assert_eq!(st.code(), Some(EXIT_CERTIFICATE));
    } else {
        assert!(st.success());
    }
}

#[test]
fn command_names_round_trip() {
    for c in Command::ALL {
        assert_eq!(c.name().parse::<Command>().unwrap(), c);
    }
}
