use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn seqpe(args: &[&str], out: &Path) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_seqpe"));
    cmd.args(args);
    if args[0] != "verify" {
        cmd.arg("--out-dir").arg(out);
    }
    cmd.env_remove("SEQPE_OUTPUT_DIR")
        .output()
        .expect("binary runs")
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn scan_gains(csv: &str, metric: &str) -> Vec<(usize, f64)> {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').collect::<Vec<_>>())
        .filter(|f| f[1] == "SE-QPE" && f[2] == metric)
        .map(|f| (f[0].parse().unwrap(), f[4].parse().unwrap()))
        .collect()
}

#[test]
fn build_reports_qubit_budgets() {
    let dir = TempDir::new().unwrap();
    let out = seqpe(&["build", "--variant", "cat-se-qpe"], dir.path());
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(
        json(&dir.path().join("metrics.json"))["metrics"]["qubits"],
        16
    );
    let text = std::fs::read_to_string(dir.path().join("circuit.txt")).unwrap();
    assert_eq!(
        seqpe_core::circuit::Circuit::from_text(&text)
            .unwrap()
            .n_qubits(),
        16
    );

    assert!(seqpe(&["build", "--policy", "ggggg", "--cat"], dir.path())
        .status
        .success());
    assert_eq!(
        json(&dir.path().join("metrics.json"))["metrics"]["qubits"],
        16
    );
    assert!(seqpe(&["build", "--variant", "qpe"], dir.path())
        .status
        .success());
    assert_eq!(
        json(&dir.path().join("metrics.json"))["metrics"]["qubits"],
        9
    );
}

#[test]
fn build_rejects_bad_policies() {
    let dir = TempDir::new().unwrap();
    for policy in ["", "ccgx", "cgg"] {
        let out = seqpe(&["build", "--policy", policy], dir.path());
        assert_eq!(out.status.code(), Some(1), "policy {policy:?}");
    }
    assert_eq!(
        seqpe(&["build", "--variant", "nope"], dir.path())
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn config_file_with_overrides_and_unknown_keys() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(
        &cfg,
        r#"{"experiment": {"m": 6, "tau": 8.0, "variant": "se-qpe"}}"#,
    )
    .unwrap();
    let out = seqpe(&["simulate", "--config", cfg.to_str().unwrap()], dir.path());
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stats = json(&dir.path().join("stats.json"));
    assert_eq!(stats["energy"].as_f64(), Some(-0.233165));
    assert_eq!(stats["modal"], "010011");
    assert_eq!(stats["qubits"], 14);

    let out = seqpe(
        &[
            "simulate",
            "--config",
            cfg.to_str().unwrap(),
            "--m",
            "5",
            "--tau",
            "10",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    assert_eq!(
        json(&dir.path().join("stats.json"))["energy"].as_f64(),
        Some(-0.235619)
    );

    std::fs::write(&cfg, r#"{"experiment": {"m": 5, "shots_typo": 3}}"#).unwrap();
    assert_eq!(
        seqpe(&["simulate", "--config", cfg.to_str().unwrap()], dir.path())
            .status
            .code(),
        Some(1)
    );
    std::fs::write(&cfg, r#"{"experiment": {}, "extra": 1}"#).unwrap();
    assert_eq!(
        seqpe(&["build", "--config", cfg.to_str().unwrap()], dir.path())
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn seeded_simulation_is_byte_identical() {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    let args = [
        "simulate",
        "--variant",
        "cat-se-qpe-mr",
        "--shots",
        "400",
        "--seed",
        "9",
        "--p2",
        "0.01",
        "--pm",
        "0.01",
    ];
    assert!(seqpe(&args, a.path()).status.success());
    assert!(seqpe(&args, b.path()).status.success());
    for f in ["records.csv", "distribution.csv", "stats.json"] {
        let x = std::fs::read(a.path().join(f)).unwrap();
        let y = std::fs::read(b.path().join(f)).unwrap();
        assert_eq!(x, y, "{f}");
    }
    let stats = json(&a.path().join("stats.json"));
    assert!(stats["retention"].as_f64().unwrap() < 1.0);
}

#[test]
fn output_dir_from_environment() {
    let dir = TempDir::new().unwrap();
    let target = dir.path().join("env-out");
    let out = Command::new(env!("CARGO_BIN_EXE_seqpe"))
        .args(["build", "--m", "3"])
        .env("SEQPE_OUTPUT_DIR", &target)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(target.join("metrics.json").exists());
}

#[test]
fn invalid_noise_is_a_validation_error() {
    let dir = TempDir::new().unwrap();
    assert_eq!(
        seqpe(&["simulate", "--p2", "1.5", "--shots", "10"], dir.path())
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        seqpe(&["simulate", "--p2", "0.1"], dir.path())
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        seqpe(&["simulate", "--m", "30"], dir.path()).status.code(),
        Some(1)
    );
}

#[test]
fn synthetic_sweep_approaches_two_thirds_monotonically() {
    let dir = TempDir::new().unwrap();
    let out = seqpe(&["scan"], dir.path());
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = std::fs::read_to_string(dir.path().join("scan.csv")).unwrap();
    assert_eq!(
        csv.lines().next(),
        Some("n,method,metric,total,gain_vs_qpe")
    );
    let g = scan_gains(&csv, "cx_count");
    assert_eq!(g.first().map(|p| p.0), Some(4));
    assert_eq!(g.last().map(|p| p.0), Some(30));
    let dist: Vec<f64> = g.iter().map(|p| (p.1 - 2.0 / 3.0).abs()).collect();
    assert!(
        dist.windows(2).all(|w| w[1] <= w[0]),
        "CX-count ratios {:?}",
        g.iter().map(|p| p.1).collect::<Vec<_>>()
    );
}

#[test]
fn synthetic_sweep_ratios_settle_near_two_thirds_from_six_orbitals() {
    let dir = TempDir::new().unwrap();
    assert!(seqpe(
        &["scan", "--ns", "6,8,10,12,14,16,18,20,22,24,26,28,30"],
        dir.path()
    )
    .status
    .success());
    let csv = std::fs::read_to_string(dir.path().join("scan.csv")).unwrap();
    let g = scan_gains(&csv, "cx_count");
    assert!(g.windows(2).all(|w| w[1].1 <= w[0].1));
    assert!((g.last().unwrap().1 / (2.0 / 3.0) - 1.0).abs() < 0.01);
}

#[test]
fn spin_block_sweep_asymptotes() {
    let dir = TempDir::new().unwrap();
    assert!(seqpe(&["scan", "--ns", "30", "--spin-block"], dir.path())
        .status
        .success());
    let csv = std::fs::read_to_string(dir.path().join("scan.csv")).unwrap();
    let at = |m: &str| scan_gains(&csv, m)[0].1;
    assert!(
        (at("cx_count") / 0.6 - 1.0).abs() < 0.05,
        "{}",
        at("cx_count")
    );
    assert!(
        (at("rz_count") / (2.0 / 3.0) - 1.0).abs() < 0.05,
        "{}",
        at("rz_count")
    );
    assert!(
        (at("rz_depth") / (1.0 / 3.0) - 1.0).abs() < 0.05,
        "{}",
        at("rz_depth")
    );
    assert!(
        (at("cx_depth") / (2.0 / 30.0) - 1.0).abs() < 0.10,
        "cx_depth gain {}",
        at("cx_depth")
    );
}

#[test]
fn scan_rejects_empty_factor_lists() {
    let dir = TempDir::new().unwrap();
    assert_eq!(
        seqpe(&["scan", "--ns", "6", "--l", "0"], dir.path())
            .status
            .code(),
        Some(1)
    );
    let spec = dir.path().join("df.json");
    std::fs::write(&spec, r#"{"n": 2, "alphas": [0.1, 0.2], "betas": []}"#).unwrap();
    assert_eq!(
        seqpe(&["scan", "--spec", spec.to_str().unwrap()], dir.path())
            .status
            .code(),
        Some(1)
    );
    std::fs::write(
        &spec,
        r#"{"n": 2, "alphas": [0.3, -0.2], "betas": [[[0, 0.01], [0.01, 0]]]}"#,
    )
    .unwrap();
    let out = seqpe(&["scan", "--spec", spec.to_str().unwrap()], dir.path());
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(json(&dir.path().join("scan.json"))[0]["n"], 2);
}

#[test]
fn verify_lists_and_selects_checks() {
    let dir = TempDir::new().unwrap();
    let out = seqpe(&["verify", "--list"], dir.path());
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 13);

    let out = seqpe(&["verify", "--id", "1", "--id", "10"], dir.path());
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout).to_string();
    assert_eq!(
        text.lines().filter(|l| l.contains(" PASS ")).count(),
        2,
        "{text}"
    );

    assert_eq!(
        seqpe(&["verify", "--id", "99"], dir.path()).status.code(),
        Some(1)
    );
}

#[test]
fn perturbed_constant_fails_ground_energy_check() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("verify.json");
    std::fs::write(&cfg, r#"{"params": {"beta2": 0.11}}"#).unwrap();
    let out = seqpe(
        &["verify", "--config", cfg.to_str().unwrap(), "--id", "1"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stdout).contains(" FAIL "));
}

#[test]
fn usage_errors_exit_with_validation_code() {
    let dir = TempDir::new().unwrap();
    assert_eq!(
        seqpe(&["simulate", "--shots", "many"], dir.path())
            .status
            .code(),
        Some(1)
    );
    let help = Command::new(env!("CARGO_BIN_EXE_seqpe"))
        .arg("--help")
        .output()
        .unwrap();
    assert!(help.status.success());
}
