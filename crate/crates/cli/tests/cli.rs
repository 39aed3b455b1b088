use std::path::Path;
use std::process::Command;

use majlab_cli::check::{holds_from_columns, CheckKind};
use majlab_cli::sweep::{run_sweep, SweepConfig, CSV_HEADER};
use majlab_core::matrix_file::{parse_matrix_file, MatrixFileError, ParsedMatrix};
use majlab_core::{DenseMatrix, Error};

fn majlab() -> Command {
    Command::new(env!("CARGO_BIN_EXE_majlab"))
}

fn parse_list(field: &str) -> Vec<f64> {
    if field.is_empty() {
        Vec::new()
    } else {
        field.split(';').map(|v| v.parse().unwrap()).collect()
    }
}

/// Re-derives every `holds` flag from the other columns.
fn assert_recomputable(path: &Path, tol: f64) -> usize {
    let mut reader = csv::Reader::from_path(path).unwrap();
    assert_eq!(
        reader.headers().unwrap().iter().collect::<Vec<_>>(),
        CSV_HEADER
    );
    let mut rows = 0;
    for rec in reader.records() {
        let rec = rec.unwrap();
        let lhs = parse_list(&rec[5]);
        let rhs = parse_list(&rec[6]);
        let min_slack: f64 = rec[7].parse().unwrap();
        let holds: bool = rec[8].parse().unwrap();
        assert_eq!(
            holds,
            holds_from_columns(&lhs, &rhs, min_slack, tol),
            "{rec:?}"
        );
        rows += 1;
    }
    rows
}

#[test]
fn problem2_at_p1_is_an_equality() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p1.csv");
    let mut config = SweepConfig::new(CheckKind::Problem2, vec![1], 10, 3);
    config.p_grid = vec![1.0];
    let summary = run_sweep(&config, &out).unwrap();
    assert_eq!((summary.total, summary.held, summary.failed), (10, 10, 0));
    assert!(summary.min_slack.abs() <= 1e-12);
    assert_eq!(assert_recomputable(&out, config.tol), 10);
}

#[test]
fn problem2_grid_sweep_has_no_failures() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p2.csv");
    let mut config = SweepConfig::new(CheckKind::Problem2, (2..=8).collect(), 100, 17);
    config.p_grid = vec![0.25, 0.5, 1.0, 2.0, 3.0, 5.0];
    let summary = run_sweep(&config, &out).unwrap();
    assert_eq!(summary.total, 7 * 6 * 100);
    assert_eq!(summary.failed, 0, "{summary:?}");
    assert_eq!(assert_recomputable(&out, config.tol), summary.total);
}

#[test]
fn gt_chain_sweep_has_no_failures() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("gt.csv");
    let mut config = SweepConfig::new(CheckKind::GtChain, vec![2, 4], 100, 5);
    config.nu_grid = vec![1.0, 0.5, 0.25];
    let summary = run_sweep(&config, &out).unwrap();
    assert_eq!((summary.total, summary.failed), (600, 0));
    assert_eq!(assert_recomputable(&out, config.tol), 600);
    let text = std::fs::read_to_string(&out).unwrap();
    let first = text.lines().nth(1).unwrap();
    // Chain terms go in lhs, rhs stays empty.
    let fields: Vec<&str> = first.split(',').collect();
    assert_eq!(fields[5].split(';').count(), 4);
    assert_eq!(fields[6], "");
    assert!(!text.contains('\r'));
}

#[test]
fn every_check_sweeps_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    for check in [
        CheckKind::Problem2,
        CheckKind::Conjecture1,
        CheckKind::Theorem1Majorization,
        CheckKind::ProofChain,
        CheckKind::GtChain,
        CheckKind::KyFan,
        CheckKind::SymmetricKyFan,
        CheckKind::P2Elementary,
        CheckKind::GtLimitProbe,
    ] {
        let mut config = SweepConfig::new(check, vec![1, 3], 20, 8);
        config.p_grid = vec![0.5, 3.0];
        config.nu_grid = vec![1.0, 0.1, 0.01];
        let out = dir.path().join(format!("{}.csv", check.name()));
        let summary = run_sweep(&config, &out).unwrap();
        assert_eq!(summary.failed, 0, "{check:?}: {summary:?}");
        assert_eq!(assert_recomputable(&out, config.tol), summary.total);
    }
}

#[test]
fn rank_deficient_and_commuting_ensembles() {
    let dir = tempfile::tempdir().unwrap();
    let config: SweepConfig = serde_json::from_str(
        r#"{"check":"problem2","dims":[4],"p_grid":[1.0,3.0],"trials_per_cell":30,
            "generator":{"kind":"rank-deficient-psd","rank":2},"seed":1}"#,
    )
    .unwrap();
    assert_eq!(
        run_sweep(&config, dir.path().join("r.csv")).unwrap().failed,
        0
    );

    let config: SweepConfig = serde_json::from_str(
        r#"{"check":"problem2","dims":[3],"p_grid":[3.0],"trials_per_cell":30,
            "generator":{"kind":"commuting-psd-pair"},"seed":2}"#,
    )
    .unwrap();
    let summary = run_sweep(&config, dir.path().join("c.csv")).unwrap();
    assert_eq!(summary.failed, 0);
    assert!(summary.min_slack.abs() < 1e-9, "{summary:?}");
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

#[test]
fn matrix_file_examples() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.json");
    write(
        &good,
        r#"{"n":2,"kind":"psd","entries":[[[1,0],[0,0]],[[0,0],[2,0]]]}"#,
    );
    let ParsedMatrix::Psd(p) = parse_matrix_file(&good).unwrap() else {
        panic!("expected psd")
    };
    assert_eq!(
        p.as_dense(),
        &DenseMatrix::from_real_diagonal(&[1.0, 2.0]).unwrap()
    );

    let asym = dir.path().join("asym.json");
    write(
        &asym,
        r#"{"n":2,"kind":"hermitian","entries":[[[1,0],[1,0]],[[0,0],[1,0]]]}"#,
    );
    let err = parse_matrix_file(&asym).unwrap_err();
    assert!(
        matches!(err, MatrixFileError::Invalid(Error::NotHermitian { .. })),
        "{err}"
    );

    let indefinite = dir.path().join("indef.json");
    write(
        &indefinite,
        r#"{"n":2,"kind":"psd","entries":[[[1,0],[0,0]],[[0,0],[-1,0]]]}"#,
    );
    let err = parse_matrix_file(&indefinite).unwrap_err();
    assert!(
        matches!(err, MatrixFileError::Invalid(Error::NotPsd { .. })),
        "{err}"
    );
}

#[test]
fn verify_on_files_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("t.json");
    let s = dir.path().join("s.json");
    write(
        &t,
        r#"{"n":2,"kind":"psd","entries":[[[1,0],[0,0]],[[0,0],[2,0]]]}"#,
    );
    write(
        &s,
        r#"{"n":2,"kind":"psd","entries":[[[0.5,0],[0.5,0]],[[0.5,0],[0.5,0]]]}"#,
    );

    let out = majlab()
        .args(["verify", "--check", "problem2", "--p", "2", "--a"])
        .arg(&t)
        .arg("--b")
        .arg(&s)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(
        &row[..5],
        ["problem2", "2", "2.0000000000000000e0", "0", "0"]
    );
    let lhs: f64 = row[5].parse().unwrap();
    let rhs: f64 = row[6].parse().unwrap();
    assert!(
        (lhs - 35.75).abs() < 1e-12 && (rhs - 40.25).abs() < 1e-12,
        "{row:?}"
    );
    assert_eq!(row[8], "true");

    // An invalid file is an error, not a failed check.
    let bad = dir.path().join("bad.json");
    write(
        &bad,
        r#"{"n":2,"kind":"psd","entries":[[[1,0],[0,0]],[[0,0],[-1,0]]]}"#,
    );
    let out = majlab()
        .args(["verify", "--check", "problem2", "--p", "2", "--a"])
        .arg(&bad)
        .arg("--b")
        .arg(&s)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("eigenvalue"));
}

#[test]
fn failing_check_exits_nonzero() {
    // At p = 1 the sides agree only to rounding, so a tolerance far below
    // machine precision turns the equality into a failure.
    let out = majlab()
        .args([
            "sweep", "--check", "problem2", "--n", "3", "--p", "1", "--trials", "5", "--tol",
            "1e-300",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains(",false,"));

    let out = majlab()
        .args([
            "sweep", "--check", "problem2", "--n", "3", "--p", "1", "--trials", "5",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn sweep_command_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.json");
    write(
        &cfg,
        r#"{"check":"gt-chain","dims":[2,3],"nu_grid":[0.5],"trials_per_cell":15,"seed":4}"#,
    );
    let run = |name: &str, threads: &str| {
        let out = dir.path().join(name);
        let status = majlab()
            .env("THREADS", threads)
            .args(["sweep", "--config"])
            .arg(&cfg)
            .arg("--out")
            .arg(&out)
            .status()
            .unwrap();
        assert!(status.success());
        std::fs::read(out).unwrap()
    };
    assert_eq!(run("a.csv", "1"), run("b.csv", "4"));
}

#[test]
fn search_command_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let status = majlab()
        .args([
            "search",
            "--check",
            "problem2",
            "--p",
            "2",
            "--n",
            "2",
            "--restarts",
            "3",
            "--max-evals",
            "300",
            "--out",
        ])
        .arg(dir.path())
        .status()
        .unwrap();
    assert!(status.success());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("search.json")).unwrap())
            .unwrap();
    assert_eq!(report["eval_count"], 900);
    assert_eq!(report["violated"], false);
    assert_eq!(report["config"]["target"], "problem2");
    assert_eq!(report["witness_t"]["kind"], "psd");
}

#[test]
fn usage_errors() {
    let out = majlab()
        .args(["sweep", "--check", "problem2", "--n", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "missing p grid");
    let out = majlab()
        .args(["verify", "--check", "gt-chain"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "missing nu");
    let out = majlab().args(["demo"]).output().unwrap();
    assert!(out.status.success());
}
