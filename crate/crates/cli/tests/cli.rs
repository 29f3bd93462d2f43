// SPDX-License-Identifier: Apache-2.0

use std::io::Write;
use std::process::{Command, Output};

fn cvtele(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cvtele"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn list_names_required_presets_once() {
    let out = cvtele(&["list"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let names: Vec<&str> = text
        .lines()
        .map(|l| l.split_whitespace().next().unwrap())
        .collect();
    for want in [
        "fig2",
        "fig3",
        "fig4",
        "fig7",
        "opo-gain",
        "fidelity-anchors",
        "fig16-fidelity-vs-pump",
    ] {
        assert_eq!(names.iter().filter(|n| **n == want).count(), 1, "{want}");
    }
}

#[test]
fn every_preset_runs_and_passes() {
    for p in cvtele_cli::catalog() {
        if p.name == "oracle-equivalence" {
            continue;
        }
        let out = cvtele(&["run", p.name]);
        assert!(
            out.status.success(),
            "{}: {}",
            p.name,
            String::from_utf8_lossy(&out.stderr)
        );
        let csv = String::from_utf8(out.stdout).unwrap();
        assert!(!csv.contains('\r'));
        assert!(csv.lines().count() >= 2, "{}", p.name);
    }
}

#[test]
fn fidelity_anchors_report() {
    let out = cvtele(&["run", "fidelity-anchors"]);
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(csv.starts_with("case,sigma_db,fidelity,expected_sigma_db,expected_fidelity\n"));
    let classical = csv.lines().find(|l| l.starts_with("classical,")).unwrap();
    let cols: Vec<f64> = classical
        .split(',')
        .skip(1)
        .map(|c| c.parse().unwrap())
        .collect();
    assert!((cols[0] - 4.77).abs() < 0.01);
    assert!((cols[1] - 0.5).abs() < 0.001);
    let summary = String::from_utf8(out.stderr).unwrap();
    assert!(summary.contains("11/11 checks passed"), "{summary}");
}

#[test]
fn fig7_single_theta() {
    let out = cvtele(&["run", "fig7", "--theta-e", "6"]);
    assert!(out.status.success());
    let csv = String::from_utf8(out.stdout).unwrap();
    assert_eq!(
        csv.lines().next().unwrap(),
        "theta_v_deg,sigma_v_db_theta_e_6"
    );
    assert_eq!(csv.lines().count(), 74);
}

#[test]
fn oracle_columns_are_reproducible() {
    let a = cvtele(&[
        "run",
        "fig2",
        "--oracle",
        "--samples",
        "20000",
        "--seed",
        "5",
    ]);
    let b = cvtele(&[
        "run",
        "fig2",
        "--oracle",
        "--samples",
        "20000",
        "--seed",
        "5",
    ]);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let c = cvtele(&[
        "run",
        "fig2",
        "--oracle",
        "--samples",
        "20000",
        "--seed",
        "6",
    ]);
    assert_ne!(a.stdout, c.stdout);
    assert!(String::from_utf8(a.stdout)
        .unwrap()
        .lines()
        .next()
        .unwrap()
        .contains("mc_victor_ideal_db"));
}

#[test]
fn unknown_scenario_lists_presets() {
    let out = cvtele(&["run", "no-such-thing"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("fig2") && err.contains("property-suite"));
}

#[test]
fn run_file_with_sweep_and_out() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    let mut f = std::fs::File::create(&cfg).unwrap();
    writeln!(
        f,
        "# nonideal classical point\nbudget.preset = best-case\nsweep.key = squeezing.pure_db\nsweep.from = 0\nsweep.to = 6\nsweep.steps = 4\n"
    )
    .unwrap();
    let csv_path = dir.path().join("out.csv");
    let out = cvtele(&[
        "run",
        cfg.to_str().unwrap(),
        "--out",
        csv_path.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(out.stdout.is_empty());
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let mut lines = csv.lines();
    assert!(lines
        .next()
        .unwrap()
        .starts_with("squeezing.pure_db,squeezing_db,"));
    let first: Vec<f64> = lines
        .next()
        .unwrap()
        .split(',')
        .map(|c| c.parse().unwrap())
        .collect();
    assert!((first[3] - 4.84).abs() < 0.02);
    assert_eq!(csv.lines().count(), 5);
}

#[test]
fn run_file_expectations_set_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "expect.sigma_v_x_db = 4.77\n").unwrap();
    assert!(cvtele(&["run", cfg.to_str().unwrap()]).status.success());
    std::fs::write(
        &cfg,
        "expect.sigma_v_x_db = 3.0\nexpect.sigma_v_x_db.tol = 0.1\n",
    )
    .unwrap();
    assert_eq!(
        cvtele(&["run", cfg.to_str().unwrap()]).status.code(),
        Some(1)
    );
}

#[test]
fn malformed_run_file_names_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "gain.g = 1\n\nbudget.xi9 = 0.5\n").unwrap();
    let out = cvtele(&["run", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("line 3"));
}
