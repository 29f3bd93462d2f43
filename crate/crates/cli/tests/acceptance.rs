// SPDX-License-Identifier: Apache-2.0

//! One PASS/FAIL line per acceptance criterion. Exits non-zero on any failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use cvtele_cli::presets::{fidelity_anchor_values, property_counts, victor_squeezing_chain};
use cvtele_cli::{run_target, Report, RunOptions};
use cvtele_core::epr::SqueezingParams;
use cvtele_core::opo::{back_propagate_to_epr, threshold_for_loss, BliiraTable, OpoParams};
use cvtele_core::teleporter::channel::CancellationModel;
use cvtele_core::teleporter::{
    matched_fidelity, victor_variance, victor_variances, EfficiencyBudget, GainSettings, Quadrature,
};

type Outcome = Result<String, String>;

fn db(v: f64) -> f64 {
    10.0 * v.log10()
}

fn near(name: &str, value: f64, want: f64, tol: f64) -> Outcome {
    if (value - want).abs() <= tol {
        Ok(format!("{name}={value:.4}"))
    } else {
        Err(format!("{name}={value:.6}, want {want}±{tol}"))
    }
}

fn all(parts: Vec<Outcome>) -> Outcome {
    let mut ok = Vec::new();
    let mut bad = Vec::new();
    for p in parts {
        match p {
            Ok(s) => ok.push(s),
            Err(s) => bad.push(s),
        }
    }
    if bad.is_empty() {
        Ok(ok.join(" "))
    } else {
        Err(bad.join("; "))
    }
}

fn preset_checks(r: &Report) -> Outcome {
    let failed: Vec<String> = r
        .checks
        .iter()
        .filter(|c| !c.passed())
        .map(|c| c.to_string())
        .collect();
    if failed.is_empty() {
        Ok(format!("{} preset checks", r.checks.len()))
    } else {
        Err(failed.join("; "))
    }
}

fn preset(name: &str, opts: &RunOptions) -> Outcome {
    run_target(name, opts)
        .map_err(|e| e.to_string())
        .and_then(|r| preset_checks(&r))
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn classical_anchor() -> Outcome {
    let e = EfficiencyBudget::ideal();
    let v = victor_variance(
        &SqueezingParams::VACUUM,
        &e,
        &GainSettings::calibrated(&e),
        Quadrature::X,
    )
    .map_err(err)?
    .value();
    let exact = if v == 3.0 {
        Ok("sigma_v=3 exactly".to_string())
    } else {
        Err(format!("sigma_v={v}"))
    };
    let r = run_target("fidelity-anchors", &RunOptions::default()).map_err(err)?;
    let get = |n: &str| {
        r.find_check(n)
            .map(|c| c.value)
            .ok_or(format!("missing {n}"))
    };
    all(vec![
        exact,
        near("cli_sigma_db", get("classical_sigma_db")?, 4.77, 0.01),
        near("cli_F", get("classical_fidelity")?, 0.5, 0.001),
    ])
}

fn nonideal_point() -> Outcome {
    let e = EfficiencyBudget {
        xi1: 0.986,
        xi2: 0.995,
        xi3: 0.995,
        xi4: 0.988,
        xi5: 0.985,
        alpha_ax: 0.988,
        alpha_ap: 0.988,
        alpha_v: 0.988,
        ..EfficiencyBudget::ideal()
    }
    .with_bob_reflectivity(0.99);
    let (vx, vp) = victor_variances(&SqueezingParams::VACUUM, &e, &GainSettings::calibrated(&e))
        .map_err(err)?;
    all(vec![
        near("sigma_v_db", vx.db(), 4.84, 0.02),
        near("F", matched_fidelity(vx, vp), 0.494, 0.002),
    ])
}

fn fidelity_chain() -> Outcome {
    let a = fidelity_anchor_values().map_err(err)?;
    all(vec![
        near("F", a.measured_fidelity, 0.61, 0.005),
        near("sigma_w_bob_db", db(a.bob_sigma), 3.47, 0.03),
        near("F_B", a.bob_fidelity, 0.62, 0.005),
        near("sigma_w_pred_db", db(a.predicted_sigma), 2.82, 0.05),
        near("F_P", a.predicted_fidelity, 0.69, 0.005),
    ])
}

fn back_propagation() -> Outcome {
    let detected = SqueezingParams::from_db(-3.73, 6.9).map_err(err)?;
    let b = back_propagate_to_epr(&detected, &victor_squeezing_chain(), 0.985).map_err(err)?;
    all(vec![
        near("squeezing_db", b.squeezing_db(), -3.97, 0.05),
        near("anti_squeezing_db", b.anti_squeezing_db(), 7.0, 0.1),
    ])
}

fn opo_formulas() -> Outcome {
    let o = OpoParams {
        l_passive: 0.02,
        bliira: BliiraTable::none(),
        ..OpoParams::measured()
    };
    let th = o.threshold(0.0);
    let quarter = o.parametric_gain(th / 4.0).map_err(err)?;
    let exact = if quarter == 4.0 {
        Ok("G(Pt/4)=4".to_string())
    } else {
        Err(format!("G(Pt/4)={quarter}"))
    };
    let curve: Vec<f64> = (0..1000)
        .map(|k| o.parametric_gain(th * k as f64 / 1000.0).unwrap())
        .collect();
    let mono = if curve.windows(2).all(|w| w[1] > w[0]) {
        Ok("monotone".to_string())
    } else {
        Err("gain not monotone".to_string())
    };
    let near_th = o.parametric_gain(th * (1.0 - 1e-10)).map_err(err)?;
    let diverge = if near_th > 1e9 && o.parametric_gain(th).is_err() {
        Ok("divergent".to_string())
    } else {
        Err(format!("gain near threshold {near_th}"))
    };
    all(vec![
        exact,
        mono,
        diverge,
        near(
            "threshold_mw",
            1e3 * threshold_for_loss(0.10, 0.02, 0.021),
            171.0,
            1.0,
        ),
    ])
}

fn cancellation() -> Outcome {
    let m = CancellationModel::fit(-25.0, 5e3, -20.0).map_err(err)?;
    all(vec![
        near("at_0", m.cancellation_db(0.0).map_err(err)?, -25.0, 1e-9),
        near("at_5k", m.cancellation_db(5e3).map_err(err)?, -20.0, 1e-9),
        near("at_20k", m.cancellation_db(20e3).map_err(err)?, -9.0, 1.0),
    ])
}

fn properties() -> Outcome {
    let counts = property_counts(7, 1000).map_err(err)?;
    let bad: Vec<String> = counts
        .iter()
        .filter(|(_, n, f)| *f > 0 || *n < 1000)
        .map(|(p, n, f)| format!("{p}: {f}/{n} failed"))
        .collect();
    if bad.is_empty() {
        Ok(format!("{} properties x 1000 cases", counts.len()))
    } else {
        Err(bad.join("; "))
    }
}

fn main() -> ExitCode {
    let opts = RunOptions::default();
    let criteria: Vec<(&str, Duration, Box<dyn Fn() -> Outcome>)> = vec![
        (
            "classical anchor",
            Duration::from_secs(1),
            Box::new(classical_anchor),
        ),
        (
            "nonideal classical point",
            Duration::from_secs(1),
            Box::new(nonideal_point),
        ),
        (
            "experimental fidelity chain",
            Duration::from_secs(1),
            Box::new(fidelity_chain),
        ),
        (
            "back-propagation",
            Duration::from_secs(1),
            Box::new(back_propagation),
        ),
        (
            "phase-jitter LO scan",
            Duration::from_secs(1),
            Box::new(move || preset("fig7", &RunOptions::default())),
        ),
        (
            "oracle equivalence",
            Duration::from_secs(120),
            Box::new(move || preset("oracle-equivalence", &opts)),
        ),
        (
            "OPO formulas",
            Duration::from_secs(1),
            Box::new(opo_formulas),
        ),
        (
            "channel cancellation",
            Duration::from_secs(1),
            Box::new(cancellation),
        ),
        (
            "property suite",
            Duration::from_secs(30),
            Box::new(properties),
        ),
    ];
    let mut failures = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = run();
        let elapsed = t.elapsed();
        let outcome = match outcome {
            Ok(d) if elapsed > *budget => Err(format!("{d}; took {elapsed:.2?} > {budget:?}")),
            o => o,
        };
        match outcome {
            Ok(d) => println!("PASS {} {name}: {d} ({elapsed:.2?})", i + 1),
            Err(d) => {
                failures += 1;
                println!("FAIL {} {name}: {d} ({elapsed:.2?})", i + 1);
            }
        }
    }
    println!(
        "{}/{} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
