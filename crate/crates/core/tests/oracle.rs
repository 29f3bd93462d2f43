// SPDX-License-Identifier: Apache-2.0

use cvtele_core::epr::SqueezingParams;
use cvtele_core::oracle::{simulate_chain, ChainConfig};
use cvtele_core::phasejitter::{victor_variance_jitter, PhaseJitter};
use cvtele_core::teleporter::{victor_variance, EfficiencyBudget, GainSettings, Quadrature};

fn config(samples: usize) -> ChainConfig {
    let e = EfficiencyBudget::best_case();
    ChainConfig::new(
        SqueezingParams::from_db(-3.0, 6.0).unwrap(),
        e,
        GainSettings::calibrated(&e),
        samples,
        42,
    )
}

#[test]
fn standard_error_scales_as_inverse_root_n() {
    let se: Vec<f64> = [10_000, 100_000, 1_000_000]
        .iter()
        .map(|n| simulate_chain(&config(*n)).unwrap().sigma_v_x.std_error)
        .collect();
    for w in se.windows(2) {
        let ratio = w[0] / w[1];
        assert!((ratio - 10f64.sqrt()).abs() < 0.3, "ratio {ratio}");
    }
}

#[test]
fn nonideal_classical_point() {
    let e = EfficiencyBudget::best_case();
    let c = ChainConfig::new(
        SqueezingParams::VACUUM,
        e,
        GainSettings::calibrated(&e),
        1_000_000,
        3,
    );
    let est = simulate_chain(&c).unwrap();
    let want = victor_variance(
        &SqueezingParams::VACUUM,
        &e,
        &GainSettings::calibrated(&e),
        Quadrature::X,
    )
    .unwrap()
    .value();
    assert!((10.0 * want.log10() - 4.84).abs() < 0.02);
    assert!(
        est.sigma_v_x.z_score(want) < 3.0,
        "{:?} vs {want}",
        est.sigma_v_x
    );
}

#[test]
fn epr_lock_jitter_matches_expansion() {
    let s = SqueezingParams::from_db(-3.0, 7.0).unwrap();
    let e = EfficiencyBudget::ideal();
    let j = PhaseJitter::from_degrees(6.0, 0.0, 0.0, 0.0).unwrap();
    let c = ChainConfig::new(s, e, GainSettings::calibrated(&e), 1_000_000, 8).with_jitter(j);
    let est = simulate_chain(&c).unwrap();
    for (got, q) in [
        (est.sigma_v_x, Quadrature::X),
        (est.sigma_v_p, Quadrature::P),
    ] {
        let want = victor_variance_jitter(&s, &j, q).value();
        assert!(got.z_score(want) < 3.0, "{q:?}: {got:?} vs {want}");
        assert!((got.value - want).abs() / want < 0.005);
    }
}

#[test]
fn bit_identical_reruns() {
    let a = simulate_chain(&config(200_000)).unwrap();
    let b = simulate_chain(&config(200_000)).unwrap();
    assert_eq!(a.sigma_v_x.value.to_bits(), b.sigma_v_x.value.to_bits());
    assert_eq!(a, b);
}
