// SPDX-License-Identifier: Apache-2.0

//! Browser bindings. Each function returns a flat `Float64Array` of
//! row-major samples so the page can plot without any glue objects.

use wasm_bindgen::prelude::*;

use cvtele_core::epr::SqueezingParams;
use cvtele_core::phasejitter::{victor_lo_scan, PhaseJitter};
use cvtele_core::teleporter::{
    alice_variance, matched_fidelity, victor_variances, EfficiencyBudget, GainSettings, Quadrature,
};

fn grid(from: f64, to: f64, points: usize) -> impl Iterator<Item = f64> {
    let n = points.max(2);
    (0..n).map(move |i| from + (to - from) * i as f64 / (n - 1) as f64)
}

/// Rows of `(squeezing_db, victor_db, alice_db, fidelity)` for pure squeezing
/// from 0 to `max_db`, with every visibility `xi` and diode efficiency `alpha`.
pub fn noise_rows(xi: f64, alpha: f64, max_db: f64, points: usize) -> Result<Vec<f64>, String> {
    let e = EfficiencyBudget::global(xi, alpha);
    let g = GainSettings::calibrated(&e);
    let mut out = Vec::with_capacity(4 * points);
    for sq in grid(0.0, max_db.max(0.0), points) {
        let s = SqueezingParams::from_db(-sq, sq).map_err(|e| e.to_string())?;
        let (vx, vp) = victor_variances(&s, &e, &g).map_err(|e| e.to_string())?;
        let a = alice_variance(&s, &e, Quadrature::X).map_err(|e| e.to_string())?;
        out.extend([sq, vx.db(), a.db(), matched_fidelity(vx, vp)]);
    }
    Ok(out)
}

/// Rows of `(theta_v_deg, victor_db)` over one full LO turn.
pub fn lo_scan_rows(
    theta_e_deg: f64,
    squeezing_db: f64,
    anti_squeezing_db: f64,
    points: usize,
) -> Result<Vec<f64>, String> {
    let s = SqueezingParams::from_db(-squeezing_db.abs(), anti_squeezing_db.abs())
        .map_err(|e| e.to_string())?;
    let j = PhaseJitter::from_degrees(theta_e_deg, 0.0, 0.0, 0.0).map_err(|e| e.to_string())?;
    Ok(grid(0.0, 360.0, points)
        .flat_map(|deg| [deg, victor_lo_scan(&s, &j, deg.to_radians()).db()])
        .collect())
}

/// Rows of `(visibility, fidelity)` for `xi` from 0.8 to 1.
pub fn fidelity_rows(squeezing_db: f64, alpha: f64, points: usize) -> Result<Vec<f64>, String> {
    let s = SqueezingParams::from_db(-squeezing_db.abs(), squeezing_db.abs())
        .map_err(|e| e.to_string())?;
    let mut out = Vec::with_capacity(2 * points);
    for xi in grid(0.8, 1.0, points) {
        let e = EfficiencyBudget::global(xi, alpha);
        let (vx, vp) =
            victor_variances(&s, &e, &GainSettings::calibrated(&e)).map_err(|e| e.to_string())?;
        out.extend([xi, matched_fidelity(vx, vp)]);
    }
    Ok(out)
}

#[wasm_bindgen]
pub fn noise_vs_squeezing(
    xi: f64,
    alpha: f64,
    max_db: f64,
    points: usize,
) -> Result<Vec<f64>, JsError> {
    noise_rows(xi, alpha, max_db, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn lo_scan(
    theta_e_deg: f64,
    squeezing_db: f64,
    anti_squeezing_db: f64,
    points: usize,
) -> Result<Vec<f64>, JsError> {
    lo_scan_rows(theta_e_deg, squeezing_db, anti_squeezing_db, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn fidelity_vs_visibility(
    squeezing_db: f64,
    alpha: f64,
    points: usize,
) -> Result<Vec<f64>, JsError> {
    fidelity_rows(squeezing_db, alpha, points).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_point_in_noise_rows() {
        let rows = noise_rows(1.0, 1.0, 10.0, 11).unwrap();
        assert_eq!(rows.len(), 44);
        // Perfect visibility but r_b² = 0.99 keeps this just above 4.77 dB.
        assert!((rows[1] - 4.79).abs() < 0.03, "{}", rows[1]);
        assert!(rows[4 * 10 + 1] < rows[1]);
    }

    #[test]
    fn lo_scan_has_half_turn_period() {
        let rows = lo_scan_rows(6.0, 3.0, 7.0, 73).unwrap();
        let at = |k: usize| rows[2 * k + 1];
        assert!((at(0) - at(36)).abs() < 1e-12);
        assert!((at(18) - at(54)).abs() < 1e-12);
        assert!(at(0) > at(18));
    }

    #[test]
    fn fidelity_bad_alpha_is_error() {
        assert!(fidelity_rows(6.0, 1.5, 5).is_err());
        let ok = fidelity_rows(6.0, 0.988, 5).unwrap();
        assert!(ok[9] > ok[1]);
    }
}
