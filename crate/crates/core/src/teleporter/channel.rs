// SPDX-License-Identifier: Apache-2.0

//! Subtraction quality of the classical channels against EPR2.
//!
//! Two equal-amplitude signals with a relative amplitude mismatch `ε` and a
//! relative delay `τ` are subtracted at RF offset `f`. For small errors the
//! residual power is `ε² + (2π·f·τ)²`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::units::{from_db, to_db};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CancellationModel {
    pub mismatch: f64,
    pub delay_s: f64,
}

impl CancellationModel {
    pub fn new(mismatch: f64, delay_s: f64) -> Result<Self> {
        if !(mismatch >= 0.0 && mismatch.is_finite()) {
            return Err(Error::domain("mismatch", mismatch, "must be non-negative"));
        }
        if !(delay_s >= 0.0 && delay_s.is_finite()) {
            return Err(Error::domain("delay", delay_s, "must be non-negative"));
        }
        Ok(Self { mismatch, delay_s })
    }

    /// Choose `(ε, τ)` so that the model passes through the on-resonance
    /// floor and one measured point at `offset_hz`.
    pub fn fit(floor_db: f64, offset_hz: f64, cancellation_db: f64) -> Result<Self> {
        let floor = from_db(floor_db);
        let at = from_db(cancellation_db);
        if offset_hz <= 0.0 {
            return Err(Error::domain("offset", offset_hz, "must be positive"));
        }
        if at <= floor {
            return Err(Error::domain(
                "cancellation",
                cancellation_db,
                "must be worse than the floor",
            ));
        }
        let phase = (at - floor).sqrt();
        Self::new(floor.sqrt(), phase / (2.0 * PI * offset_hz))
    }

    pub fn residual(&self, offset_hz: f64) -> f64 {
        let phase = 2.0 * PI * offset_hz * self.delay_s;
        self.mismatch * self.mismatch + phase * phase
    }

    pub fn cancellation_db(&self, offset_hz: f64) -> Result<f64> {
        to_db(self.residual(offset_hz))
    }
}

/// Residual power in dB after subtracting the two channels.
pub fn channel_cancellation(mismatch: f64, delay_s: f64, offset_hz: f64) -> Result<f64> {
    CancellationModel::new(mismatch, delay_s)?.cancellation_db(offset_hz)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn static_floor() {
        let db = channel_cancellation(10f64.powf(-1.25), 2.63e-6, 0.0).unwrap();
        assert_relative_eq!(db, -25.0, epsilon = 1e-9);
    }

    #[test]
    fn fitted_model_through_the_five_khz_point() {
        let m = CancellationModel::fit(-25.0, 5e3, -20.0).unwrap();
        assert_relative_eq!(m.delay_s, 2.632e-6, epsilon = 1e-9);
        assert_relative_eq!(m.cancellation_db(5e3).unwrap(), -20.0, epsilon = 1e-9);
        let at20 = m.cancellation_db(20e3).unwrap();
        assert!((at20 + 9.5).abs() < 0.1, "{at20}");
    }

    #[test]
    fn rejects_negative_inputs() {
        assert!(channel_cancellation(-0.1, 1e-6, 0.0).is_err());
        assert!(channel_cancellation(0.1, -1e-6, 0.0).is_err());
        assert!(CancellationModel::fit(-25.0, 5e3, -30.0).is_err());
    }

    #[test]
    fn perfect_subtraction_has_no_finite_db() {
        assert!(channel_cancellation(0.0, 0.0, 1e3).is_err());
    }
}
