// SPDX-License-Identifier: Apache-2.0

//! Unit conventions and elementary linear-optics primitives.
//!
//! Every variance in this crate is expressed in vacuum units: the quadrature
//! variance of the vacuum state is exactly `1` (Wigner convention with
//! `x = a + a†`). Under this convention the classical teleportation limit is
//! three units, i.e. 4.77 dB. Values are stored linear and only converted to
//! decibels for presentation.

use std::f64::consts::{PI, TAU};
use std::fmt;

use crate::error::{check_positive, check_unit_interval, Error, Result};

/// `10·log10(v)`. Fails for non-positive input.
pub fn to_db(value: f64) -> Result<f64> {
    if value > 0.0 {
        Ok(10.0 * value.log10())
    } else {
        Err(Error::domain(
            "value",
            value,
            "dB conversion needs a positive value",
        ))
    }
}

pub fn from_db(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Quadrature variance in vacuum units (vacuum = 1).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct QuadratureVariance(f64);

impl QuadratureVariance {
    pub const VACUUM: QuadratureVariance = QuadratureVariance(1.0);

    pub fn new(value: f64) -> Result<Self> {
        check_positive("variance", value).map(Self)
    }

    pub fn from_db(db: f64) -> Self {
        Self(from_db(db))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn db(self) -> f64 {
        10.0 * self.0.log10()
    }
}

impl fmt::Display for QuadratureVariance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.4} ({:+.3} dB)", self.0, self.db())
    }
}

/// Photocurrent noise power relative to the vacuum level of the detector.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct SpectralDensity(f64);

impl SpectralDensity {
    pub const VACUUM: SpectralDensity = SpectralDensity(1.0);

    pub fn new(value: f64) -> Result<Self> {
        if value >= 0.0 && value.is_finite() {
            Ok(Self(value))
        } else {
            Err(Error::domain(
                "spectral density",
                value,
                "must be non-negative",
            ))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn db(self) -> Result<f64> {
        to_db(self.0)
    }
}

/// Coherent amplitude of a field.
///
/// `power` is the signal power a unit-efficiency homodyne detector records
/// at the aligned phase, in vacuum units; the quadrature means are
/// `(√power·cos φ, √power·sin φ)`. In photon-number units this is
/// `power = 4|α|²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentAmplitude {
    power: f64,
    phase: f64,
}

impl CoherentAmplitude {
    pub const VACUUM: CoherentAmplitude = CoherentAmplitude {
        power: 0.0,
        phase: 0.0,
    };

    pub fn new(power: f64, phase: f64) -> Result<Self> {
        if !(power >= 0.0 && power.is_finite()) {
            return Err(Error::domain("power", power, "must be non-negative"));
        }
        if !phase.is_finite() {
            return Err(Error::domain("phase", phase, "must be finite"));
        }
        Ok(Self {
            power,
            phase: phase.rem_euclid(TAU),
        })
    }

    /// Construct from the two quadrature means.
    pub fn from_quadratures(x: f64, p: f64) -> Self {
        let phase = if x == 0.0 && p == 0.0 {
            0.0
        } else {
            p.atan2(x)
        };
        Self {
            power: x * x + p * p,
            phase: phase.rem_euclid(TAU),
        }
    }

    pub fn power(&self) -> f64 {
        self.power
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn quadratures(&self) -> (f64, f64) {
        let a = self.power.sqrt();
        (a * self.phase.cos(), a * self.phase.sin())
    }

    /// `|α|²` in photon-number units for the displacement between two amplitudes.
    pub fn photon_distance_sq(&self, other: &CoherentAmplitude) -> f64 {
        let (x1, p1) = self.quadratures();
        let (x2, p2) = other.quadratures();
        ((x1 - x2).powi(2) + (p1 - p2).powi(2)) / 4.0
    }

    /// Scale the field amplitude (not the power) by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let (x, p) = self.quadratures();
        Self::from_quadratures(x * factor, p * factor)
    }
}

/// Mix a mode with vacuum through a beamsplitter of amplitude transmission `t`.
///
/// `v_out = t²·v_in + (1 − t²)`.
pub fn loss_channel(v_in: f64, t: f64) -> Result<f64> {
    let t = check_unit_interval("amplitude transmission", t)?;
    let t2 = t * t;
    Ok(t2 * v_in + (1.0 - t2))
}

/// Undo [`loss_channel`]: the input variance that would produce `v_out`.
pub fn invert_loss_channel(v_out: f64, t: f64) -> Result<f64> {
    let t = check_unit_interval("amplitude transmission", t)?;
    if t == 0.0 {
        return Err(Error::domain(
            "amplitude transmission",
            t,
            "cannot invert total loss",
        ));
    }
    let t2 = t * t;
    Ok((v_out - (1.0 - t2)) / t2)
}

/// Correlation time `1/(2π·HWHM)` of a cavity with the given linewidth.
pub fn correlation_time(linewidth_hwhm_hz: f64) -> Result<f64> {
    let w = check_positive("linewidth", linewidth_hwhm_hz)?;
    Ok(1.0 / (2.0 * PI * w))
}
