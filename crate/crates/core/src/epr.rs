// SPDX-License-Identifier: Apache-2.0

//! Two-mode EPR state built from two squeezed vacua on a 50/50 beamsplitter.
//!
//! Sign convention (fixed by [`QuadratureMap`]): beam 1 takes the minus
//! sign on the mode-2 contributions, so at zero lock offset
//! `var(x1 − x2) = 2σ−`, `var(x1 + x2) = 2σ+`, `var(p1 + p2) = 2σ−`, and
//! `var(p1 − p2) = 2σ+`. The x quadratures are correlated and the p
//! quadratures anti-correlated.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};
use crate::units::{from_db, QuadratureVariance};

/// Squeezing (`r_minus`) and anti-squeezing (`r_plus`) exponents of the two
/// equally squeezed beams: `σ− = e^(−2 r_minus)`, `σ+ = e^(2 r_plus)`.
///
/// Mixed states are allowed (`r_plus > r_minus`); `r_plus < r_minus` would
/// violate the uncertainty relation and is rejected.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezingParams {
    r_minus: f64,
    r_plus: f64,
}

impl SqueezingParams {
    pub const VACUUM: SqueezingParams = SqueezingParams {
        r_minus: 0.0,
        r_plus: 0.0,
    };

    pub fn new(r_minus: f64, r_plus: f64) -> Result<Self> {
        if !(r_minus >= 0.0 && r_minus.is_finite()) {
            return Err(Error::domain("r_minus", r_minus, "must be non-negative"));
        }
        if !(r_plus >= 0.0 && r_plus.is_finite()) {
            return Err(Error::domain("r_plus", r_plus, "must be non-negative"));
        }
        // Tolerate round-off from dB conversions of pure states.
        if r_plus < r_minus - 1e-12 {
            return Err(Error::domain(
                "r_plus",
                r_plus,
                "σ+·σ− ≥ 1 requires r_plus ≥ r_minus",
            ));
        }
        Ok(Self {
            r_minus,
            r_plus: r_plus.max(r_minus),
        })
    }

    /// Minimum-uncertainty squeezing with `r_minus = r_plus = r`.
    pub fn pure(r: f64) -> Result<Self> {
        Self::new(r, r)
    }

    pub fn from_variances(sigma_minus: f64, sigma_plus: f64) -> Result<Self> {
        if !(sigma_minus > 0.0 && sigma_minus <= 1.0) {
            return Err(Error::domain("σ−", sigma_minus, "must lie in (0, 1]"));
        }
        if !(sigma_plus >= 1.0 && sigma_plus.is_finite()) {
            return Err(Error::domain("σ+", sigma_plus, "must be at least 1"));
        }
        Self::new(-0.5 * sigma_minus.ln(), 0.5 * sigma_plus.ln())
    }

    /// From dB levels relative to vacuum, e.g. `(-3.0, 7.0)`.
    pub fn from_db(squeezing_db: f64, anti_squeezing_db: f64) -> Result<Self> {
        Self::from_variances(from_db(squeezing_db), from_db(anti_squeezing_db))
    }

    pub fn r_minus(&self) -> f64 {
        self.r_minus
    }

    pub fn r_plus(&self) -> f64 {
        self.r_plus
    }

    pub fn sigma_minus(&self) -> f64 {
        (-2.0 * self.r_minus).exp()
    }

    pub fn sigma_plus(&self) -> f64 {
        (2.0 * self.r_plus).exp()
    }

    pub fn squeezing_db(&self) -> f64 {
        10.0 * self.sigma_minus().log10()
    }

    pub fn anti_squeezing_db(&self) -> f64 {
        10.0 * self.sigma_plus().log10()
    }
}

/// The state leaving the EPR beamsplitter, with a lock offset `theta_e`
/// (radians) away from the ideal π/2 relative phase of the squeezed beams.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EprState {
    pub params: SqueezingParams,
    pub theta_e: f64,
}

/// Sum/difference variances of the two EPR beams.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EprCorrelations {
    pub x_diff: f64,
    pub x_sum: f64,
    pub p_diff: f64,
    pub p_sum: f64,
}

impl EprCorrelations {
    /// `var(x1 − x2)·var(p1 + p2)`; below 4 signals entanglement.
    pub fn witness_product(&self) -> f64 {
        self.x_diff * self.p_sum
    }
}

/// Linear map from the vacuum inputs `(x1⁰, p1⁰, x2⁰, p2⁰)` to the
/// beamsplitter outputs. Rows are `(x1, p1, x2, p2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureMap(pub [[f64; 4]; 4]);

impl QuadratureMap {
    pub const X1: usize = 0;
    pub const P1: usize = 1;
    pub const X2: usize = 2;
    pub const P2: usize = 3;

    /// Variance of `Σ weights[i]·row_i` with unit-variance independent inputs.
    pub fn combination_variance(&self, weights: [f64; 4]) -> f64 {
        (0..4)
            .map(|col| {
                let c: f64 = (0..4).map(|row| weights[row] * self.0[row][col]).sum();
                c * c
            })
            .sum()
    }
}

impl EprState {
    pub fn new(params: SqueezingParams, theta_e: f64) -> Self {
        Self { params, theta_e }
    }

    pub fn locked(params: SqueezingParams) -> Self {
        Self::new(params, 0.0)
    }

    pub fn quadrature_map(&self) -> QuadratureMap {
        let ep = self.params.r_plus.exp();
        let em = (-self.params.r_minus).exp();
        let (s, c) = self.theta_e.sin_cos();
        let h = FRAC_1_SQRT_2;
        // Mode 2 after the lock rotation, in terms of (x2⁰, p2⁰).
        let b_x = [c * em, s * ep];
        let b_p = [-s * em, c * ep];
        let row = |sign: f64, a: [f64; 2], b: [f64; 2]| {
            [h * a[0], h * a[1], sign * h * b[0], sign * h * b[1]]
        };
        QuadratureMap([
            row(-1.0, [ep, 0.0], b_x),
            row(-1.0, [0.0, em], b_p),
            row(1.0, [ep, 0.0], b_x),
            row(1.0, [0.0, em], b_p),
        ])
    }

    fn require_locked(&self) -> Result<()> {
        if self.theta_e == 0.0 {
            Ok(())
        } else {
            Err(Error::domain(
                "theta_e",
                self.theta_e,
                "correlation identities hold only for the locked state",
            ))
        }
    }

    /// Closed-form sum/difference variances; requires `theta_e == 0`.
    pub fn sum_difference_variances(&self) -> Result<EprCorrelations> {
        self.require_locked()?;
        let sm = self.params.sigma_minus();
        let sp = self.params.sigma_plus();
        Ok(EprCorrelations {
            x_diff: 2.0 * sm,
            x_sum: 2.0 * sp,
            p_diff: 2.0 * sp,
            p_sum: 2.0 * sm,
        })
    }

    /// The same variances evaluated from the coefficient map, valid for any `theta_e`.
    pub fn correlations_from_map(&self) -> EprCorrelations {
        let m = self.quadrature_map();
        EprCorrelations {
            x_diff: m.combination_variance([1.0, 0.0, -1.0, 0.0]),
            x_sum: m.combination_variance([1.0, 0.0, 1.0, 0.0]),
            p_diff: m.combination_variance([0.0, 1.0, 0.0, -1.0]),
            p_sum: m.combination_variance([0.0, 1.0, 0.0, 1.0]),
        }
    }

    /// Phase-independent single-beam variance `(σ+ + σ−)/2`; requires `theta_e == 0`.
    pub fn single_beam_variance(&self) -> Result<QuadratureVariance> {
        self.require_locked()?;
        QuadratureVariance::new(0.5 * (self.params.sigma_plus() + self.params.sigma_minus()))
    }

    /// `(var x, var p)` of beam 1 from the coefficient map.
    pub fn beam_variances(&self) -> (f64, f64) {
        let m = self.quadrature_map();
        (
            m.combination_variance([1.0, 0.0, 0.0, 0.0]),
            m.combination_variance([0.0, 1.0, 0.0, 0.0]),
        )
    }
}
