// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::SQRT_2;

use crate::error::{check_unit_interval, Error, Result};

/// Which quadrature a detector or channel handles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quadrature {
    X,
    P,
}

impl Quadrature {
    pub const BOTH: [Quadrature; 2] = [Quadrature::X, Quadrature::P];
}

/// Mode-matching visibilities and detector efficiencies of the chain.
///
/// `xi1` input/EPR1 overlap, `xi2`/`xi3` Alice x/p homodyne, `xi4` EPR2 with
/// Bob's displacement beam, `xi5` Victor's homodyne, `xi_epr` the squeezed
/// beams at the EPR beamsplitter. `alpha_*` are photodiode quantum
/// efficiencies (`η = √α`). `r_b`, `t_b` are the amplitude coefficients of
/// Bob's beamsplitter; EPR2 is reflected.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EfficiencyBudget {
    pub xi1: f64,
    pub xi2: f64,
    pub xi3: f64,
    pub xi4: f64,
    pub xi5: f64,
    pub xi_epr: f64,
    pub alpha_ax: f64,
    pub alpha_ap: f64,
    pub alpha_v: f64,
    pub r_b: f64,
    pub t_b: f64,
}

impl EfficiencyBudget {
    /// Unit efficiencies and a perfectly reflecting Bob beamsplitter
    /// (the formal phase-space displacement limit, `t_b → 0`).
    pub fn ideal() -> Self {
        Self {
            xi1: 1.0,
            xi2: 1.0,
            xi3: 1.0,
            xi4: 1.0,
            xi5: 1.0,
            xi_epr: 1.0,
            alpha_ax: 1.0,
            alpha_ap: 1.0,
            alpha_v: 1.0,
            r_b: 1.0,
            t_b: 0.0,
        }
    }

    /// Best measured visibilities with a 99/1 Bob beamsplitter.
    pub fn best_case() -> Self {
        Self {
            xi1: 0.986,
            xi2: 0.995,
            xi3: 0.995,
            xi4: 0.988,
            xi5: 0.985,
            xi_epr: 0.985,
            alpha_ax: 0.988,
            alpha_ap: 0.988,
            alpha_v: 0.988,
            ..Self::ideal()
        }
        .with_bob_reflectivity(0.99)
    }

    /// All five visibilities set to `xi` and all diodes to `alpha`.
    pub fn global(xi: f64, alpha: f64) -> Self {
        Self {
            xi1: xi,
            xi2: xi,
            xi3: xi,
            xi4: xi,
            xi5: xi,
            xi_epr: 1.0,
            alpha_ax: alpha,
            alpha_ap: alpha,
            alpha_v: alpha,
            ..Self::ideal()
        }
        .with_bob_reflectivity(0.99)
    }

    /// Lossless Bob beamsplitter with intensity reflectivity `r_b²`.
    pub fn with_bob_reflectivity(mut self, reflectivity: f64) -> Self {
        self.r_b = reflectivity.sqrt();
        self.t_b = (1.0 - reflectivity).max(0.0).sqrt();
        self
    }

    /// Victor with unit detection efficiency (`ξ5 = η_V = 1`).
    pub fn with_perfect_victor(mut self) -> Self {
        self.xi5 = 1.0;
        self.alpha_v = 1.0;
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_unit_interval("xi1", self.xi1)?;
        check_unit_interval("xi2", self.xi2)?;
        check_unit_interval("xi3", self.xi3)?;
        check_unit_interval("xi4", self.xi4)?;
        check_unit_interval("xi5", self.xi5)?;
        check_unit_interval("xi_epr", self.xi_epr)?;
        check_unit_interval("alpha_ax", self.alpha_ax)?;
        check_unit_interval("alpha_ap", self.alpha_ap)?;
        check_unit_interval("alpha_v", self.alpha_v)?;
        check_unit_interval("r_b", self.r_b)?;
        check_unit_interval("t_b", self.t_b)?;
        let sum = self.r_b * self.r_b + self.t_b * self.t_b;
        if sum > 1.0 + 1e-12 {
            return Err(Error::domain("r_b² + t_b²", sum, "must not exceed 1"));
        }
        Ok(())
    }

    pub fn eta_v(&self) -> f64 {
        self.alpha_v.sqrt()
    }

    /// Alice's homodyne visibility for the quadrature (`ξ2` or `ξ3`).
    pub fn alice_visibility(&self, q: Quadrature) -> f64 {
        match q {
            Quadrature::X => self.xi2,
            Quadrature::P => self.xi3,
        }
    }

    pub fn alice_eta(&self, q: Quadrature) -> f64 {
        match q {
            Quadrature::X => self.alpha_ax.sqrt(),
            Quadrature::P => self.alpha_ap.sqrt(),
        }
    }

    /// Amplitude `r_b·ξ4·ξ5·η_V` with which EPR2 reaches Victor's photocurrent.
    pub fn epr2_to_victor(&self) -> f64 {
        self.r_b * self.xi4 * self.xi5 * self.eta_v()
    }

    /// `ξ·ξ5·η_A·η_V`, the detection product the device gain must compensate.
    pub fn detection_product(&self, q: Quadrature) -> f64 {
        self.alice_visibility(q) * self.xi5 * self.alice_eta(q) * self.eta_v()
    }
}

/// Classical-channel gains.
///
/// `g_x`, `g_p` are normalized so that unity reproduces the input amplitude
/// in Victor's photocurrent; `g_x0`, `g_p0` are the device gains referenced
/// to the point before Bob's beamsplitter, related by
/// `g = (g0/√2)·t_b·ξ·ξ5·η_A·η_V`. With `t_b = 0` the device gains are
/// infinite (only the product `t_b·g0` is physical).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainSettings {
    pub g_x: f64,
    pub g_p: f64,
    pub g_x0: f64,
    pub g_p0: f64,
}

impl GainSettings {
    /// Unit normalized gains for the given budget.
    pub fn calibrated(budget: &EfficiencyBudget) -> Self {
        Self::from_normalized(1.0, 1.0, budget)
    }

    pub fn from_normalized(g_x: f64, g_p: f64, budget: &EfficiencyBudget) -> Self {
        let device = |g: f64, q| SQRT_2 * g / (budget.t_b * budget.detection_product(q));
        Self {
            g_x,
            g_p,
            g_x0: device(g_x, Quadrature::X),
            g_p0: device(g_p, Quadrature::P),
        }
    }

    pub fn from_device(g_x0: f64, g_p0: f64, budget: &EfficiencyBudget) -> Self {
        let norm = |g0: f64, q| g0 / SQRT_2 * budget.t_b * budget.detection_product(q);
        Self {
            g_x: norm(g_x0, Quadrature::X),
            g_p: norm(g_p0, Quadrature::P),
            g_x0,
            g_p0,
        }
    }

    pub fn gain(&self, q: Quadrature) -> f64 {
        match q {
            Quadrature::X => self.g_x,
            Quadrature::P => self.g_p,
        }
    }

    pub fn device_gain(&self, q: Quadrature) -> f64 {
        match q {
            Quadrature::X => self.g_x0,
            Quadrature::P => self.g_p0,
        }
    }

    /// Displacement imprinted on the field leaving Bob's beamsplitter per unit
    /// of Alice's photocurrent, `t_b·g0`. In the `t_b = 0` limit this is taken
    /// from the normalized gain.
    pub fn displacement_per_current(&self, q: Quadrature, budget: &EfficiencyBudget) -> f64 {
        if budget.t_b > 0.0 && self.device_gain(q).is_finite() {
            budget.t_b * self.device_gain(q)
        } else {
            SQRT_2 * self.gain(q) / budget.detection_product(q)
        }
    }

    /// Whether the stored pairs satisfy the normalization identity.
    pub fn is_consistent(&self, budget: &EfficiencyBudget) -> bool {
        if budget.t_b == 0.0 {
            return self.g_x0.is_infinite() && self.g_p0.is_infinite();
        }
        let other = Self::from_device(self.g_x0, self.g_p0, budget);
        (other.g_x - self.g_x).abs() <= 1e-12 * self.g_x.abs().max(1.0)
            && (other.g_p - self.g_p).abs() <= 1e-12 * self.g_p.abs().max(1.0)
    }
}

/// Retune the ideal-chain device gains to compensate Alice's and Victor's
/// detection losses: `g0 → g0/(ξ·ξ5·η_A·η_V)`.
pub fn normalize_gain(budget: &EfficiencyBudget, g0_ideal: f64) -> Result<GainSettings> {
    budget.validate()?;
    for q in Quadrature::BOTH {
        let d = budget.detection_product(q);
        if d <= 0.0 {
            return Err(Error::domain("ξ·ξ5·η_A·η_V", d, "must be positive"));
        }
    }
    let g_x0 = g0_ideal / budget.detection_product(Quadrature::X);
    let g_p0 = g0_ideal / budget.detection_product(Quadrature::P);
    Ok(GainSettings::from_device(g_x0, g_p0, budget))
}
