// SPDX-License-Identifier: Apache-2.0

//! Below-threshold optical parametric oscillator.
//!
//! Threshold `P_t = (T + L)²/(4·E_NL)` and seeded gain
//! `G = 1/(1 − √(P/P_t))²` with a pump-dependent loss `L(P) = L_p + L_b(P)`,
//! where the blue-light-induced absorption `L_b` comes from an empirical
//! table. Squeezing spectra use the standard degenerate-OPO result at the
//! analysis frequency `Ω` for a cavity of half-width `γ`:
//!
//! ```text
//! σ∓(Ω) = 1 ∓ η·4x / ((1 ± x)² + (Ω/γ)²),   x = √(P/P_t)
//! ```
//!
//! with `η` the escape efficiency times the detection chain efficiency.

use std::path::Path;

use crate::epr::SqueezingParams;
use crate::error::{check_positive, check_unit_interval, Error, Result};
use crate::units::{invert_loss_channel, loss_channel};

/// Monotone pump (W) → extra round-trip loss map, linearly interpolated and
/// held constant outside the tabulated range.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BliiraTable {
    points: Vec<(f64, f64)>,
}

impl BliiraTable {
    /// No pump-induced loss.
    pub fn none() -> Self {
        Self::default()
    }

    /// Rises linearly to 1.7% at 155 mW, i.e. about 2% total with 0.3% passive loss.
    pub fn single_pump_default() -> Self {
        Self {
            points: vec![(0.0, 0.0), (0.155, 0.017)],
        }
    }

    pub fn new(mut points: Vec<(f64, f64)>) -> Result<Self> {
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        for (i, &(pump, loss)) in points.iter().enumerate() {
            if !(pump >= 0.0 && pump.is_finite()) {
                return Err(Error::domain("pump", pump, "must be non-negative"));
            }
            if !(0.0..1.0).contains(&loss) {
                return Err(Error::domain("loss", loss, "must lie in [0, 1)"));
            }
            if i > 0 {
                let (prev_pump, prev_loss) = points[i - 1];
                if pump == prev_pump {
                    return Err(Error::domain("pump", pump, "pump values must be distinct"));
                }
                if loss < prev_loss {
                    return Err(Error::domain("loss", loss, "must not decrease with pump"));
                }
            }
        }
        Ok(Self { points })
    }

    /// Parse two whitespace- or comma-separated columns `pump_W loss_fraction`.
    /// Blank lines and `#` comments are ignored.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut points = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let fields: Vec<&str> = body
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|f| !f.is_empty())
                .collect();
            if fields.len() != 2 {
                return Err(Error::Parse {
                    line,
                    message: format!("expected 2 columns, found {}", fields.len()),
                });
            }
            let parse = |f: &str| {
                f.parse::<f64>().map_err(|e| Error::Parse {
                    line,
                    message: format!("'{f}': {e}"),
                })
            };
            points.push((parse(fields[0])?, parse(fields[1])?));
        }
        Self::new(points).map_err(|e| match e {
            Error::Domain { .. } => Error::Parse {
                line: 0,
                message: e.to_string(),
            },
            other => other,
        })
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
            line: 0,
            message: format!("{}: {e}", path.display()),
        })?;
        Self::from_text(&text)
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn loss_at(&self, pump_w: f64) -> f64 {
        match self.points.as_slice() {
            [] => 0.0,
            [(_, l)] => *l,
            pts => {
                let (first, last) = (pts[0], pts[pts.len() - 1]);
                if pump_w <= first.0 {
                    return first.1;
                }
                if pump_w >= last.0 {
                    return last.1;
                }
                let i = pts.partition_point(|&(p, _)| p <= pump_w);
                let (p0, l0) = pts[i - 1];
                let (p1, l1) = pts[i];
                l0 + (l1 - l0) * (pump_w - p0) / (p1 - p0)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OpoParams {
    /// Output-coupler intensity transmission.
    pub t_coupler: f64,
    /// Effective nonlinearity, W⁻¹.
    pub e_nl: f64,
    /// Passive round-trip intensity loss.
    pub l_passive: f64,
    pub bliira: BliiraTable,
    pub linewidth_hwhm: f64,
    pub analysis_freq: f64,
}

impl OpoParams {
    /// The measured device: T = 10%, E_NL = 0.021 W⁻¹, L_p = 0.3%.
    pub fn measured() -> Self {
        Self {
            t_coupler: 0.10,
            e_nl: 0.021,
            l_passive: 0.003,
            bliira: BliiraTable::single_pump_default(),
            linewidth_hwhm: 5.4e6,
            analysis_freq: 1.475e6,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_coupler > 0.0 && self.t_coupler < 1.0) {
            return Err(Error::domain(
                "t_coupler",
                self.t_coupler,
                "must lie in (0, 1)",
            ));
        }
        check_positive("e_nl", self.e_nl)?;
        if !(0.0..1.0).contains(&self.l_passive) {
            return Err(Error::domain(
                "l_passive",
                self.l_passive,
                "must lie in [0, 1)",
            ));
        }
        check_positive("linewidth", self.linewidth_hwhm)?;
        if !(self.analysis_freq >= 0.0) {
            return Err(Error::domain(
                "analysis_freq",
                self.analysis_freq,
                "must be non-negative",
            ));
        }
        Ok(())
    }

    pub fn total_loss(&self, pump_w: f64) -> f64 {
        self.l_passive + self.bliira.loss_at(pump_w)
    }

    /// Threshold with the loss that prevails at `pump_w`.
    pub fn threshold(&self, pump_w: f64) -> f64 {
        threshold_for_loss(self.t_coupler, self.total_loss(pump_w), self.e_nl)
    }

    /// `√(P/P_t)`, the pump parameter. Errors at or above threshold.
    pub fn pump_parameter(&self, pump_w: f64) -> Result<f64> {
        self.validate()?;
        if !(pump_w >= 0.0 && pump_w.is_finite()) {
            return Err(Error::domain("pump", pump_w, "must be non-negative"));
        }
        let threshold_w = self.threshold(pump_w);
        if pump_w >= threshold_w {
            return Err(Error::AboveThreshold {
                pump_w,
                threshold_w,
            });
        }
        Ok((pump_w / threshold_w).sqrt())
    }

    pub fn parametric_gain(&self, pump_w: f64) -> Result<f64> {
        let x = self.pump_parameter(pump_w)?;
        Ok(1.0 / (1.0 - x).powi(2))
    }

    /// `T/(T + L)`.
    pub fn escape_efficiency(&self, pump_w: f64) -> f64 {
        self.t_coupler / (self.t_coupler + self.total_loss(pump_w))
    }

    /// Detected squeezing at the analysis frequency.
    pub fn squeezing_vs_pump(
        &self,
        chain: &DetectionChain,
        pump_w: f64,
    ) -> Result<SqueezingParams> {
        self.squeezing_at(chain, pump_w, self.analysis_freq)
    }

    pub fn squeezing_at(
        &self,
        chain: &DetectionChain,
        pump_w: f64,
        freq_hz: f64,
    ) -> Result<SqueezingParams> {
        chain.validate()?;
        let x = self.pump_parameter(pump_w)?;
        let eta = self.escape_efficiency(pump_w) * chain.efficiency();
        let w2 = (freq_hz / self.linewidth_hwhm).powi(2);
        let sigma_minus = 1.0 - eta * 4.0 * x / ((1.0 + x).powi(2) + w2);
        let sigma_plus = 1.0 + eta * 4.0 * x / ((1.0 - x).powi(2) + w2);
        SqueezingParams::from_variances(sigma_minus, sigma_plus)
    }
}

pub fn threshold_for_loss(t_coupler: f64, loss: f64, e_nl: f64) -> f64 {
    (t_coupler + loss).powi(2) / (4.0 * e_nl)
}

/// Losses between a squeezed beam and the photocurrent that records it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionChain {
    /// Amplitude transmission of the propagation path.
    pub propagation_transmission: f64,
    pub homodyne_visibility: f64,
    pub quantum_efficiency: f64,
}

impl DetectionChain {
    pub fn perfect() -> Self {
        Self {
            propagation_transmission: 1.0,
            homodyne_visibility: 1.0,
            quantum_efficiency: 1.0,
        }
    }

    /// From an intensity propagation loss fraction.
    pub fn with_propagation_loss(loss: f64, visibility: f64, quantum_efficiency: f64) -> Self {
        Self {
            propagation_transmission: (1.0 - loss).max(0.0).sqrt(),
            homodyne_visibility: visibility,
            quantum_efficiency,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_unit_interval("propagation_transmission", self.propagation_transmission)?;
        check_unit_interval("homodyne_visibility", self.homodyne_visibility)?;
        check_unit_interval("quantum_efficiency", self.quantum_efficiency)?;
        Ok(())
    }

    /// Overall amplitude transmission `t·ξ·√α`.
    pub fn amplitude(&self) -> f64 {
        self.propagation_transmission * self.homodyne_visibility * self.quantum_efficiency.sqrt()
    }

    /// Intensity efficiency `t²·ξ²·α`.
    pub fn efficiency(&self) -> f64 {
        self.amplitude().powi(2)
    }

    /// Apply the chain to a squeezed beam.
    pub fn detect(&self, s: &SqueezingParams) -> Result<SqueezingParams> {
        self.validate()?;
        let t = self.amplitude();
        SqueezingParams::from_variances(
            loss_channel(s.sigma_minus(), t)?,
            loss_channel(s.sigma_plus(), t)?,
        )
    }
}

/// Squeezing at the EPR beamsplitter inferred from what Victor detected.
///
/// Victor's detection chain is undone, then the mode mismatch `xi_epr` of the
/// two squeezed beams at the EPR beamsplitter is applied as a loss.
pub fn back_propagate_to_epr(
    detected: &SqueezingParams,
    victor: &DetectionChain,
    xi_epr: f64,
) -> Result<SqueezingParams> {
    victor.validate()?;
    check_unit_interval("xi_epr", xi_epr)?;
    let t = victor.amplitude();
    if t <= 0.0 || xi_epr <= 0.0 {
        return Err(Error::domain("efficiency", t * xi_epr, "must be positive"));
    }
    let sm = invert_loss_channel(detected.sigma_minus(), t)?;
    if sm <= 0.0 {
        return Err(Error::Inconsistent(format!(
            "detected squeezing {:.3} dB exceeds what a chain of efficiency {:.4} can pass",
            detected.squeezing_db(),
            victor.efficiency()
        )));
    }
    let sp = invert_loss_channel(detected.sigma_plus(), t)?;
    let sm = loss_channel(sm, xi_epr)?.min(1.0);
    let sp = loss_channel(sp, xi_epr)?.max(1.0);
    SqueezingParams::from_variances(sm, sp)
}

/// Extra squeezing lost when the crystal is pumped from both directions:
/// about 0.3 dB below 80 mW total pump and 0.5 dB above.
pub fn double_pump_debit_db(total_pump_w: f64) -> f64 {
    if total_pump_w < 0.080 {
        0.3
    } else {
        0.5
    }
}

/// Squeezing level (negative dB) after the double-pump debit.
pub fn double_pumped_squeezing_db(single_pumped_db: f64, total_pump_w: f64) -> f64 {
    single_pumped_db + double_pump_debit_db(total_pump_w)
}
