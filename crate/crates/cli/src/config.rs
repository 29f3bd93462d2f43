// SPDX-License-Identifier: Apache-2.0

//! Line-oriented `key = value` run files.
//!
//! ```text
//! # comments run to end of line
//! budget.preset = best-case
//! budget.xi5 = 0.972
//! squeezing.squeezing_db = -3.73
//! squeezing.anti_squeezing_db = 6.9
//! sweep.key = gain.g
//! sweep.from = 0.8
//! sweep.to = 1.2
//! sweep.steps = 9
//! expect.sigma_v_x_db = 3.5
//! expect.sigma_v_x_db.tol = 0.1
//! ```

use std::collections::HashSet;

use cvtele_core::epr::SqueezingParams;
use cvtele_core::phasejitter::PhaseJitter;
use cvtele_core::teleporter::{EfficiencyBudget, GainSettings};
use cvtele_core::units::CoherentAmplitude;

use crate::presets::budgets;
use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub line: usize,
}

pub fn parse(text: &str) -> Result<Vec<Entry>, CliError> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let Some((key, value)) = body.split_once('=') else {
            return Err(CliError::parse(line, "expected key = value"));
        };
        let key = key.trim();
        let value = value.trim();
        let valid = !key.is_empty()
            && key
                .chars()
                .all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_' || c == '.');
        if !valid {
            return Err(CliError::parse(line, format!("invalid key '{key}'")));
        }
        if value.is_empty() {
            return Err(CliError::parse(line, format!("missing value for '{key}'")));
        }
        if !seen.insert(key.to_string()) {
            return Err(CliError::parse(line, format!("duplicate key '{key}'")));
        }
        out.push(Entry {
            key: key.to_string(),
            value: value.to_string(),
            line,
        });
    }
    Ok(out)
}

/// Mutable parameter bundle the keys write into.
#[derive(Debug, Clone, PartialEq)]
pub struct Params {
    pub budget: EfficiencyBudget,
    pub squeezing_db: f64,
    pub anti_squeezing_db: f64,
    pub g_x: f64,
    pub g_p: f64,
    pub jitter_deg: [f64; 4],
    pub input_power: f64,
    pub input_phase_deg: f64,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            budget: EfficiencyBudget::ideal(),
            squeezing_db: 0.0,
            anti_squeezing_db: 0.0,
            g_x: 1.0,
            g_p: 1.0,
            jitter_deg: [0.0; 4],
            input_power: 0.0,
            input_phase_deg: 0.0,
        }
    }
}

impl Params {
    pub fn squeezing(&self) -> cvtele_core::Result<SqueezingParams> {
        SqueezingParams::from_db(self.squeezing_db, self.anti_squeezing_db)
    }

    pub fn gains(&self) -> GainSettings {
        GainSettings::from_normalized(self.g_x, self.g_p, &self.budget)
    }

    pub fn jitter(&self) -> cvtele_core::Result<Option<PhaseJitter>> {
        let [e, ax, ap, b] = self.jitter_deg;
        let j = PhaseJitter::from_degrees(e, ax, ap, b)?;
        Ok((!j.is_zero()).then_some(j))
    }

    pub fn input(&self) -> cvtele_core::Result<CoherentAmplitude> {
        CoherentAmplitude::new(self.input_power, self.input_phase_deg.to_radians())
    }

    /// Set one numeric parameter. Returns `false` for an unknown key.
    pub fn set(&mut self, key: &str, v: f64) -> bool {
        let b = &mut self.budget;
        match key {
            "budget.xi1" => b.xi1 = v,
            "budget.xi2" => b.xi2 = v,
            "budget.xi3" => b.xi3 = v,
            "budget.xi4" => b.xi4 = v,
            "budget.xi5" => b.xi5 = v,
            "budget.xi_alice" => {
                b.xi2 = v;
                b.xi3 = v;
            }
            "budget.xi_epr" => b.xi_epr = v,
            "budget.alpha_ax" => b.alpha_ax = v,
            "budget.alpha_ap" => b.alpha_ap = v,
            "budget.alpha_v" => b.alpha_v = v,
            "budget.alpha" => {
                b.alpha_ax = v;
                b.alpha_ap = v;
                b.alpha_v = v;
            }
            "budget.r_b" => b.r_b = v,
            "budget.t_b" => b.t_b = v,
            "budget.bob_reflectivity" => *b = b.with_bob_reflectivity(v),
            "squeezing.squeezing_db" => self.squeezing_db = v,
            "squeezing.anti_squeezing_db" => self.anti_squeezing_db = v,
            "squeezing.pure_db" => {
                self.squeezing_db = -v.abs();
                self.anti_squeezing_db = v.abs();
            }
            "gain.g" => {
                self.g_x = v;
                self.g_p = v;
            }
            "gain.g_x" => self.g_x = v,
            "gain.g_p" => self.g_p = v,
            "jitter.theta_e_deg" => self.jitter_deg[0] = v,
            "jitter.theta_ax_deg" => self.jitter_deg[1] = v,
            "jitter.theta_ap_deg" => self.jitter_deg[2] = v,
            "jitter.theta_b_deg" => self.jitter_deg[3] = v,
            "input.power" => self.input_power = v,
            "input.power_db" => self.input_power = 10f64.powf(v / 10.0),
            "input.phase_deg" => self.input_phase_deg = v,
            _ => return false,
        }
        true
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub key: String,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
}

impl Sweep {
    pub fn values(&self) -> Vec<f64> {
        if self.steps <= 1 {
            return vec![self.from];
        }
        (0..self.steps)
            .map(|i| self.from + (self.to - self.from) * i as f64 / (self.steps - 1) as f64)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expectation {
    pub column: String,
    pub value: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunFile {
    pub base: Params,
    pub sweep: Option<Sweep>,
    pub expectations: Vec<Expectation>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
}

fn number(e: &Entry) -> Result<f64, CliError> {
    e.value
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| CliError::parse(e.line, format!("'{}' is not a finite number", e.value)))
}

fn integer(e: &Entry) -> Result<u64, CliError> {
    e.value.replace('_', "").parse::<u64>().map_err(|_| {
        CliError::parse(
            e.line,
            format!("'{}' is not a non-negative integer", e.value),
        )
    })
}

impl RunFile {
    pub fn from_text(text: &str) -> Result<Self, CliError> {
        let entries = parse(text)?;
        let mut base = Params::default();
        if let Some(e) = entries.iter().find(|e| e.key == "budget.preset") {
            base.budget = budgets::by_name(&e.value).ok_or_else(|| {
                CliError::parse(
                    e.line,
                    format!(
                        "unknown budget preset '{}' (known: {})",
                        e.value,
                        budgets::NAMES.join(", ")
                    ),
                )
            })?;
        }
        let mut sweep_key = None;
        let (mut from, mut to, mut steps) = (None, None, None);
        let mut expectations: Vec<Expectation> = Vec::new();
        let mut tolerances = Vec::new();
        let (mut samples, mut seed) = (None, None);
        for e in &entries {
            match e.key.as_str() {
                "budget.preset" => {}
                "sweep.key" => {
                    if !Params::default().set(&e.value, 0.0) {
                        return Err(CliError::parse(
                            e.line,
                            format!("cannot sweep unknown key '{}'", e.value),
                        ));
                    }
                    sweep_key = Some(e.value.clone());
                }
                "sweep.from" => from = Some(number(e)?),
                "sweep.to" => to = Some(number(e)?),
                "sweep.steps" => steps = Some(integer(e)? as usize),
                "run.samples" => samples = Some(integer(e)? as usize),
                "run.seed" => seed = Some(integer(e)?),
                k if k.starts_with("expect.") => {
                    let rest = &k["expect.".len()..];
                    if let Some(col) = rest.strip_suffix(".tol") {
                        tolerances.push((col.to_string(), number(e)?, e.line));
                    } else {
                        expectations.push(Expectation {
                            column: rest.to_string(),
                            value: number(e)?,
                            tolerance: 0.01,
                        });
                    }
                }
                k => {
                    let v = number(e)?;
                    if !base.set(k, v) {
                        return Err(CliError::parse(e.line, format!("unknown key '{k}'")));
                    }
                }
            }
        }
        for (col, tol, line) in tolerances {
            let Some(x) = expectations.iter_mut().find(|x| x.column == col) else {
                return Err(CliError::parse(
                    line,
                    format!("tolerance for '{col}' without an expected value"),
                ));
            };
            x.tolerance = tol;
        }
        let sweep = match (sweep_key, from, to, steps) {
            (None, None, None, None) => None,
            (Some(key), Some(from), Some(to), steps) => Some(Sweep {
                key,
                from,
                to,
                steps: steps.unwrap_or(11),
            }),
            _ => {
                let line = entries
                    .iter()
                    .find(|e| e.key.starts_with("sweep."))
                    .map_or(0, |e| e.line);
                return Err(CliError::parse(
                    line,
                    "a sweep needs sweep.key, sweep.from and sweep.to",
                ));
            }
        };
        Ok(Self {
            base,
            sweep,
            expectations,
            samples,
            seed,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sections_and_comments() {
        let r = RunFile::from_text(
            "# demo\nbudget.preset = best-case\nbudget.xi5=0.972 # override\n\ngain.g = 1.1\nsweep.key = squeezing.pure_db\nsweep.from=0\nsweep.to=6\nsweep.steps=4\nexpect.fidelity=0.5\nexpect.fidelity.tol=0.2\n",
        )
        .unwrap();
        assert_eq!(r.base.budget.xi5, 0.972);
        assert_eq!(r.base.budget.xi1, 0.986);
        assert_eq!(r.base.g_x, 1.1);
        assert_eq!(r.sweep.unwrap().values(), vec![0.0, 2.0, 4.0, 6.0]);
        assert_eq!(r.expectations[0].tolerance, 0.2);
    }

    #[test]
    fn errors_name_the_line() {
        let cases = [
            "gain.g = 1\nnot a pair\n",
            "gain.g = 1\nbudget.bogus = 2\n",
            "gain.g = 1\ngain.g_x = abc\n",
            "gain.g = 1\ngain.g = 2\n",
            "x=1\nBad.Key = 1\n",
        ];
        for text in cases {
            match RunFile::from_text(text) {
                Err(CliError::Parse { line, .. }) => assert_eq!(line, 2, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }
}
