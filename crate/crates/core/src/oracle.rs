// SPDX-License-Identifier: Apache-2.0

//! Monte Carlo phase-space oracle.
//!
//! Every vacuum input is drawn as a pair of independent unit-variance
//! Gaussians (the Wigner function of the vacuum in these units) and pushed
//! through the linear chain shot by shot: squeezers, EPR beamsplitter with
//! the lock angle, Alice's beamsplitter and homodynes, the classical
//! channel, Bob's beamsplitter and Victor's homodyne. Each loss or
//! visibility is a beamsplitter with a fresh vacuum port.
//!
//! Shots are split into fixed-size chunks, each with its own ChaCha stream
//! derived from the seed, and the chunk moments are merged in chunk order.
//! The result depends only on the configuration and seed, not on the
//! number of worker threads.

use std::f64::consts::FRAC_1_SQRT_2;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::epr::{EprState, SqueezingParams};
use crate::error::{Error, Result};
use crate::phasejitter::{victor_variance_composed, LockAngles, PhaseJitter};
use crate::teleporter::{
    alice_variance, victor_variance, EfficiencyBudget, GainSettings, Quadrature,
};
use crate::units::CoherentAmplitude;

const CHUNK: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq)]
pub struct ChainConfig {
    pub squeezing: SqueezingParams,
    pub budget: EfficiencyBudget,
    pub gains: GainSettings,
    /// Random lock fluctuations, resampled every shot.
    pub jitter: Option<PhaseJitter>,
    /// Static lock angles added to every draw.
    pub offsets: LockAngles,
    pub input: CoherentAmplitude,
    pub samples: usize,
    pub seed: u64,
}

impl ChainConfig {
    /// Locked chain with vacuum input.
    pub fn new(
        squeezing: SqueezingParams,
        budget: EfficiencyBudget,
        gains: GainSettings,
        samples: usize,
        seed: u64,
    ) -> Self {
        Self {
            squeezing,
            budget,
            gains,
            jitter: None,
            offsets: LockAngles::default(),
            input: CoherentAmplitude::VACUUM,
            samples,
            seed,
        }
    }

    pub fn with_jitter(mut self, jitter: PhaseJitter) -> Self {
        self.jitter = Some(jitter);
        self
    }

    pub fn with_offsets(mut self, offsets: LockAngles) -> Self {
        self.offsets = offsets;
        self
    }

    pub fn with_input(mut self, input: CoherentAmplitude) -> Self {
        self.input = input;
        self
    }

    fn validate(&self) -> Result<()> {
        self.budget.validate()?;
        if self.samples < 2 {
            return Err(Error::domain(
                "samples",
                self.samples as f64,
                "need at least 2 shots",
            ));
        }
        for q in Quadrature::BOTH {
            let d = self.budget.detection_product(q);
            if d <= 0.0 {
                return Err(Error::domain("ξ·ξ5·η_A·η_V", d, "must be positive"));
            }
            let k = self.gains.displacement_per_current(q, &self.budget);
            if !k.is_finite() {
                return Err(Error::domain("displacement gain", k, "must be finite"));
            }
        }
        if let Some(j) = &self.jitter {
            PhaseJitter::new(j.theta_e_rms, j.theta_ax_rms, j.theta_ap_rms, j.theta_b_rms)?;
        }
        Ok(())
    }
}

/// A Monte Carlo estimate and its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
}

impl Estimate {
    /// Distance from `reference` in standard errors.
    pub fn z_score(&self, reference: f64) -> f64 {
        (self.value - reference).abs() / self.std_error
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleEstimate {
    pub sigma_v_x: Estimate,
    pub sigma_v_p: Estimate,
    pub sigma_a_x: Estimate,
    pub sigma_a_p: Estimate,
    /// Mean of Victor's x and p photocurrents.
    pub beta_v_x: Estimate,
    pub beta_v_p: Estimate,
    pub samples: usize,
}

impl OracleEstimate {
    pub fn beta_v(&self) -> CoherentAmplitude {
        CoherentAmplitude::from_quadratures(self.beta_v_x.value, self.beta_v_p.value)
    }
}

/// Streaming central moments up to fourth order, mergeable in any grouping.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: f64,
    mean: f64,
    m2: f64,
    m3: f64,
    m4: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        let n1 = self.n;
        self.n += 1.0;
        let delta = x - self.mean;
        let dn = delta / self.n;
        let dn2 = dn * dn;
        let term = delta * dn * n1;
        self.mean += dn;
        self.m4 += term * dn2 * (self.n * self.n - 3.0 * self.n + 3.0) + 6.0 * dn2 * self.m2
            - 4.0 * dn * self.m3;
        self.m3 += term * dn * (self.n - 2.0) - 3.0 * dn * self.m2;
        self.m2 += term;
    }

    fn merge(self, b: Moments) -> Moments {
        if self.n == 0.0 {
            return b;
        }
        if b.n == 0.0 {
            return self;
        }
        let a = self;
        let n = a.n + b.n;
        let d = b.mean - a.mean;
        let d2 = d * d;
        Moments {
            n,
            mean: a.mean + d * b.n / n,
            m2: a.m2 + b.m2 + d2 * a.n * b.n / n,
            m3: a.m3
                + b.m3
                + d2 * d * a.n * b.n * (a.n - b.n) / (n * n)
                + 3.0 * d * (a.n * b.m2 - b.n * a.m2) / n,
            m4: a.m4
                + b.m4
                + d2 * d2 * a.n * b.n * (a.n * a.n - a.n * b.n + b.n * b.n) / (n * n * n)
                + 6.0 * d2 * (a.n * a.n * b.m2 + b.n * b.n * a.m2) / (n * n)
                + 4.0 * d * (a.n * b.m3 - b.n * a.m3) / n,
        }
    }

    fn variance(&self) -> Estimate {
        let m2 = self.m2 / self.n;
        let m4 = self.m4 / self.n;
        Estimate {
            value: self.m2 / (self.n - 1.0),
            std_error: ((m4 - m2 * m2).max(0.0) / self.n).sqrt(),
        }
    }

    fn mean(&self) -> Estimate {
        Estimate {
            value: self.mean,
            std_error: (self.m2 / (self.n - 1.0) / self.n).sqrt(),
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Accumulator {
    victor_x: Moments,
    victor_p: Moments,
    alice_x: Moments,
    alice_p: Moments,
}

impl Accumulator {
    fn merge(self, o: Accumulator) -> Accumulator {
        Accumulator {
            victor_x: self.victor_x.merge(o.victor_x),
            victor_p: self.victor_p.merge(o.victor_p),
            alice_x: self.alice_x.merge(o.alice_x),
            alice_p: self.alice_p.merge(o.alice_p),
        }
    }
}

/// Per-configuration constants hoisted out of the shot loop.
struct Kernel {
    e_plus: f64,
    e_minus: f64,
    xi1: f64,
    alice_x: f64,
    alice_p: f64,
    xi4: f64,
    r_b: f64,
    t_b: f64,
    extra: f64,
    victor: f64,
    disp_x: f64,
    disp_p: f64,
    input: (f64, f64),
    jitter: Option<PhaseJitter>,
    offsets: LockAngles,
}

impl Kernel {
    fn new(c: &ChainConfig) -> Self {
        let b = &c.budget;
        Self {
            e_plus: c.squeezing.r_plus().exp(),
            e_minus: (-c.squeezing.r_minus()).exp(),
            xi1: b.xi1,
            alice_x: b.xi2 * b.alice_eta(Quadrature::X),
            alice_p: b.xi3 * b.alice_eta(Quadrature::P),
            xi4: b.xi4,
            r_b: b.r_b,
            t_b: b.t_b,
            extra: (1.0 - b.r_b * b.r_b - b.t_b * b.t_b).max(0.0).sqrt(),
            victor: b.xi5 * b.eta_v(),
            disp_x: c.gains.displacement_per_current(Quadrature::X, b),
            disp_p: c.gains.displacement_per_current(Quadrature::P, b),
            input: c.input.quadratures(),
            jitter: c.jitter,
            offsets: c.offsets,
        }
    }

    fn angles<R: Rng>(&self, rng: &mut R) -> LockAngles {
        let o = self.offsets;
        match &self.jitter {
            None => o,
            Some(j) => {
                let d = j.sample(rng);
                LockAngles {
                    theta_e: o.theta_e + d.theta_e,
                    theta_ax: o.theta_ax + d.theta_ax,
                    theta_ap: o.theta_ap + d.theta_ap,
                    theta_b: o.theta_b + d.theta_b,
                }
            }
        }
    }

    /// One shot: `(victor_x, victor_p, alice_x, alice_p)`.
    fn shot<R: Rng>(&self, rng: &mut R) -> [f64; 4] {
        let a = self.angles(rng);
        let mut n = || -> f64 { rng.sample(StandardNormal) };
        let h = FRAC_1_SQRT_2;

        // Squeezed beams: mode 1 squeezed in p, mode 2 in x, then the lock rotation.
        let (ax, ap) = (self.e_plus * n(), self.e_minus * n());
        let (bx0, bp0) = (self.e_minus * n(), self.e_plus * n());
        let (se, ce) = a.theta_e.sin_cos();
        let (bx, bp) = (ce * bx0 + se * bp0, ce * bp0 - se * bx0);

        let (x1, p1) = (h * (ax - bx), h * (ap - bp));
        let (x2, p2) = (h * (ax + bx), h * (ap + bp));

        let attenuate = |x: f64, p: f64, t: f64, n: &mut dyn FnMut() -> f64| {
            let l = (1.0 - t * t).max(0.0).sqrt();
            (t * x + l * n(), t * p + l * n())
        };
        let (x1, p1) = attenuate(x1, p1, self.xi1, &mut n);

        let (xin, pin) = (self.input.0 + n(), self.input.1 + n());
        let (xu, pu) = (h * (xin - x1), h * (pin - p1));
        let (xv, pv) = (h * (xin + x1), h * (pin + p1));

        let (sx, cx) = a.theta_ax.sin_cos();
        let (sp, cp) = a.theta_ap.sin_cos();
        let lx = (1.0 - self.alice_x * self.alice_x).max(0.0).sqrt();
        let lp = (1.0 - self.alice_p * self.alice_p).max(0.0).sqrt();
        let i_x = self.alice_x * (cx * xu + sx * pu) + lx * n();
        let i_p = self.alice_p * (cp * pv - sp * xv) + lp * n();

        let (sb, cb) = a.theta_b.sin_cos();
        let (x2, p2) = (cb * x2 + sb * p2, cb * p2 - sb * x2);
        let (x2, p2) = attenuate(x2, p2, self.xi4, &mut n);
        let mut xo = self.r_b * x2 + self.t_b * n();
        let mut po = self.r_b * p2 + self.t_b * n();
        if self.extra > 0.0 {
            xo += self.extra * n();
            po += self.extra * n();
        }
        xo += self.disp_x * i_x;
        po += self.disp_p * i_p;

        let (xw, pw) = attenuate(xo, po, self.victor, &mut n);
        [xw, pw, i_x, i_p]
    }
}

/// Run the chain for `c.samples` shots.
pub fn simulate_chain(c: &ChainConfig) -> Result<OracleEstimate> {
    c.validate()?;
    let kernel = Kernel::new(c);
    let chunks = c.samples.div_ceil(CHUNK);
    let parts: Vec<Accumulator> = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
            rng.set_stream(k as u64);
            let len = CHUNK.min(c.samples - k * CHUNK);
            let mut acc = Accumulator::default();
            for _ in 0..len {
                let [vx, vp, ax, ap] = kernel.shot(&mut rng);
                acc.victor_x.push(vx);
                acc.victor_p.push(vp);
                acc.alice_x.push(ax);
                acc.alice_p.push(ap);
            }
            acc
        })
        .collect();
    let acc = parts
        .into_iter()
        .fold(Accumulator::default(), Accumulator::merge);
    Ok(OracleEstimate {
        sigma_v_x: acc.victor_x.variance(),
        sigma_v_p: acc.victor_p.variance(),
        sigma_a_x: acc.alice_x.variance(),
        sigma_a_p: acc.alice_p.variance(),
        beta_v_x: acc.victor_x.mean(),
        beta_v_p: acc.victor_p.mean(),
        samples: c.samples,
    })
}

/// Closed-form values the oracle is compared with.
///
/// With jitter or static offsets only Victor's variances have a reference;
/// the jittered Victor value is the approximate composition of the lossy
/// budget with the second-order jitter average.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reference {
    pub sigma_v_x: f64,
    pub sigma_v_p: f64,
    pub sigma_a_x: Option<f64>,
    pub sigma_a_p: Option<f64>,
}

pub fn reference(c: &ChainConfig) -> Result<Reference> {
    let s = &c.squeezing;
    let locked = c.offsets == LockAngles::default();
    match (&c.jitter, locked) {
        (None, true) => Ok(Reference {
            sigma_v_x: victor_variance(s, &c.budget, &c.gains, Quadrature::X)?.value(),
            sigma_v_p: victor_variance(s, &c.budget, &c.gains, Quadrature::P)?.value(),
            sigma_a_x: Some(alice_variance(s, &c.budget, Quadrature::X)?.value()),
            sigma_a_p: Some(alice_variance(s, &c.budget, Quadrature::P)?.value()),
        }),
        (Some(j), true) => Ok(Reference {
            sigma_v_x: victor_variance_composed(s, &c.budget, &c.gains, j, Quadrature::X)?.value(),
            sigma_v_p: victor_variance_composed(s, &c.budget, &c.gains, j, Quadrature::P)?.value(),
            sigma_a_x: None,
            sigma_a_p: None,
        }),
        (_, false) => Err(Error::Inconsistent(
            "no closed form for static lock offsets".into(),
        )),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub estimate: OracleEstimate,
    pub reference: Reference,
}

impl SweepRow {
    /// Largest z-score among the compared quantities.
    pub fn max_z(&self) -> f64 {
        let e = &self.estimate;
        let r = &self.reference;
        let mut z = e
            .sigma_v_x
            .z_score(r.sigma_v_x)
            .max(e.sigma_v_p.z_score(r.sigma_v_p));
        if let Some(a) = r.sigma_a_x {
            z = z.max(e.sigma_a_x.z_score(a));
        }
        if let Some(a) = r.sigma_a_p {
            z = z.max(e.sigma_a_p.z_score(a));
        }
        z
    }

    pub fn agrees(&self, k_sigma: f64) -> bool {
        self.max_z() <= k_sigma
    }
}

/// Simulate each configuration and pair it with its closed form.
pub fn sweep(configs: &[ChainConfig]) -> Result<Vec<SweepRow>> {
    configs
        .iter()
        .map(|c| {
            Ok(SweepRow {
                reference: reference(c)?,
                estimate: simulate_chain(c)?,
            })
        })
        .collect()
}

/// Sampled `(x1 − x2, x1 + x2, p1 − p2, p1 + p2)` variances of the EPR beams.
pub fn sample_epr_correlations(
    state: &EprState,
    samples: usize,
    seed: u64,
) -> Result<[Estimate; 4]> {
    if samples < 2 {
        return Err(Error::domain(
            "samples",
            samples as f64,
            "need at least 2 shots",
        ));
    }
    let m = state.quadrature_map();
    let chunks = samples.div_ceil(CHUNK);
    let parts: Vec<[Moments; 4]> = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            let mut acc = [Moments::default(); 4];
            for _ in 0..CHUNK.min(samples - k * CHUNK) {
                let v: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
                let q: [f64; 4] = std::array::from_fn(|r| (0..4).map(|c| m.0[r][c] * v[c]).sum());
                acc[0].push(q[0] - q[2]);
                acc[1].push(q[0] + q[2]);
                acc[2].push(q[1] - q[3]);
                acc[3].push(q[1] + q[3]);
            }
            acc
        })
        .collect();
    let total = parts.into_iter().fold([Moments::default(); 4], |a, b| {
        std::array::from_fn(|i| a[i].merge(b[i]))
    });
    Ok(std::array::from_fn(|i| total[i].variance()))
}
