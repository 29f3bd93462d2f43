// SPDX-License-Identifier: Apache-2.0

//! Servo phase fluctuations in the lossless unit-gain teleporter.
//!
//! Four locks can wander: the EPR lock (`θ_E`), Alice's two local
//! oscillators (`θ_Ax`, `θ_Ap`), and Bob's displacement phase (`θ_B`).
//! [`HeisenbergCoefficients`] gives the exact linear output for fixed angles;
//! [`victor_variance_jitter`] is its second-order average over zero-mean,
//! independent fluctuations.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::epr::SqueezingParams;
use crate::error::{Error, Result};
use crate::teleporter::{victor_variance, EfficiencyBudget, GainSettings, Quadrature};
use crate::units::QuadratureVariance;

/// RMS above which the second-order expansion starts to degrade.
pub const SMALL_ANGLE_LIMIT_RAD: f64 = 0.2;

/// RMS fluctuation (radians) of each servo lock.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PhaseJitter {
    pub theta_e_rms: f64,
    pub theta_ax_rms: f64,
    pub theta_ap_rms: f64,
    pub theta_b_rms: f64,
}

impl PhaseJitter {
    pub const NONE: PhaseJitter = PhaseJitter {
        theta_e_rms: 0.0,
        theta_ax_rms: 0.0,
        theta_ap_rms: 0.0,
        theta_b_rms: 0.0,
    };

    pub fn new(theta_e: f64, theta_ax: f64, theta_ap: f64, theta_b: f64) -> Result<Self> {
        let j = Self {
            theta_e_rms: theta_e,
            theta_ax_rms: theta_ax,
            theta_ap_rms: theta_ap,
            theta_b_rms: theta_b,
        };
        for (name, v) in j.named() {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::domain(name, v, "RMS phase must be non-negative"));
            }
        }
        Ok(j)
    }

    pub fn from_degrees(theta_e: f64, theta_ax: f64, theta_ap: f64, theta_b: f64) -> Result<Self> {
        Self::new(
            theta_e.to_radians(),
            theta_ax.to_radians(),
            theta_ap.to_radians(),
            theta_b.to_radians(),
        )
    }

    fn named(&self) -> [(&'static str, f64); 4] {
        [
            ("theta_e_rms", self.theta_e_rms),
            ("theta_ax_rms", self.theta_ax_rms),
            ("theta_ap_rms", self.theta_ap_rms),
            ("theta_b_rms", self.theta_b_rms),
        ]
    }

    pub fn is_zero(&self) -> bool {
        self.named().iter().all(|(_, v)| *v == 0.0)
    }

    /// Names of locks whose RMS exceeds [`SMALL_ANGLE_LIMIT_RAD`].
    pub fn large_angle_locks(&self) -> Vec<&'static str> {
        self.named()
            .into_iter()
            .filter(|(_, v)| *v > SMALL_ANGLE_LIMIT_RAD)
            .map(|(n, _)| n)
            .collect()
    }

    /// Draw one set of lock angles from independent zero-mean Gaussians.
    pub fn sample<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> LockAngles {
        let mut draw = |rms: f64| {
            if rms == 0.0 {
                0.0
            } else {
                Normal::new(0.0, rms).expect("rms validated").sample(rng)
            }
        };
        LockAngles {
            theta_e: draw(self.theta_e_rms),
            theta_ax: draw(self.theta_ax_rms),
            theta_ap: draw(self.theta_ap_rms),
            theta_b: draw(self.theta_b_rms),
        }
    }
}

/// One instantaneous set of lock angles (radians).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LockAngles {
    pub theta_e: f64,
    pub theta_ax: f64,
    pub theta_ap: f64,
    pub theta_b: f64,
}

/// Coefficients of `√2·x_V` and `√2·p_V` over the independent inputs
/// `(x1⁰, p1⁰, x2⁰, p2⁰, x_in, p_in)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeisenbergCoefficients {
    pub x: [f64; 6],
    pub p: [f64; 6],
}

impl HeisenbergCoefficients {
    /// Variance of Victor's x and p for a coherent input (every input has unit variance).
    pub fn variances(&self) -> (f64, f64) {
        let half_norm = |c: &[f64; 6]| 0.5 * c.iter().map(|v| v * v).sum::<f64>();
        (half_norm(&self.x), half_norm(&self.p))
    }
}

pub fn heisenberg_output_coefficients(
    s: &SqueezingParams,
    a: &LockAngles,
) -> HeisenbergCoefficients {
    let ep = s.r_plus().exp();
    let em = (-s.r_minus()).exp();
    let (se, ce) = a.theta_e.sin_cos();
    let (sb, cb) = a.theta_b.sin_cos();
    let (sx, cx) = a.theta_ax.sin_cos();
    let (sp, cp) = a.theta_ap.sin_cos();
    let r2 = std::f64::consts::SQRT_2;
    HeisenbergCoefficients {
        x: [
            (cb - cx) * ep,
            (sb - sx) * em,
            (ce * (cb + cx) - se * (sb + sx)) * em,
            (se * (cb + cx) + ce * (sb + sx)) * ep,
            r2 * cx,
            r2 * sx,
        ],
        p: [
            -(sb + sp) * ep,
            (cb + cp) * em,
            (se * (cp - cb) + ce * (sp - sb)) * em,
            (se * (sp - sb) + ce * (cb - cp)) * ep,
            -r2 * sp,
            r2 * cp,
        ],
    }
}

/// Second-order averaged variance of Victor's quadrature under jitter.
pub fn victor_variance_jitter(
    s: &SqueezingParams,
    j: &PhaseJitter,
    quad: Quadrature,
) -> QuadratureVariance {
    let sm = s.sigma_minus();
    let sp = s.sigma_plus();
    let e2 = j.theta_e_rms.powi(2);
    let b2 = j.theta_b_rms.powi(2);
    let mixing = match quad {
        Quadrature::X => 0.5 * j.theta_ax_rms.powi(2) + 0.5 * b2 + 2.0 * e2,
        Quadrature::P => 0.5 * j.theta_ap_rms.powi(2) + 0.5 * b2,
    };
    QuadratureVariance::new(1.0 + (2.0 - mixing) * sm + mixing * sp)
        .expect("variance of a sum of vacuum-scaled terms is positive")
}

/// Victor's variance with his local oscillator at angle `theta_v`.
pub fn victor_lo_scan(s: &SqueezingParams, j: &PhaseJitter, theta_v: f64) -> QuadratureVariance {
    let vx = victor_variance_jitter(s, j, Quadrature::X).value();
    let vp = victor_variance_jitter(s, j, Quadrature::P).value();
    let (sin, cos) = theta_v.sin_cos();
    QuadratureVariance::new(vx * cos * cos + vp * sin * sin).expect("convex combination")
}

/// Exact variances averaged over `samples` Gaussian angle draws.
pub fn averaged_exact_variances(
    s: &SqueezingParams,
    j: &PhaseJitter,
    samples: usize,
    seed: u64,
) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut sx, mut sp) = (0.0, 0.0);
    for _ in 0..samples {
        let (vx, vp) = heisenberg_output_coefficients(s, &j.sample(&mut rng)).variances();
        sx += vx;
        sp += vp;
    }
    let n = samples.max(1) as f64;
    (sx / n, sp / n)
}

/// Jitter combined with a lossy budget.
///
/// The jitter result assumes a lossless chain, so this is an approximate
/// composition and not a derived result: the excess the jitter adds over
/// the locked lossless teleporter is attenuated by Victor's detection
/// (`ξ5²·η_V²`) and added to the lossy-budget variance.
pub fn victor_variance_composed(
    s: &SqueezingParams,
    e: &EfficiencyBudget,
    g: &GainSettings,
    j: &PhaseJitter,
    quad: Quadrature,
) -> Result<QuadratureVariance> {
    let base = victor_variance(s, e, g, quad)?.value();
    let excess = victor_variance_jitter(s, j, quad).value()
        - victor_variance_jitter(s, &PhaseJitter::NONE, quad).value();
    let victor = (e.xi5 * e.eta_v()).powi(2);
    QuadratureVariance::new(base + victor * excess)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn fig7_squeezing() -> SqueezingParams {
        SqueezingParams::from_db(-3.0, 7.0).unwrap()
    }

    #[test]
    fn zero_jitter_classical_point() {
        let v = victor_variance_jitter(&SqueezingParams::VACUUM, &PhaseJitter::NONE, Quadrature::X);
        assert_eq!(v.value(), 3.0);
    }

    #[test]
    fn epr_lock_jitter_example() {
        let s = fig7_squeezing();
        let j = PhaseJitter::from_degrees(6.0, 0.0, 0.0, 0.0).unwrap();
        let x = victor_variance_jitter(&s, &j, Quadrature::X);
        let p = victor_variance_jitter(&s, &j, Quadrature::P);
        assert_relative_eq!(x.value(), 2.10, epsilon = 5e-3);
        assert_relative_eq!(x.db(), 3.23, epsilon = 0.01);
        assert_relative_eq!(p.value(), 2.00, epsilon = 5e-3);
        assert_relative_eq!(p.db(), 3.01, epsilon = 0.01);
    }

    #[test]
    fn equal_non_epr_jitter_is_isotropic() {
        let s = fig7_squeezing();
        let t = 0.05;
        let j = PhaseJitter::new(0.0, t, t, t).unwrap();
        assert_eq!(
            victor_variance_jitter(&s, &j, Quadrature::X),
            victor_variance_jitter(&s, &j, Quadrature::P)
        );
    }

    #[test]
    fn p_quadrature_ignores_epr_lock() {
        let s = fig7_squeezing();
        let a = PhaseJitter::new(0.1, 0.02, 0.03, 0.04).unwrap();
        let b = PhaseJitter {
            theta_e_rms: 0.0,
            ..a
        };
        assert_eq!(
            victor_variance_jitter(&s, &a, Quadrature::P),
            victor_variance_jitter(&s, &b, Quadrature::P)
        );
    }

    #[test]
    fn unlocked_angles_zero() {
        let s = SqueezingParams::new(0.345, 0.806).unwrap();
        let c = heisenberg_output_coefficients(&s, &LockAngles::default());
        assert_eq!(c.x[0], 0.0);
        assert_eq!(c.x[1], 0.0);
        assert_relative_eq!(c.x[2], 2.0 * (-0.345f64).exp());
        assert_relative_eq!(c.x[4], std::f64::consts::SQRT_2);
        let (vx, vp) = c.variances();
        assert_relative_eq!(vx, 1.0 + 2.0 * s.sigma_minus(), epsilon = 1e-12);
        assert_relative_eq!(vp, 1.0 + 2.0 * s.sigma_minus(), epsilon = 1e-12);
    }

    #[test]
    fn bob_phase_flip_reverses_reconstruction() {
        let s = SqueezingParams::VACUUM;
        let c = heisenberg_output_coefficients(
            &s,
            &LockAngles {
                theta_b: std::f64::consts::PI,
                ..Default::default()
            },
        );
        // EPR1 no longer cancels against EPR2: cos θ_B − cos θ_Ax = −2
        assert_relative_eq!(c.x[0], -2.0, epsilon = 1e-12);
        assert_relative_eq!(c.x[2], 0.0, epsilon = 1e-12);
        assert_relative_eq!(c.p[1], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn lo_scan_endpoints_and_period() {
        let s = fig7_squeezing();
        let j = PhaseJitter::from_degrees(4.0, 1.0, 2.0, 3.0).unwrap();
        let vx = victor_variance_jitter(&s, &j, Quadrature::X);
        let vp = victor_variance_jitter(&s, &j, Quadrature::P);
        assert_relative_eq!(victor_lo_scan(&s, &j, 0.0).value(), vx.value());
        assert_relative_eq!(
            victor_lo_scan(&s, &j, std::f64::consts::FRAC_PI_2).value(),
            vp.value()
        );
        for k in 0..10 {
            let t = 0.37 * k as f64;
            assert_relative_eq!(
                victor_lo_scan(&s, &j, t).value(),
                victor_lo_scan(&s, &j, t + std::f64::consts::PI).value(),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn epr_lock_weight_is_four_times_others() {
        let s = fig7_squeezing();
        let h = 0.1;
        let slope = |j: PhaseJitter| {
            (victor_variance_jitter(&s, &j, Quadrature::X).value()
                - victor_variance_jitter(&s, &PhaseJitter::NONE, Quadrature::X).value())
                / (h * h)
        };
        let e = slope(PhaseJitter::new(h, 0.0, 0.0, 0.0).unwrap());
        let b = slope(PhaseJitter::new(0.0, 0.0, 0.0, h).unwrap());
        assert_relative_eq!(e, 2.0 * (s.sigma_plus() - s.sigma_minus()), epsilon = 1e-6);
        assert_relative_eq!(e / b, 4.0, epsilon = 1e-9);
    }

    #[test]
    fn expansion_matches_exact_average_for_small_jitter() {
        let s = SqueezingParams::from_db(-3.0, 7.0).unwrap();
        let j = PhaseJitter::from_degrees(3.0, 3.0, 3.0, 3.0).unwrap();
        let (ax, ap) = averaged_exact_variances(&s, &j, 100_000, 7);
        let ex = victor_variance_jitter(&s, &j, Quadrature::X).value();
        let ep = victor_variance_jitter(&s, &j, Quadrature::P).value();
        assert!(((ax - ex) / ex).abs() < 5e-3);
        assert!(((ap - ep) / ep).abs() < 5e-3);
    }

    #[test]
    fn zero_jitter_matches_ideal_teleporter() {
        let e = EfficiencyBudget::ideal();
        let g = GainSettings::calibrated(&e);
        for (rm, rp) in [(0.0, 0.0), (0.2, 0.5), (1.0, 1.0), (0.345, 0.806)] {
            let s = SqueezingParams::new(rm, rp).unwrap();
            for q in Quadrature::BOTH {
                assert_relative_eq!(
                    victor_variance_jitter(&s, &PhaseJitter::NONE, q).value(),
                    victor_variance(&s, &e, &g, q).unwrap().value(),
                    epsilon = 1e-12
                );
            }
        }
    }

    #[test]
    fn large_angles_are_flagged() {
        let j = PhaseJitter::new(0.3, 0.0, 0.0, 0.21).unwrap();
        assert_eq!(j.large_angle_locks(), vec!["theta_e_rms", "theta_b_rms"]);
        assert!(PhaseJitter::new(-0.1, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn composition_reduces_to_each_limit() {
        let s = fig7_squeezing();
        let e = EfficiencyBudget::best_case();
        let g = GainSettings::calibrated(&e);
        let none = victor_variance_composed(&s, &e, &g, &PhaseJitter::NONE, Quadrature::X).unwrap();
        assert_eq!(none, victor_variance(&s, &e, &g, Quadrature::X).unwrap());
        let ideal = EfficiencyBudget::ideal();
        let j = PhaseJitter::from_degrees(5.0, 2.0, 2.0, 2.0).unwrap();
        let c = victor_variance_composed(
            &s,
            &ideal,
            &GainSettings::calibrated(&ideal),
            &j,
            Quadrature::X,
        )
        .unwrap();
        assert_relative_eq!(
            c.value(),
            victor_variance_jitter(&s, &j, Quadrature::X).value(),
            epsilon = 1e-12
        );
    }
}
