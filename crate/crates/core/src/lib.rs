// SPDX-License-Identifier: Apache-2.0

//! Continuous-variable teleportation of coherent states through a lossy,
//! phase-jittery optical chain.
//!
//! Variances are in vacuum units (a vacuum quadrature has variance 1).
//! Closed-form models live in [`teleporter`], [`phasejitter`], [`epr`] and
//! [`opo`]; [`oracle`] is an independent Monte Carlo check of them.

pub mod epr;
pub mod error;
pub mod opo;
pub mod oracle;
pub mod phasejitter;
pub mod teleporter;
pub mod units;

pub use error::{Error, Result};
