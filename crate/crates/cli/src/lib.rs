// SPDX-License-Identifier: Apache-2.0

//! Named scenarios and run files for the `cvtele` command.

pub mod config;
pub mod presets;
pub mod report;

use std::path::Path;

pub use presets::{catalog, PresetInfo};
pub use report::{Check, Origin, Report};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("unknown scenario '{0}'")]
    UnknownScenario(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Model(#[from] cvtele_core::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        CliError::Parse {
            line,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub seed: u64,
    pub samples: Option<usize>,
    pub oracle: bool,
    pub theta_e_deg: Option<f64>,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            seed: 20_050_101,
            samples: None,
            oracle: false,
            theta_e_deg: None,
        }
    }
}

impl RunOptions {
    pub(crate) fn samples_or(&self, default: usize) -> usize {
        self.samples.unwrap_or(default)
    }
}

/// Run a preset by name, or a run file if `target` names an existing file.
pub fn run_target(target: &str, opts: &RunOptions) -> Result<Report, CliError> {
    if let Some(p) = presets::find(target) {
        return (p.run)(opts);
    }
    let path = Path::new(target);
    if path.is_file() {
        let text = std::fs::read_to_string(path)?;
        return presets::run_file(&config::RunFile::from_text(&text)?, opts);
    }
    Err(CliError::UnknownScenario(target.to_string()))
}
