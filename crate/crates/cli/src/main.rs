// SPDX-License-Identifier: Apache-2.0

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cvtele_cli::{catalog, run_target, CliError, RunOptions};

#[derive(Parser)]
#[command(
    name = "cvtele",
    version,
    about = "Teleportation model scenarios as CSV"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the built-in scenarios.
    List,
    /// Run a scenario by name or a key=value run file.
    Run {
        target: String,
        #[arg(long, default_value_t = RunOptions::default().seed)]
        seed: u64,
        /// Monte Carlo shots per configuration.
        #[arg(long)]
        samples: Option<usize>,
        /// Add Monte Carlo oracle columns.
        #[arg(long)]
        oracle: bool,
        /// Write CSV here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// EPR-lock RMS jitter in degrees (fig7 only).
        #[arg(long = "theta-e")]
        theta_e: Option<f64>,
    },
}

fn list() {
    let width = catalog().iter().map(|p| p.name.len()).max().unwrap_or(0);
    for p in catalog() {
        println!("{:width$}  {}  [{}]", p.name, p.description, p.anchor);
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::List => {
            list();
            ExitCode::SUCCESS
        }
        Command::Run {
            target,
            seed,
            samples,
            oracle,
            out,
            theta_e,
        } => {
            let opts = RunOptions {
                seed,
                samples,
                oracle,
                theta_e_deg: theta_e,
            };
            let report = match run_target(&target, &opts) {
                Ok(r) => r,
                Err(CliError::UnknownScenario(name)) => {
                    eprintln!("error: unknown scenario or file '{name}'. Available scenarios:");
                    for p in catalog() {
                        eprintln!("  {}", p.name);
                    }
                    return ExitCode::from(2);
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            };
            let written = match &out {
                Some(path) => File::create(path)
                    .map_err(csv::Error::from)
                    .and_then(|f| report.write_csv(BufWriter::new(f))),
                None => report.write_csv(io::stdout().lock()),
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            let _ = report.write_summary(io::stderr().lock());
            let _ = io::stderr().flush();
            if report.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}
