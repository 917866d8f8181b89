//! `quatspec` command line: spectra, resolvent bundles, series convergence reports,
//! Cassini localization and the randomized identity suite.
//!
//! Exit codes: 0 success, 1 verification or domain failure, 2 input or configuration error.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use quatspec::Quaternion;

#[derive(Debug, Parser)]
#[command(name = "quatspec", version, about = "Quaternionic S-resolvent toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// S-spectrum of the input matrix with an oracle cross-check
    Spectrum,
    /// Q, left and right S-resolvents at --q; identity residuals when --p is given
    Resolvent,
    /// Series expansion around --q0 evaluated at --q, per-index convergence data
    Series,
    /// Cassini distance to the spectrum, ball sampling and the region boundary
    Cassini,
    /// Randomized identity suite over --trials instances
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, clap::Args)]
pub struct Opts {
    /// Matrix JSON file ({"n": .., "entries": [[[w,x,y,z], ..], ..]})
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Expansion center "w,x,y,z"
    #[arg(long, global = true, allow_hyphen_values = true, value_parser = parse_quaternion)]
    pub q0: Option<Quaternion>,
    /// Evaluation point "w,x,y,z"
    #[arg(long, global = true, allow_hyphen_values = true, value_parser = parse_quaternion)]
    pub q: Option<Quaternion>,
    /// Second point "w,x,y,z"
    #[arg(long, global = true, allow_hyphen_values = true, value_parser = parse_quaternion)]
    pub p: Option<Quaternion>,
    /// Matrix size for randomly drawn instances
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Largest series truncation index
    #[arg(long, global = true, default_value_t = 200)]
    pub nmax: usize,
    /// Number of trials (verify) or ball samples (cassini)
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
}

fn parse_quaternion(s: &str) -> Result<Quaternion, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(format!("expected \"w,x,y,z\", got {s:?}"));
    }
    let mut c = [0.0; 4];
    for (slot, part) in c.iter_mut().zip(&parts) {
        *slot = part.parse::<f64>().map_err(|e| format!("{part:?}: {e}"))?;
        if !slot.is_finite() {
            return Err(format!("{part:?} is not finite"));
        }
    }
    Ok(Quaternion::from_array(c))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("quatspec: {e}");
            ExitCode::from(e.code())
        }
    }
}
