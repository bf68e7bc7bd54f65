//! Command-line front end for `modular-sl3`.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::path::PathBuf;

use clap::{Args, Parser};

use config::{parse_coords, parse_grid, Axis, Command, Format, RunConfig, Settings};
pub use error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(
    name = "msl3",
    version,
    about = "Representations of PSL(2,Z) into Isom(SL(3,R)/SO(3))"
)]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Args)]
pub struct Flags {
    /// Key-value settings file; flags take precedence.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// A single point "s,t,theta".
    #[arg(long, value_parser = parse_coords, allow_hyphen_values = true)]
    pub coords: Option<[f64; 3]>,
    /// Comma-separated axes, each "min:max:n" or a single value.
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
    pub grid: Option<::std::vec::Vec<Axis>>,
    #[arg(long)]
    pub max_len: Option<usize>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads; 0 uses every core.
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Overrides the check tolerances (verify) or the Fuchsian tolerance (rep-info).
    #[arg(long)]
    pub tol: Option<f64>,
    /// Run one verify suite.
    #[arg(long)]
    pub filter: Option<String>,
    /// Also write the rep-info gap records as CSV.
    #[arg(long)]
    pub gaps_out: Option<PathBuf>,
}

impl Cli {
    pub fn resolve(self) -> Result<RunConfig> {
        let f = self.flags;
        let file = match &f.config {
            Some(p) => Settings::from_file(p)?,
            None => Settings::default(),
        };
        let flags = Settings {
            coords: f.coords,
            grid: f.grid,
            max_len: f.max_len,
            samples: f.samples,
            seed: f.seed,
            jobs: f.jobs,
            out: f.out,
            format: f.format,
            tol: f.tol,
            filter: f.filter,
            gaps_out: f.gaps_out,
        };
        RunConfig::resolve(self.command, flags.over(file))
    }
}

/// Parses, runs, and reports; returns `Ok(false)` when a check failed.
pub fn run(cli: Cli) -> Result<bool> {
    commands::run(&cli.resolve()?)
}
