//! `sl2heat`: evaluate the heat kernel on SL(2,ℝ), write tables and run the
//! verification suites.
//!
//! Exit codes: 0 success, 1 failed check or runtime error, 2 invalid input,
//! 3 no K-type cutoff reaches the tolerance.

mod commands;
mod config;

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

use sl2heat::synthesis::CutoffPolicy;

const DEFAULTS: &str = "\
Defaults: tol = 1e-10, t_min = 0.2, nu_nodes_per_unit = 32, ktype_cutoff = auto,
n_max = 200, paths = 100000, seed = 7.

A config file holds one `key = value` per line (`#` starts a comment); keys are
tol, t_min, nu_nodes_per_unit, ktype_cutoff, n_max, paths, seed, out.
Flags override values from the file.";

#[derive(Parser, Debug)]
#[command(name = "sl2heat", version, about = "Heat kernel on SL(2,R) by spectral synthesis", after_help = DEFAULTS)]
pub struct Cli {
    /// Key = value configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overall absolute tolerance of the synthesis [default: 1e-10].
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Smallest admissible time [default: 0.2].
    #[arg(long = "t-min", global = true)]
    t_min: Option<f64>,
    /// K-type cutoff: `auto` or a fixed N [default: auto].
    #[arg(long = "ktype-cutoff", global = true, value_parser = config::parse_cutoff)]
    ktype_cutoff: Option<CutoffPolicy>,
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate ρ(t, g) with its per-K-type breakdown (JSON).
    Eval {
        #[arg(long)]
        t: f64,
        /// Matrix entries a,b,c,d of g.
        #[arg(
            long,
            conflicts_with = "cartan",
            required_unless_present = "cartan",
            allow_hyphen_values = true
        )]
        g: Option<String>,
        /// Cartan coordinates θ1,s,θ2 of g = k(θ1) a(s) k(θ2).
        #[arg(long, allow_hyphen_values = true)]
        cartan: Option<String>,
    },
    /// Tabulate ρ(t, a_s) over a grid (CSV: t,s,rho,tail_bound,imag_residual).
    Table {
        /// Times: comma list `0.5,1,2` or `start:stop:count`.
        #[arg(long = "t-grid")]
        t_grid: String,
        /// Values of s, same syntax.
        #[arg(long = "s-grid")]
        s_grid: String,
    },
    /// Run a verification suite: residual, plancherel, semigroup,
    /// spherical-crosscheck, mc or all (JSON report; exit 1 on failure).
    Verify {
        suite: String,
        #[arg(long)]
        t: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        n: Option<i64>,
        /// Monte Carlo paths [default: 100000].
        #[arg(long)]
        paths: Option<usize>,
        /// Monte Carlo seed [default: 7].
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Debug)]
pub enum CliError {
    Parse(String),
    Tail(String),
    Failed(String),
    Runtime(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Tail(_) => 3,
            CliError::Failed(_) | CliError::Runtime(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Parse(m) | CliError::Tail(m) | CliError::Failed(m) | CliError::Runtime(m) => {
                m
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("sl2heat: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
