//! Command-line front end for the bayescfar detectors.
//!
//! Exit codes: 0 success, 1 validation or run failure, 2 configuration
//! error, 3 I/O error.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::Config;
use error::CliError;

#[derive(Parser, Debug)]
#[command(name = "bayescfar", version, about = "Interference-compensating Bayesian CFAR detectors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Threshold for a given window, plus the Pfa it achieves.
    Threshold(Common),
    /// Monte Carlo false-alarm rates over a lambda / interferer grid.
    PfaSweep(Common),
    /// Monte Carlo detection probability along an SCR grid.
    PdCurve(Common),
    /// Cross-check the closed forms against quadrature and reduction identities.
    Validate {
        #[command(flatten)]
        common: Common,
        /// Scale every closed form by (1 + EPS) before comparing (negative control).
        #[arg(long, value_name = "EPS", default_value_t = 0.0)]
        perturb: f64,
    },
}

/// Options shared by all subcommands. Each flag overrides the config key of
/// the same name.
#[derive(Args, Debug)]
struct Common {
    /// Flat `key = value` config file.
    #[arg(long, short)]
    config: Option<PathBuf>,
    /// Arbitrary override, `key=value`; may repeat.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    #[arg(long)]
    variant: Option<String>,
    #[arg(long)]
    n_cells: Option<String>,
    #[arg(long)]
    design_pfa: Option<String>,
    #[arg(long)]
    interferer_index: Option<String>,
    #[arg(long)]
    interferer_cell: Option<String>,
    #[arg(long)]
    prior: Option<String>,
    #[arg(long)]
    lambda_grid: Option<String>,
    #[arg(long)]
    scr_grid_db: Option<String>,
    #[arg(long)]
    icr_db: Option<String>,
    #[arg(long)]
    trials: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    out: Option<String>,
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    crp: Option<String>,
    #[arg(long)]
    crp_file: Option<String>,
    #[arg(long)]
    workers: Option<String>,
    #[arg(long)]
    instances: Option<String>,
    #[arg(long)]
    rel_tol: Option<String>,
}

impl Common {
    fn into_config(self) -> Result<Config, CliError> {
        let mut cfg = match &self.config {
            Some(path) => Config::load(path)?,
            None => Config::default(),
        };
        let flags = [
            ("variant", self.variant),
            ("n_cells", self.n_cells),
            ("design_pfa", self.design_pfa),
            ("interferer_index", self.interferer_index),
            ("interferer_cell", self.interferer_cell),
            ("prior", self.prior),
            ("lambda_grid", self.lambda_grid),
            ("scr_grid_db", self.scr_grid_db),
            ("icr_db", self.icr_db),
            ("trials", self.trials),
            ("seed", self.seed),
            ("out", self.out),
            ("format", self.format),
            ("crp", self.crp),
            ("crp_file", self.crp_file),
            ("workers", self.workers),
            ("instances", self.instances),
            ("rel_tol", self.rel_tol),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                cfg.set(key, &v)?;
            }
        }
        for kv in &self.set {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("--set expects key=value, got '{kv}'")))?;
            cfg.set(k.trim(), v.trim())?;
        }
        Ok(cfg)
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Threshold(c) => commands::threshold(&c.into_config()?),
        Command::PfaSweep(c) => commands::pfa_sweep(&c.into_config()?),
        Command::PdCurve(c) => commands::pd_curve(&c.into_config()?),
        Command::Validate { common, perturb } => commands::validate(&common.into_config()?, perturb),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("bayescfar: {e}");
            e.exit_code()
        }
    }
}
