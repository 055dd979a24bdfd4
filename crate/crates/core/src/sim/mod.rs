//! Scenario synthesis and Monte Carlo experiments.

mod engine;
mod experiment;
mod report;
mod scenario;

pub use engine::{run_trials, CHUNK_TRIALS};
pub use experiment::{pfa_grid, run_pd_curve, run_pfa_sweep};
pub use report::MonteCarloReport;
pub use scenario::{db_to_linear, generate_trial, Interferer, Scenario};
