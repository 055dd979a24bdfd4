//! Bayesian sliding-window detectors for exponential clutter that compensate
//! for a single interfering target in the clutter range profile (CRP).
//!
//! The crate is split into four layers:
//!
//! - [`stat`]: reproducible random streams, exponential sampling and
//!   log-domain helpers.
//! - [`detect`]: closed-form false-alarm probabilities, threshold solvers and
//!   decision rules for cell-averaging CFAR and the three Bayesian detectors.
//! - [`oracle`]: independent checks of the closed forms (adaptive quadrature of
//!   the predictive densities, brute-force Monte Carlo).
//! - [`sim`]: scenario synthesis and Monte Carlo experiments (Pfa sweeps,
//!   detection curves).

pub mod detect;
pub mod error;
pub mod oracle;
pub mod sim;
pub mod stat;

pub use detect::{
    ClutterRangeProfile, Decision, DesignPfa, DetectorSpec, InterferencePrior, Variant,
};
pub use error::{Error, Result};
pub use sim::{MonteCarloReport, Scenario};
pub use stat::RngStream;
