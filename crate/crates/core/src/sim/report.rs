use serde::Serialize;

use super::scenario::Scenario;
use crate::detect::DetectorSpec;
use crate::stat::{wilson_interval, Z_99};

/// Outcome of a batch of Monte Carlo trials at one operating point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonteCarloReport {
    pub trials: u64,
    pub declared: u64,
    pub estimate: f64,
    /// Wilson 99% interval.
    pub ci_low: f64,
    pub ci_high: f64,
    pub master_seed: u64,
    /// Root stream of the run; trial chunks use its substreams.
    pub stream_id: u64,
    pub scenario: Scenario,
    pub spec: DetectorSpec,
}

impl MonteCarloReport {
    pub fn new(
        trials: u64,
        declared: u64,
        master_seed: u64,
        stream_id: u64,
        scenario: Scenario,
        spec: DetectorSpec,
    ) -> Self {
        debug_assert!(declared <= trials);
        let (ci_low, ci_high) = wilson_interval(declared, trials, Z_99);
        Self {
            trials,
            declared,
            estimate: declared as f64 / trials as f64,
            ci_low,
            ci_high,
            master_seed,
            stream_id,
            scenario,
            spec,
        }
    }

    /// Binomial standard error of the estimate.
    pub fn standard_error(&self) -> f64 {
        (self.estimate * (1.0 - self.estimate) / self.trials as f64).sqrt()
    }
}
