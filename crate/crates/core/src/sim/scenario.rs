use serde::Serialize;

use crate::detect::ClutterRangeProfile;
use crate::error::{Error, Result};
use crate::stat::{exponential_from_uniform, RngStream};

/// Converts a power ratio in dB to linear scale.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// An interfering target sitting in one reference cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interferer {
    /// 1-based cell index.
    pub cell: usize,
    /// Interference-to-clutter ratio in dB.
    pub icr_db: f64,
}

/// Generative model for one cell under test and its window.
///
/// Clutter cells are Exponential(lambda). A cell holding a target (the CUT
/// under H1, or the interferer cell) is a single exponential whose mean is
/// scaled by `1 + ratio`, i.e. Exponential(lambda / (1 + ratio)).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scenario {
    pub n_cells: usize,
    pub clutter_rate: f64,
    pub target_present: bool,
    pub scr_db: f64,
    pub interferer: Option<Interferer>,
}

impl Scenario {
    /// Clutter-only scenario (H0, no interferer).
    pub fn clutter_only(n_cells: usize, clutter_rate: f64) -> Result<Self> {
        let s = Self {
            n_cells,
            clutter_rate,
            target_present: false,
            scr_db: 0.0,
            interferer: None,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn with_interferer(mut self, cell: usize, icr_db: f64) -> Result<Self> {
        self.interferer = Some(Interferer { cell, icr_db });
        self.validate()?;
        Ok(self)
    }

    pub fn with_target(mut self, scr_db: f64) -> Result<Self> {
        self.target_present = true;
        self.scr_db = scr_db;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_cells < 2 {
            return Err(Error::param(format!("n_cells must be at least 2, got {}", self.n_cells)));
        }
        if !(self.clutter_rate.is_finite() && self.clutter_rate > 0.0) {
            return Err(Error::param(format!(
                "clutter rate must be positive and finite, got {}",
                self.clutter_rate
            )));
        }
        if !self.scr_db.is_finite() {
            return Err(Error::param("SCR must be finite"));
        }
        if let Some(i) = self.interferer {
            if !(1..=self.n_cells).contains(&i.cell) {
                return Err(Error::param(format!(
                    "interferer cell {} out of range 1..={}",
                    i.cell, self.n_cells
                )));
            }
            if !i.icr_db.is_finite() {
                return Err(Error::param("ICR must be finite"));
            }
        }
        Ok(())
    }

    /// Rate of the cell under test.
    pub fn cut_rate(&self) -> f64 {
        if self.target_present {
            self.clutter_rate / (1.0 + db_to_linear(self.scr_db))
        } else {
            self.clutter_rate
        }
    }

    /// Fills `cells` (length `n_cells`) with one window draw and returns the
    /// CUT statistic. The CUT is drawn first, then cells 1..N; every cell
    /// consumes exactly one uniform regardless of its rate.
    pub fn draw_into(&self, rng: &mut RngStream, cells: &mut [f64]) -> f64 {
        debug_assert_eq!(cells.len(), self.n_cells);
        let z0 = exponential_from_uniform(self.cut_rate(), rng.uniform_open_closed());
        for z in cells.iter_mut() {
            *z = exponential_from_uniform(self.clutter_rate, rng.uniform_open_closed());
        }
        if let Some(i) = self.interferer {
            // same uniform, rescaled mean
            cells[i.cell - 1] *= 1.0 + db_to_linear(i.icr_db);
        }
        z0
    }
}

/// Draws `(z0, window)` for one trial.
pub fn generate_trial(scenario: &Scenario, rng: &mut RngStream) -> Result<(f64, ClutterRangeProfile)> {
    scenario.validate()?;
    let mut cells = vec![0.0; scenario.n_cells];
    let z0 = scenario.draw_into(rng, &mut cells);
    Ok((z0, ClutterRangeProfile::new(cells)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stat::derive_stream;

    fn cell_means(s: &Scenario, trials: usize) -> (f64, Vec<f64>) {
        let mut rng = derive_stream(99, 0);
        let mut z0_sum = 0.0;
        let mut sums = vec![0.0; s.n_cells];
        for _ in 0..trials {
            let (z0, crp) = generate_trial(s, &mut rng).unwrap();
            z0_sum += z0;
            for (acc, z) in sums.iter_mut().zip(crp.cells()) {
                *acc += z;
            }
        }
        (z0_sum / trials as f64, sums.into_iter().map(|v| v / trials as f64).collect())
    }

    #[test]
    fn clutter_mean_matches_rate() {
        let s = Scenario::clutter_only(2, 1.0).unwrap();
        let (z0_mean, _) = cell_means(&s, 1_000_000);
        assert!((z0_mean - 1.0).abs() < 0.005, "{z0_mean}");
    }

    #[test]
    fn zero_db_target_doubles_mean() {
        let s = Scenario::clutter_only(2, 0.5).unwrap().with_target(0.0).unwrap();
        assert_eq!(s.cut_rate(), 0.25);
        let (z0_mean, _) = cell_means(&s, 200_000);
        assert!((z0_mean / 4.0 - 1.0).abs() < 0.02, "{z0_mean}");
    }

    #[test]
    fn interferer_cell_mean() {
        let s = Scenario::clutter_only(4, 1.0).unwrap().with_interferer(4, 20.0).unwrap();
        let (_, means) = cell_means(&s, 200_000);
        assert!((means[3] / 101.0 - 1.0).abs() < 0.02, "{}", means[3]);
        assert!((means[0] - 1.0).abs() < 0.02);
    }

    #[test]
    fn invalid_scenarios() {
        assert!(Scenario::clutter_only(1, 1.0).is_err());
        assert!(Scenario::clutter_only(4, 0.0).is_err());
        assert!(Scenario::clutter_only(4, 1.0).unwrap().with_interferer(5, 10.0).is_err());
        assert!(Scenario::clutter_only(4, 1.0).unwrap().with_interferer(0, 10.0).is_err());
    }
}
