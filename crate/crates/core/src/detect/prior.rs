use serde::Serialize;

use crate::error::{Error, Result};

const SUM_TOLERANCE: f64 = 1e-9;

/// Prior probabilities over where (and whether) a single interfering target
/// sits in the clutter range profile.
///
/// Without the absence mass the weights are `pi_1..pi_N`; with it they are
/// `pi_0..pi_N`, where `pi_0` is the probability that no interferer is
/// present. Weights are nonnegative and must already sum to one; nothing is
/// renormalized.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InterferencePrior {
    with_absence: bool,
    weights: Vec<f64>,
    #[serde(skip)]
    log_weights: Vec<f64>,
}

impl InterferencePrior {
    fn build(with_absence: bool, weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::param("interference prior has no weights"));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(Error::param(format!("prior weight {w} is not a nonnegative number")));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::param(format!("prior weights sum to {sum}, expected 1")));
        }
        let log_weights = weights.iter().map(|w| w.ln()).collect();
        Ok(Self {
            with_absence,
            weights,
            log_weights,
        })
    }

    /// Location-only prior `pi_1..pi_N` (an interferer is certainly present).
    pub fn location(weights: Vec<f64>) -> Result<Self> {
        Self::build(false, weights)
    }

    /// Prior `pi_0..pi_N` with `pi_0` the no-interferer probability.
    pub fn with_absence(weights: Vec<f64>) -> Result<Self> {
        if weights.len() < 2 {
            return Err(Error::param("prior with absence mass needs pi_0 and at least one cell"));
        }
        Self::build(true, weights)
    }

    pub fn uniform(n: usize) -> Result<Self> {
        Self::location(vec![1.0 / n as f64; n])
    }

    /// `pi_0 = absence`, remaining mass spread evenly over the N cells.
    pub fn absent_uniform(absence: f64, n: usize) -> Result<Self> {
        if !(0.0..=1.0).contains(&absence) {
            return Err(Error::param(format!("absence probability {absence} outside [0, 1]")));
        }
        let mut weights = vec![(1.0 - absence) / n as f64; n + 1];
        weights[0] = absence;
        Self::with_absence(weights)
    }

    /// All mass on cell `index` (1-based).
    pub fn point_mass(n: usize, index: usize) -> Result<Self> {
        if !(1..=n).contains(&index) {
            return Err(Error::param(format!("cell index {index} out of range 1..={n}")));
        }
        let mut weights = vec![0.0; n];
        weights[index - 1] = 1.0;
        Self::location(weights)
    }

    /// Location prior that decays geometrically with distance from the cell
    /// under test.
    ///
    /// The window is taken to be split evenly around the cell under test:
    /// cells `1..=N/2` lag it and the rest lead it, so cells `N/2` and
    /// `N/2 + 1` are the nearest neighbours (distance 0). Cell weight is
    /// proportional to `ratio^distance`.
    pub fn geometric_decay(n: usize, ratio: f64) -> Result<Self> {
        if !(ratio.is_finite() && ratio > 0.0) {
            return Err(Error::param(format!("decay ratio must be positive, got {ratio}")));
        }
        if n == 0 {
            return Err(Error::param("window has no cells"));
        }
        let half = n / 2;
        let raw: Vec<f64> = (1..=n)
            .map(|i| {
                let distance = if i <= half { half - i } else { i - half - 1 };
                ratio.powi(distance as i32)
            })
            .collect();
        let total: f64 = raw.iter().sum();
        Self::location(raw.into_iter().map(|w| w / total).collect())
    }

    pub fn has_absence(&self) -> bool {
        self.with_absence
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Number of cells the prior covers.
    pub fn n_cells(&self) -> usize {
        if self.with_absence {
            self.weights.len() - 1
        } else {
            self.weights.len()
        }
    }

    /// `pi_0`, or zero for a location-only prior.
    pub fn absence(&self) -> f64 {
        if self.with_absence {
            self.weights[0]
        } else {
            0.0
        }
    }

    pub(crate) fn log_absence(&self) -> f64 {
        if self.with_absence {
            self.log_weights[0]
        } else {
            f64::NEG_INFINITY
        }
    }

    /// `ln pi_j` for j = 1..N, in cell order.
    pub(crate) fn log_cell_weights(&self) -> &[f64] {
        if self.with_absence {
            &self.log_weights[1..]
        } else {
            &self.log_weights
        }
    }

    /// `pi_j` for j = 1..N, in cell order.
    pub fn cell_weights(&self) -> &[f64] {
        if self.with_absence {
            &self.weights[1..]
        } else {
            &self.weights
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sum_must_be_one() {
        assert!(InterferencePrior::location(vec![0.5, 0.4]).is_err());
        assert!(InterferencePrior::location(vec![0.5, 0.5]).is_ok());
        assert!(InterferencePrior::location(vec![0.5, 0.5 + 5e-10]).is_ok());
        assert!(InterferencePrior::location(vec![1.5, -0.5]).is_err());
        assert!(InterferencePrior::location(vec![]).is_err());
        assert!(InterferencePrior::location(vec![f64::NAN, 1.0]).is_err());
    }

    #[test]
    fn constructors() {
        let u = InterferencePrior::uniform(4).unwrap();
        assert_eq!(u.n_cells(), 4);
        assert!(!u.has_absence());
        let a = InterferencePrior::absent_uniform(0.5, 4).unwrap();
        assert_eq!(a.n_cells(), 4);
        assert_eq!(a.absence(), 0.5);
        assert_eq!(a.cell_weights(), &[0.125; 4]);
        let p = InterferencePrior::point_mass(3, 3).unwrap();
        assert_eq!(p.weights(), &[0.0, 0.0, 1.0]);
        assert!(InterferencePrior::point_mass(3, 0).is_err());
        assert!(InterferencePrior::absent_uniform(1.5, 3).is_err());
    }

    #[test]
    fn geometric_decay_peaks_next_to_cut() {
        let p = InterferencePrior::geometric_decay(6, 0.5).unwrap();
        let w = p.weights();
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert_eq!(w[2], w[3]);
        assert_eq!(w[0], w[5]);
        assert!(w[2] > w[1] && w[1] > w[0]);
    }
}
