use serde::Serialize;

use crate::error::{Error, Result};
use crate::stat::compensated_sum;

/// Above this window size the total is accumulated with compensation.
const COMPENSATED_SUM_THRESHOLD: usize = 1000;

/// The N reference-cell intensities `z_1..z_N` around the cell under test.
///
/// Cells are strictly positive and finite, and there are at least two of
/// them. Cell indices in this crate's public API are 1-based.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ClutterRangeProfile {
    cells: Vec<f64>,
    #[serde(skip)]
    total: f64,
}

impl ClutterRangeProfile {
    pub fn new(cells: Vec<f64>) -> Result<Self> {
        if cells.len() < 2 {
            return Err(Error::param(format!(
                "clutter range profile needs at least 2 cells, got {}",
                cells.len()
            )));
        }
        if let Some((i, z)) = cells.iter().enumerate().find(|(_, z)| !(z.is_finite() && **z > 0.0)) {
            return Err(Error::domain(format!(
                "cell {} has intensity {z}; cells must be finite and strictly positive",
                i + 1
            )));
        }
        let total = if cells.len() > COMPENSATED_SUM_THRESHOLD {
            compensated_sum(&cells)
        } else {
            cells.iter().sum()
        };
        Ok(Self { cells, total })
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn cells(&self) -> &[f64] {
        &self.cells
    }

    /// Cell `index` (1-based).
    pub fn cell(&self, index: usize) -> Result<f64> {
        self.check_index(index)?;
        Ok(self.cells[index - 1])
    }

    pub fn into_cells(self) -> Vec<f64> {
        self.cells
    }

    /// `S = sum of all cells`.
    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn check_index(&self, index: usize) -> Result<()> {
        if (1..=self.len()).contains(&index) {
            Ok(())
        } else {
            Err(Error::param(format!(
                "cell index {index} out of range 1..={}",
                self.len()
            )))
        }
    }

    /// `S_j`, the sum of every cell except cell `j` (1-based), taken as
    /// `S - z_j`. If cell j holds more than half the total the difference
    /// would cancel, so that sum is recomputed directly; at most one cell can
    /// be in that position, which keeps a sweep over all j at O(N).
    pub fn excluded_sum(&self, index: usize) -> Result<f64> {
        self.check_index(index)?;
        Ok(self.excluded_sum_unchecked(index - 1))
    }

    #[inline]
    pub(crate) fn excluded_sum_unchecked(&self, zero_based: usize) -> f64 {
        let z = self.cells[zero_based];
        let s = self.total - z;
        if z <= 0.5 * self.total {
            s
        } else {
            self.cells
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != zero_based)
                .map(|(_, v)| v)
                .sum()
        }
    }

    /// `S_j` summed directly over the other cells.
    pub fn direct_excluded_sum(&self, index: usize) -> Result<f64> {
        self.check_index(index)?;
        Ok(self
            .cells
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != index - 1)
            .map(|(_, v)| v)
            .sum())
    }

    /// Multiplies every cell by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.cells.iter().map(|z| z * c).collect())
    }
}

impl TryFrom<Vec<f64>> for ClutterRangeProfile {
    type Error = Error;

    fn try_from(cells: Vec<f64>) -> Result<Self> {
        Self::new(cells)
    }
}
