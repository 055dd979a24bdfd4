//! Bayesian predictive densities of the CUT under H0, written directly from
//! their closed forms. Nothing here goes through the Pfa evaluators in
//! [`crate::detect`]; the excluded sums are recomputed cell by cell.

use crate::detect::{ClutterRangeProfile, InterferencePrior};
use crate::error::{Error, Result};
use crate::stat::log_sum_exp;

use super::quadrature::{integrate_power_tail, QuadratureSettings};

/// A predictive density of `z0` with a power-law tail.
pub trait PredictiveDensity {
    fn density(&self, z0: f64) -> f64;

    /// `p` such that `density(z) ~ C z^-p` as `z -> inf`.
    fn tail_power(&self) -> f64;

    /// Smallest and largest length scales of the mixture components.
    fn scales(&self) -> (f64, f64);
}

fn direct_excluded_sum(cells: &[f64], skip: usize) -> f64 {
    cells
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != skip)
        .map(|(_, z)| z)
        .sum()
}

fn check_z0(z0: f64) -> Result<()> {
    if z0.is_finite() && z0 >= 0.0 {
        Ok(())
    } else {
        Err(Error::param(format!("z0 must be finite and nonnegative, got {z0}")))
    }
}

fn check_prior(crp: &ClutterRangeProfile, prior: &InterferencePrior, with_absence: bool) -> Result<()> {
    if prior.has_absence() != with_absence || prior.n_cells() != crp.len() {
        return Err(Error::param("prior does not match the window or the detector"));
    }
    Ok(())
}

/// `N S^N / (z0 + S)^(N+1)`: cell averaging over the whole window.
#[derive(Debug, Clone)]
pub struct CaCfarDensity {
    n: f64,
    total: f64,
}

impl CaCfarDensity {
    pub fn new(crp: &ClutterRangeProfile) -> Self {
        Self {
            n: crp.len() as f64,
            total: crp.cells().iter().sum(),
        }
    }
}

impl PredictiveDensity for CaCfarDensity {
    fn density(&self, z0: f64) -> f64 {
        let (n, s) = (self.n, self.total);
        (n.ln() + n * s.ln() - (n + 1.0) * (z0 + s).ln()).exp()
    }

    fn tail_power(&self) -> f64 {
        self.n + 1.0
    }

    fn scales(&self) -> (f64, f64) {
        (self.total, self.total)
    }
}

/// `(N-1) S'^(N-1) / (z0 + S')^N` with the interferer cell left out of `S'`.
#[derive(Debug, Clone)]
pub struct Case1Density {
    n: f64,
    reduced: f64,
}

impl Case1Density {
    pub fn new(crp: &ClutterRangeProfile, interferer_index: usize) -> Result<Self> {
        crp.check_index(interferer_index)?;
        Ok(Self {
            n: crp.len() as f64,
            reduced: direct_excluded_sum(crp.cells(), interferer_index - 1),
        })
    }
}

impl PredictiveDensity for Case1Density {
    fn density(&self, z0: f64) -> f64 {
        let (n, s) = (self.n, self.reduced);
        ((n - 1.0).ln() + (n - 1.0) * s.ln() - n * (z0 + s).ln()).exp()
    }

    fn tail_power(&self) -> f64 {
        self.n
    }

    fn scales(&self) -> (f64, f64) {
        (self.reduced, self.reduced)
    }
}

/// Unknown-location density (one interferer, prior `pi_1..pi_N`), and its
/// extension with a no-interferer mass `pi_0`.
///
/// ```text
/// numerator   = pi_0 N (N-1) (z0+S)^-(N+1) + sum_j pi_j/z_j (N-1) (z0+S_j)^-N
/// denominator = pi_0 (N-1) S^-N             + sum_j pi_j/z_j S_j^-(N-1)
/// ```
///
/// With `pi_0 = 0` this is the ratio `(N-1)! sum(...)^-N / (N-2)! sum(...)^-(N-1)`
/// of the unknown-location detector, the factorials reduced to `N-1`.
#[derive(Debug, Clone)]
pub struct MixtureDensity {
    n: f64,
    total: f64,
    absence: f64,
    // (ln(pi_j / z_j), S_j) for cells with pi_j > 0
    cells: Vec<(f64, f64)>,
    log_norm: f64,
}

impl MixtureDensity {
    fn build(crp: &ClutterRangeProfile, prior: &InterferencePrior) -> Result<Self> {
        let z = crp.cells();
        let n = z.len() as f64;
        let total: f64 = z.iter().sum();
        let absence = prior.absence();
        let cells: Vec<(f64, f64)> = prior
            .cell_weights()
            .iter()
            .enumerate()
            .filter(|(_, pi)| **pi > 0.0)
            .map(|(j, pi)| ((pi / z[j]).ln(), direct_excluded_sum(z, j)))
            .collect();
        let mut terms: Vec<f64> = cells
            .iter()
            .map(|(lw, s)| lw - (n - 1.0) * s.ln())
            .collect();
        if absence > 0.0 {
            terms.push(absence.ln() + (n - 1.0).ln() - n * total.ln());
        }
        let log_norm = log_sum_exp(&terms)?;
        Ok(Self {
            n,
            total,
            absence,
            cells,
            log_norm,
        })
    }

    /// Density for the unknown-location detector.
    pub fn case2(crp: &ClutterRangeProfile, prior: &InterferencePrior) -> Result<Self> {
        check_prior(crp, prior, false)?;
        Self::build(crp, prior)
    }

    /// Density for the detector that allows for no interferer.
    pub fn case3(crp: &ClutterRangeProfile, prior: &InterferencePrior) -> Result<Self> {
        check_prior(crp, prior, true)?;
        Self::build(crp, prior)
    }
}

impl PredictiveDensity for MixtureDensity {
    fn density(&self, z0: f64) -> f64 {
        let n = self.n;
        let mut terms: Vec<f64> = self
            .cells
            .iter()
            .map(|(lw, s)| lw + (n - 1.0).ln() - n * (z0 + s).ln())
            .collect();
        if self.absence > 0.0 {
            terms.push(self.absence.ln() + (n * (n - 1.0)).ln() - (n + 1.0) * (z0 + self.total).ln());
        }
        // terms are finite by construction
        let log_num = log_sum_exp(&terms).unwrap_or(f64::NEG_INFINITY);
        (log_num - self.log_norm).exp()
    }

    fn tail_power(&self) -> f64 {
        if self.cells.is_empty() {
            self.n + 1.0
        } else {
            self.n
        }
    }

    fn scales(&self) -> (f64, f64) {
        let mut lo = if self.absence > 0.0 { self.total } else { f64::INFINITY };
        for &(_, s) in &self.cells {
            lo = lo.min(s);
        }
        (lo, self.total)
    }
}

pub fn predictive_density_ca_cfar(z0: f64, crp: &ClutterRangeProfile) -> Result<f64> {
    check_z0(z0)?;
    Ok(CaCfarDensity::new(crp).density(z0))
}

pub fn predictive_density_case1(z0: f64, crp: &ClutterRangeProfile, interferer_index: usize) -> Result<f64> {
    check_z0(z0)?;
    Ok(Case1Density::new(crp, interferer_index)?.density(z0))
}

pub fn predictive_density_case2(z0: f64, crp: &ClutterRangeProfile, prior: &InterferencePrior) -> Result<f64> {
    check_z0(z0)?;
    Ok(MixtureDensity::case2(crp, prior)?.density(z0))
}

pub fn predictive_density_case3(z0: f64, crp: &ClutterRangeProfile, prior: &InterferencePrior) -> Result<f64> {
    check_z0(z0)?;
    Ok(MixtureDensity::case3(crp, prior)?.density(z0))
}

/// `P(Z0 > tau)` by integrating `density` over `[tau, inf)`.
pub fn quadrature_pfa<D: PredictiveDensity + ?Sized>(
    density: &D,
    tau: f64,
    settings: &QuadratureSettings,
) -> Result<f64> {
    check_z0(tau)?;
    let (lo, hi) = density.scales();
    let p = integrate_power_tail(
        |z| density.density(z),
        tau,
        lo,
        hi,
        density.tail_power(),
        settings,
    )?;
    Ok(p.clamp(0.0, 1.0))
}
