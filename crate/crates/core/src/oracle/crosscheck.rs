//! Randomized cross-checks of the closed forms against the oracles.

use serde::Serialize;

use super::density::{
    predictive_density_ca_cfar, predictive_density_case1, predictive_density_case2,
    predictive_density_case3, quadrature_pfa, CaCfarDensity, Case1Density, MixtureDensity,
    PredictiveDensity,
};
use super::quadrature::QuadratureSettings;
use crate::detect::{
    ca_cfar_pfa, case1_pfa, case2_pfa, case3_pfa, ClutterRangeProfile, InterferencePrior,
};
use crate::error::Result;
use crate::stat::{sample_exponential, RngStream};

/// Window sizes drawn for random instances.
pub const WINDOW_SIZES: [usize; 4] = [4, 8, 16, 32];

/// One randomized problem: a window, priors for both mixture detectors, a
/// known interferer index and a threshold.
#[derive(Debug, Clone)]
pub struct Instance {
    pub crp: ClutterRangeProfile,
    pub location_prior: InterferencePrior,
    pub absence_prior: InterferencePrior,
    pub interferer_index: usize,
    pub tau: f64,
}

fn uniform_index(rng: &mut RngStream, n: usize) -> usize {
    (rng.next_u64() % n as u64) as usize
}

fn random_probabilities(rng: &mut RngStream, n: usize) -> Result<Vec<f64>> {
    let mut raw = (0..n)
        .map(|_| sample_exponential(1.0, rng))
        .collect::<Result<Vec<f64>>>()?;
    if n > 1 && rng.uniform_open_closed() < 0.25 {
        let j = uniform_index(rng, n);
        raw[j] = 0.0;
    }
    let total: f64 = raw.iter().sum();
    Ok(raw.into_iter().map(|w| w / total).collect())
}

impl Instance {
    /// Draws an instance: exponential clutter at a random power (1e-3..1e3),
    /// half the time with a 0..30 dB interferer in a random cell, random
    /// priors and `tau / S` exponential with mean 1/4.
    pub fn random(rng: &mut RngStream) -> Result<Self> {
        let n = WINDOW_SIZES[uniform_index(rng, WINDOW_SIZES.len())];
        let power = 10f64.powf(6.0 * rng.uniform_open_closed() - 3.0);
        let mut cells = (0..n)
            .map(|_| sample_exponential(1.0 / power, rng))
            .collect::<Result<Vec<f64>>>()?;
        let interferer_index = uniform_index(rng, n) + 1;
        if rng.uniform_open_closed() < 0.5 {
            cells[interferer_index - 1] *= 10f64.powf(3.0 * rng.uniform_open_closed());
        }
        // keep every cell strictly positive
        for z in cells.iter_mut() {
            if *z == 0.0 {
                *z = f64::MIN_POSITIVE;
            }
        }
        let crp = ClutterRangeProfile::new(cells)?;
        let location_prior = InterferencePrior::location(random_probabilities(rng, n)?)?;
        let absence = rng.uniform_open_closed();
        let mut with_absence: Vec<f64> = random_probabilities(rng, n)?
            .into_iter()
            .map(|w| w * (1.0 - absence))
            .collect();
        with_absence.insert(0, absence);
        let absence_prior = InterferencePrior::with_absence(with_absence)?;
        let tau = crp.total() * sample_exponential(4.0, rng)?;
        Ok(Self {
            crp,
            location_prior,
            absence_prior,
            interferer_index,
            tau,
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub instances: usize,
    pub failures: usize,
    pub max_rel_error: f64,
    pub tolerance: f64,
}

impl CheckResult {
    fn new(name: &str, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            instances: 0,
            failures: 0,
            max_rel_error: 0.0,
            tolerance,
        }
    }

    fn record(&mut self, value: f64, reference: f64) {
        let rel = if value == reference {
            0.0
        } else {
            ((value - reference) / reference).abs()
        };
        self.instances += 1;
        if !(rel <= self.tolerance) {
            self.failures += 1;
        }
        if rel > self.max_rel_error || rel.is_nan() {
            self.max_rel_error = rel;
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0 && self.instances > 0
    }
}

/// Knobs of [`run_validation`].
#[derive(Debug, Clone)]
pub struct ValidationConfig {
    pub instances: usize,
    pub reduction_triples: usize,
    pub seed: u64,
    pub quadrature: QuadratureSettings,
    /// Relative error injected into every closed form (negative control).
    pub perturbation: f64,
}

impl Default for ValidationConfig {
    fn default() -> Self {
        Self {
            instances: 100,
            reduction_triples: 1000,
            seed: 2019,
            quadrature: QuadratureSettings::default(),
            perturbation: 0.0,
        }
    }
}

pub const QUADRATURE_TOL: f64 = 1e-6;
pub const REDUCTION_TOL: f64 = 1e-12;
pub const DERIVATIVE_TOL: f64 = 1e-6;
pub const NORMALIZATION_TOL: f64 = 1e-8;

/// Closed form vs quadrature of the density for all four detectors.
pub fn check_quadrature(cfg: &ValidationConfig) -> Result<Vec<CheckResult>> {
    let mut rng = RngStream::new(cfg.seed, 1);
    let bump = 1.0 + cfg.perturbation;
    let q = &cfg.quadrature;
    let mut ca = CheckResult::new("quadrature: ca-cfar", QUADRATURE_TOL);
    let mut c1 = CheckResult::new("quadrature: case1", QUADRATURE_TOL);
    let mut c2 = CheckResult::new("quadrature: case2", QUADRATURE_TOL);
    let mut c3 = CheckResult::new("quadrature: case3", QUADRATURE_TOL);
    for _ in 0..cfg.instances {
        let inst = Instance::random(&mut rng)?;
        let (z, tau) = (&inst.crp, inst.tau);
        ca.record(
            bump * ca_cfar_pfa(tau, z)?,
            quadrature_pfa(&CaCfarDensity::new(z), tau, q)?,
        );
        c1.record(
            bump * case1_pfa(tau, z, inst.interferer_index)?,
            quadrature_pfa(&Case1Density::new(z, inst.interferer_index)?, tau, q)?,
        );
        c2.record(
            bump * case2_pfa(tau, z, &inst.location_prior)?,
            quadrature_pfa(&MixtureDensity::case2(z, &inst.location_prior)?, tau, q)?,
        );
        c3.record(
            bump * case3_pfa(tau, z, &inst.absence_prior)?,
            quadrature_pfa(&MixtureDensity::case3(z, &inst.absence_prior)?, tau, q)?,
        );
    }
    Ok(vec![ca, c1, c2, c3])
}

/// The three reduction identities between the detectors.
pub fn check_reductions(cfg: &ValidationConfig) -> Result<Vec<CheckResult>> {
    let mut rng = RngStream::new(cfg.seed, 2);
    let bump = 1.0 + cfg.perturbation;
    let mut to_case2 = CheckResult::new("reduction: case3(pi0=0) = case2", REDUCTION_TOL);
    let mut to_case1 = CheckResult::new("reduction: case2(point mass) = case1", REDUCTION_TOL);
    let mut to_ca = CheckResult::new("reduction: case3(pi0=1) = ca-cfar", REDUCTION_TOL);
    for _ in 0..cfg.reduction_triples {
        let inst = Instance::random(&mut rng)?;
        let (z, tau, n) = (&inst.crp, inst.tau, inst.crp.len());

        let mut no_absence = inst.location_prior.weights().to_vec();
        no_absence.insert(0, 0.0);
        let no_absence = InterferencePrior::with_absence(no_absence)?;
        to_case2.record(bump * case3_pfa(tau, z, &no_absence)?, case2_pfa(tau, z, &inst.location_prior)?);

        let point = InterferencePrior::point_mass(n, inst.interferer_index)?;
        to_case1.record(bump * case2_pfa(tau, z, &point)?, case1_pfa(tau, z, inst.interferer_index)?);

        let all_absent = InterferencePrior::absent_uniform(1.0, n)?;
        to_ca.record(bump * case3_pfa(tau, z, &all_absent)?, ca_cfar_pfa(tau, z)?);
    }
    Ok(vec![to_case2, to_case1, to_ca])
}

/// Each density integrates to one, and equals the negated central
/// difference of its Pfa with step `1e-5 (tau + S)`.
pub fn check_densities(cfg: &ValidationConfig) -> Result<Vec<CheckResult>> {
    let mut rng = RngStream::new(cfg.seed, 3);
    let bump = 1.0 + cfg.perturbation;
    let q = &cfg.quadrature;
    let mut norm = CheckResult::new("normalization: all densities", NORMALIZATION_TOL);
    let mut deriv = CheckResult::new("derivative: density = -dPfa/dtau", DERIVATIVE_TOL);
    for _ in 0..cfg.instances.div_ceil(5).max(20) {
        let inst = Instance::random(&mut rng)?;
        let (z, tau) = (&inst.crp, inst.tau);
        let j = inst.interferer_index;
        let lp = &inst.location_prior;
        let ap = &inst.absence_prior;

        let densities: [Box<dyn PredictiveDensity>; 4] = [
            Box::new(CaCfarDensity::new(z)),
            Box::new(Case1Density::new(z, j)?),
            Box::new(MixtureDensity::case2(z, lp)?),
            Box::new(MixtureDensity::case3(z, ap)?),
        ];
        for d in &densities {
            norm.record(bump * quadrature_pfa(d.as_ref(), 0.0, q)?, 1.0);
        }

        let h = 1e-5 * (tau + z.total());
        let diff = |f: &dyn Fn(f64) -> Result<f64>| -> Result<f64> {
            Ok((f(tau - h)? - f(tau + h)?) / (2.0 * h))
        };
        // tau - h must stay in the domain
        if tau <= h {
            continue;
        }
        deriv.record(bump * predictive_density_ca_cfar(tau, z)?, diff(&|t| ca_cfar_pfa(t, z))?);
        deriv.record(bump * predictive_density_case1(tau, z, j)?, diff(&|t| case1_pfa(t, z, j))?);
        deriv.record(bump * predictive_density_case2(tau, z, lp)?, diff(&|t| case2_pfa(t, z, lp))?);
        deriv.record(bump * predictive_density_case3(tau, z, ap)?, diff(&|t| case3_pfa(t, z, ap))?);
    }
    Ok(vec![norm, deriv])
}

/// Every cross-check, in reporting order.
pub fn run_validation(cfg: &ValidationConfig) -> Result<Vec<CheckResult>> {
    let mut out = check_quadrature(cfg)?;
    out.extend(check_reductions(cfg)?);
    out.extend(check_densities(cfg)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes() {
        let cfg = ValidationConfig {
            instances: 20,
            reduction_triples: 200,
            ..Default::default()
        };
        for check in run_validation(&cfg).unwrap() {
            assert!(check.passed(), "{check:?}");
        }
    }

    #[test]
    fn perturbation_is_caught() {
        let cfg = ValidationConfig {
            instances: 8,
            reduction_triples: 20,
            perturbation: 1e-3,
            ..Default::default()
        };
        let results = run_validation(&cfg).unwrap();
        assert!(results.iter().all(|c| !c.passed()));
    }
}
