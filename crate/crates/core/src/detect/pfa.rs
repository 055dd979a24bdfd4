//! Closed-form false-alarm probabilities.
//!
//! Every detector here has a Pfa of the same shape: a normalized mixture of
//! Pareto type II survival functions,
//!
//! ```text
//! P_FA(tau) = sum_k w_k (1 + tau/s_k)^(-p_k) / sum_k w_k
//! ```
//!
//! with one component per interference hypothesis. For hypothesis "cell j
//! holds the interferer" the scale is `S_j` (window sum without cell j), the
//! power is `N - 1` and `w_j = pi_j / z_j * S_j^-(N-1)`. For "no interferer"
//! the scale is the full sum `S`, the power is `N` and
//! `w_0 = pi_0 (N - 1) S^-N`. Cell averaging is the single no-interferer
//! component; the known-location detector is the single component for its
//! cell. Weights are handled as logarithms throughout.

use super::crp::ClutterRangeProfile;
use super::prior::InterferencePrior;
use super::spec::Variant;
use crate::error::{Error, Result};
use crate::stat::LogSumExp;

pub(crate) fn check_tau(tau: f64) -> Result<()> {
    if tau.is_finite() && tau >= 0.0 {
        Ok(())
    } else {
        Err(Error::param(format!("tau must be finite and nonnegative, got {tau}")))
    }
}

/// `[S / (tau + S)]^N`, the cell-averaging CFAR false-alarm probability.
pub fn ca_cfar_pfa(tau: f64, crp: &ClutterRangeProfile) -> Result<f64> {
    check_tau(tau)?;
    let n = crp.len() as f64;
    Ok((-n * (tau / crp.total()).ln_1p()).exp())
}

/// `[S' / (tau + S')]^(N-1)` with `S'` the window sum without the interferer.
pub fn case1_pfa(tau: f64, crp: &ClutterRangeProfile, interferer_index: usize) -> Result<f64> {
    check_tau(tau)?;
    let reduced = crp.direct_excluded_sum(interferer_index)?;
    let power = (crp.len() - 1) as f64;
    Ok((-power * (tau / reduced).ln_1p()).exp())
}

fn check_prior(crp: &ClutterRangeProfile, prior: &InterferencePrior, with_absence: bool) -> Result<()> {
    if prior.has_absence() != with_absence {
        return Err(Error::param(if with_absence {
            "prior must include the absence mass pi_0"
        } else {
            "prior must not include an absence mass"
        }));
    }
    if prior.n_cells() != crp.len() {
        return Err(Error::param(format!(
            "prior covers {} cells but the window has {}",
            prior.n_cells(),
            crp.len()
        )));
    }
    Ok(())
}

/// Log-domain evaluation of the mixture Pfa for a (validated) prior.
/// Components with zero prior weight are skipped.
fn mixture_pfa(tau: f64, crp: &ClutterRangeProfile, prior: &InterferencePrior) -> f64 {
    let n = crp.len();
    let cell_power = (n - 1) as f64;
    let mut numerator = LogSumExp::new();
    let mut denominator = LogSumExp::new();

    let log_absence = prior.log_absence();
    if log_absence > f64::NEG_INFINITY {
        let total = crp.total();
        let n = n as f64;
        let log_w = log_absence + cell_power.ln() - n * total.ln();
        denominator.push(log_w);
        numerator.push(log_w - n * (tau / total).ln_1p());
    }

    for (j, (&z, &log_pi)) in crp.cells().iter().zip(prior.log_cell_weights()).enumerate() {
        if log_pi == f64::NEG_INFINITY {
            continue;
        }
        let reduced = crp.excluded_sum_unchecked(j);
        let log_w = log_pi - z.ln() - cell_power * reduced.ln();
        denominator.push(log_w);
        numerator.push(log_w - cell_power * (tau / reduced).ln_1p());
    }

    (numerator.value() - denominator.value()).exp().min(1.0)
}

/// Pfa of the unknown-location detector (exactly one interferer).
pub fn case2_pfa(tau: f64, crp: &ClutterRangeProfile, prior: &InterferencePrior) -> Result<f64> {
    check_tau(tau)?;
    check_prior(crp, prior, false)?;
    Ok(mixture_pfa(tau, crp, prior))
}

/// Pfa of the detector that also allows for no interferer (`pi_0`).
pub fn case3_pfa(tau: f64, crp: &ClutterRangeProfile, prior: &InterferencePrior) -> Result<f64> {
    check_tau(tau)?;
    check_prior(crp, prior, true)?;
    Ok(mixture_pfa(tau, crp, prior))
}

/// Dispatches to the Pfa of `variant`.
pub fn variant_pfa(tau: f64, variant: &Variant, crp: &ClutterRangeProfile) -> Result<f64> {
    match variant {
        Variant::CaCfar => ca_cfar_pfa(tau, crp),
        Variant::Case1 { interferer_index } => case1_pfa(tau, crp, *interferer_index),
        Variant::Case2 { prior } => case2_pfa(tau, crp, prior),
        Variant::Case3 { prior } => case3_pfa(tau, crp, prior),
    }
}
