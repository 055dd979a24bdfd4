use super::crp::ClutterRangeProfile;
use super::pfa::{case2_pfa, case3_pfa};
use super::prior::InterferencePrior;
use super::spec::{check_alpha, Variant};
use crate::error::{Error, Result};

/// Relative accuracy demanded of a bisection threshold: `|pfa - alpha| <= REL * alpha`.
pub const THRESHOLD_REL_TOL: f64 = 1e-10;

/// Maximum number of doublings of the upper bracket.
const MAX_DOUBLINGS: u32 = 64;

/// Cell-averaging threshold `S (alpha^(-1/N) - 1)`.
pub fn ca_cfar_threshold(alpha: f64, crp: &ClutterRangeProfile) -> Result<f64> {
    check_alpha(alpha)?;
    let n = crp.len() as f64;
    Ok(crp.total() * (alpha.powf(-1.0 / n) - 1.0))
}

/// Known-location threshold `S' (alpha^(-1/(N-1)) - 1)`, the exact inverse
/// of [`case1_pfa`](super::pfa::case1_pfa).
pub fn case1_threshold(alpha: f64, crp: &ClutterRangeProfile, interferer_index: usize) -> Result<f64> {
    check_alpha(alpha)?;
    let reduced = crp.direct_excluded_sum(interferer_index)?;
    let power = (crp.len() - 1) as f64;
    Ok(reduced * (alpha.powf(-1.0 / power) - 1.0))
}

/// Solves `pfa_fn(tau) = alpha` for a strictly decreasing `pfa_fn` with
/// `pfa_fn(0) = 1`, starting the bracket at `[0, 1]`.
pub fn bayes_threshold<F>(alpha: f64, pfa_fn: F) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    bayes_threshold_from(alpha, 1.0, pfa_fn)
}

/// As [`bayes_threshold`], with the first upper bracket at `initial_upper`.
///
/// The upper bound is doubled until `pfa_fn(upper) < alpha` (at most 64
/// times), then the bracket is bisected until the Pfa is within
/// [`THRESHOLD_REL_TOL`] of `alpha` or the bracket cannot shrink further.
pub fn bayes_threshold_from<F>(alpha: f64, initial_upper: f64, mut pfa_fn: F) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    check_alpha(alpha)?;
    if !(initial_upper.is_finite() && initial_upper > 0.0) {
        return Err(Error::param(format!("initial bracket must be positive, got {initial_upper}")));
    }
    let tol = THRESHOLD_REL_TOL * alpha;

    let mut lo = 0.0;
    let mut hi = initial_upper;
    let mut pfa_hi = pfa_fn(hi)?;
    let mut doublings = 0;
    while pfa_hi >= alpha {
        if (pfa_hi - alpha).abs() <= tol {
            return Ok(hi);
        }
        if doublings == MAX_DOUBLINGS {
            return Err(Error::Numerical(format!(
                "no tau with Pfa below {alpha} up to {hi:e}"
            )));
        }
        lo = hi;
        hi *= 2.0;
        pfa_hi = pfa_fn(hi)?;
        doublings += 1;
    }
    if (pfa_hi - alpha).abs() <= tol {
        return Ok(hi);
    }

    let mut best = (hi, (pfa_hi - alpha).abs());
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Ok(best.0);
        }
        let p = pfa_fn(mid)?;
        let err = (p - alpha).abs();
        if err < best.1 {
            best = (mid, err);
        }
        if err <= tol {
            return Ok(mid);
        }
        if p > alpha {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

/// Threshold for any variant: closed form for cell averaging and the known
/// location, bisection for the mixture detectors. The bracket starts at the
/// window sum so the search itself scales with the clutter.
pub fn variant_threshold(alpha: f64, variant: &Variant, crp: &ClutterRangeProfile) -> Result<f64> {
    match variant {
        Variant::CaCfar => ca_cfar_threshold(alpha, crp),
        Variant::Case1 { interferer_index } => case1_threshold(alpha, crp, *interferer_index),
        Variant::Case2 { prior } => mixture_threshold(alpha, crp, prior, case2_pfa),
        Variant::Case3 { prior } => mixture_threshold(alpha, crp, prior, case3_pfa),
    }
}

fn mixture_threshold(
    alpha: f64,
    crp: &ClutterRangeProfile,
    prior: &InterferencePrior,
    pfa: fn(f64, &ClutterRangeProfile, &InterferencePrior) -> Result<f64>,
) -> Result<f64> {
    pfa(0.0, crp, prior)?;
    bayes_threshold_from(alpha, crp.total(), |tau| pfa(tau, crp, prior))
}
