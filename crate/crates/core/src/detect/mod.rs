//! Pfa evaluators, thresholds and decision rules.

mod crp;
mod pfa;
mod prior;
mod spec;
mod threshold;

pub use crp::ClutterRangeProfile;
pub use pfa::{ca_cfar_pfa, case1_pfa, case2_pfa, case3_pfa, variant_pfa};
pub use prior::InterferencePrior;
pub use spec::{Decision, DesignPfa, DetectorSpec, Variant, VariantKind};
pub use threshold::{
    bayes_threshold, bayes_threshold_from, ca_cfar_threshold, case1_threshold, variant_threshold,
    THRESHOLD_REL_TOL,
};

use crate::error::Result;

/// Tests the cell under test `z0` against the window `crp`.
///
/// Cell averaging and the known-location detector compare `z0` with their
/// closed-form threshold. The mixture detectors declare a target when
/// `P_FA(z0)` is strictly below the design Pfa; equality is no detection.
pub fn decide(z0: f64, spec: &DetectorSpec, crp: &ClutterRangeProfile) -> Result<Decision> {
    spec.validate_for(crp.len())?;
    let alpha = spec.alpha();
    let pfa_at_cut = variant_pfa(z0, &spec.variant, crp)?;
    match &spec.variant {
        Variant::CaCfar | Variant::Case1 { .. } => {
            let threshold = variant_threshold(alpha, &spec.variant, crp)?;
            Ok(Decision {
                target_declared: z0 > threshold,
                pfa_at_cut,
                threshold: Some(threshold),
            })
        }
        Variant::Case2 { .. } | Variant::Case3 { .. } => Ok(Decision {
            target_declared: pfa_at_cut < alpha,
            pfa_at_cut,
            threshold: None,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case1_decisions() {
        let crp = ClutterRangeProfile::new(vec![1.0, 2.0, 50.0]).unwrap();
        let spec = DetectorSpec::case1(0.25, 3).unwrap();
        let d = decide(4.0, &spec, &crp).unwrap();
        assert!(d.target_declared);
        assert_eq!(d.threshold, Some(3.0));
        let d = decide(3.0, &spec, &crp).unwrap();
        assert!(!d.target_declared);
    }

    #[test]
    fn case2_decision_is_strict_comparison() {
        let crp = ClutterRangeProfile::new(vec![1.0, 2.0, 3.0]).unwrap();
        let spec = DetectorSpec::case2(0.5, InterferencePrior::uniform(3).unwrap()).unwrap();
        let d = decide(1.0, &spec, &crp).unwrap();
        assert!((d.pfa_at_cut - 0.63361).abs() < 1e-5);
        assert!(!d.target_declared);
        assert_eq!(d.threshold, None);

        // alpha equal to the Pfa at the cut: a tie is not a detection
        let tie = DetectorSpec::case2(d.pfa_at_cut, InterferencePrior::uniform(3).unwrap()).unwrap();
        assert!(!decide(1.0, &tie, &crp).unwrap().target_declared);
    }

    #[test]
    fn mismatched_window_is_rejected() {
        let crp = ClutterRangeProfile::new(vec![1.0, 2.0, 3.0]).unwrap();
        let spec = DetectorSpec::case3(0.1, InterferencePrior::absent_uniform(0.5, 4).unwrap()).unwrap();
        assert!(decide(1.0, &spec, &crp).is_err());
    }
}
