use crate::detect::DetectorSpec;
use crate::error::{Error, Result};
use crate::sim::{run_trials, MonteCarloReport, Scenario};
use crate::stat::RngStream;

/// Brute-force false-alarm rate of `spec` under a target-free scenario.
pub fn mc_pfa(
    spec: &DetectorSpec,
    scenario: &Scenario,
    trials: u64,
    rng: &RngStream,
) -> Result<MonteCarloReport> {
    if scenario.target_present {
        return Err(Error::param("false-alarm estimation needs a target-free scenario"));
    }
    run_trials(spec, scenario, trials, rng)
}

/// Unconditional Pfa of the known-location threshold when the excluded cell
/// really holds the interferer: the reduced sum is Gamma(N-1, lambda), so
/// `P(Z0 > c S') = E[exp(-lambda c S')] = (1 + c)^-(N-1)` with
/// `c = alpha^(-1/(N-1)) - 1`, independent of lambda.
pub fn case1_unconditional_pfa(alpha: f64, n_cells: usize) -> f64 {
    let power = (n_cells - 1) as f64;
    let c = alpha.powf(-1.0 / power) - 1.0;
    (1.0 + c).powf(-power)
}

/// Same identity for cell averaging over all N clutter cells.
pub fn ca_cfar_unconditional_pfa(alpha: f64, n_cells: usize) -> f64 {
    let power = n_cells as f64;
    let c = alpha.powf(-1.0 / power) - 1.0;
    (1.0 + c).powf(-power)
}

/// True when `alpha` lies in the Wilson score interval of `report`, i.e.
/// `|p_hat - alpha| <= z sqrt(alpha (1 - alpha) / n)`.
pub fn consistent_with(report: &MonteCarloReport, alpha: f64, z: f64) -> bool {
    let half_width = z * (alpha * (1.0 - alpha) / report.trials as f64).sqrt();
    (report.estimate - alpha).abs() <= half_width
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stat::Z_99;

    #[test]
    fn identities_return_alpha() {
        for alpha in [1e-2, 1e-3, 1e-6] {
            for n in [2, 16, 64] {
                assert!((case1_unconditional_pfa(alpha, n) / alpha - 1.0).abs() < 1e-12);
                assert!((ca_cfar_unconditional_pfa(alpha, n) / alpha - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_targets_and_zero_trials() {
        let spec = DetectorSpec::ca_cfar(1e-2).unwrap();
        let h1 = Scenario::clutter_only(8, 1.0).unwrap().with_target(3.0).unwrap();
        let rng = RngStream::new(1, 0);
        assert!(mc_pfa(&spec, &h1, 10, &rng).is_err());
        let h0 = Scenario::clutter_only(8, 1.0).unwrap();
        assert!(mc_pfa(&spec, &h0, 0, &rng).is_err());
    }

    #[test]
    fn case1_hits_alpha_with_interferer_in_place() {
        let n = 16;
        let spec = DetectorSpec::case1(1e-2, n).unwrap();
        let scenario = Scenario::clutter_only(n, 1.0).unwrap().with_interferer(n, 15.0).unwrap();
        let report = mc_pfa(&spec, &scenario, 1_000_000, &RngStream::new(17, 0)).unwrap();
        assert!(consistent_with(&report, 1e-2, Z_99), "{report:?}");
        assert!(report.ci_low <= report.estimate && report.estimate <= report.ci_high);
    }
}
