use bayescfar::detect::{
    ca_cfar_pfa, case1_pfa, case2_pfa, case3_pfa, decide, variant_pfa, variant_threshold,
    ClutterRangeProfile, DetectorSpec, InterferencePrior, Variant,
};
use proptest::prelude::*;

fn window(max_n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.01..20.0f64, 2..=max_n)
}

fn weights(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0..1.0f64, n).prop_filter_map("all-zero prior", |raw| {
        let total: f64 = raw.iter().sum();
        (total > 1e-3).then(|| raw.into_iter().map(|w| w / total).collect())
    })
}

/// Window plus a location prior and an absence prior of matching size.
fn instance(max_n: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>, Vec<f64>, usize)> {
    window(max_n).prop_flat_map(|cells| {
        let n = cells.len();
        (Just(cells), weights(n), weights(n + 1), 1..=n)
    })
}

fn variants(loc: &[f64], abs: &[f64], index: usize) -> Vec<Variant> {
    vec![
        Variant::CaCfar,
        Variant::Case1 { interferer_index: index },
        Variant::Case2 { prior: InterferencePrior::location(loc.to_vec()).unwrap() },
        Variant::Case3 { prior: InterferencePrior::with_absence(abs.to_vec()).unwrap() },
    ]
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        ((a - b) / b).abs()
    }
}

/// Textbook linear-domain evaluation of the mixture Pfa (with pi_0 possibly 0).
fn naive_mixture_pfa(tau: f64, z: &[f64], absence: f64, cell_weights: &[f64]) -> f64 {
    let n = z.len() as i32;
    let s: f64 = z.iter().sum();
    let mut num = absence * (n - 1) as f64 * (tau + s).powi(-n);
    let mut den = absence * (n - 1) as f64 * s.powi(-n);
    for (j, (&zj, &pj)) in z.iter().zip(cell_weights).enumerate() {
        let sj: f64 = z.iter().enumerate().filter(|(i, _)| *i != j).map(|(_, v)| v).sum();
        num += pj / zj * (tau + sj).powi(-(n - 1));
        den += pj / zj * sj.powi(-(n - 1));
    }
    num / den
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn joint_scale_invariance((cells, loc, abs, index) in instance(32), t in 0.0..3.0f64,
                              c in prop::sample::select(vec![1e-3, 0.37, 1.0, 7.5, 1e3])) {
        let crp = ClutterRangeProfile::new(cells).unwrap();
        let scaled = crp.scaled(c).unwrap();
        let tau = t * crp.total();
        for v in variants(&loc, &abs, index) {
            let a = variant_pfa(tau, &v, &crp).unwrap();
            let b = variant_pfa(c * tau, &v, &scaled).unwrap();
            prop_assert!(rel(b, a) <= 1e-9, "{v:?}: {a} vs {b}");
        }
    }

    #[test]
    fn decisions_survive_joint_scaling((cells, loc, abs, index) in instance(16), t in 0.0..2.0f64,
                                       c in prop::sample::select(vec![1e-3, 1.0, 1e3])) {
        let crp = ClutterRangeProfile::new(cells).unwrap();
        let scaled = crp.scaled(c).unwrap();
        let z0 = t * crp.total();
        for v in variants(&loc, &abs, index) {
            let spec = DetectorSpec::new(v, 0.05).unwrap();
            let a = decide(z0, &spec, &crp).unwrap();
            // skip draws sitting on the decision boundary
            if (a.pfa_at_cut / 0.05 - 1.0).abs() < 1e-8 {
                continue;
            }
            let b = decide(c * z0, &spec, &scaled).unwrap();
            prop_assert_eq!(a.target_declared, b.target_declared);
        }
    }

    #[test]
    fn strictly_decreasing_from_one((cells, loc, abs, index) in instance(32), t1 in 0.0..2.0f64, dt in 1e-3..2.0f64) {
        let crp = ClutterRangeProfile::new(cells).unwrap();
        let s = crp.total();
        for v in variants(&loc, &abs, index) {
            prop_assert_eq!(variant_pfa(0.0, &v, &crp).unwrap(), 1.0);
            let p1 = variant_pfa(t1 * s, &v, &crp).unwrap();
            let p2 = variant_pfa((t1 + dt) * s, &v, &crp).unwrap();
            prop_assert!(p1 > p2, "{v:?}: {p1} !> {p2}");
            prop_assert!(variant_pfa(1e12 * s, &v, &crp).unwrap() < 1e-9);
        }
    }

    #[test]
    fn reduction_chain((cells, loc, _abs, index) in instance(32), t in 0.0..3.0f64) {
        let crp = ClutterRangeProfile::new(cells).unwrap();
        let n = crp.len();
        let tau = t * crp.total();

        let mut zero_absence = loc.clone();
        zero_absence.insert(0, 0.0);
        let a = case3_pfa(tau, &crp, &InterferencePrior::with_absence(zero_absence).unwrap()).unwrap();
        let b = case2_pfa(tau, &crp, &InterferencePrior::location(loc).unwrap()).unwrap();
        prop_assert!(rel(a, b) <= 1e-12);

        let point = InterferencePrior::point_mass(n, index).unwrap();
        let a = case2_pfa(tau, &crp, &point).unwrap();
        let b = case1_pfa(tau, &crp, index).unwrap();
        prop_assert!(rel(a, b) <= 1e-12);

        let all_absent = InterferencePrior::absent_uniform(1.0, n).unwrap();
        let a = case3_pfa(tau, &crp, &all_absent).unwrap();
        let b = ca_cfar_pfa(tau, &crp).unwrap();
        prop_assert!(rel(a, b) <= 1e-12);
    }

    #[test]
    fn case1_ignores_interferer_value(cells in window(16), boost in 1e-3..1e6f64, t in 0.0..2.0f64) {
        let n = cells.len();
        let crp = ClutterRangeProfile::new(cells.clone()).unwrap();
        let mut other = cells;
        other[n - 1] *= boost;
        let other = ClutterRangeProfile::new(other).unwrap();
        let tau = t * crp.excluded_sum(n).unwrap();
        prop_assert_eq!(case1_pfa(tau, &crp, n).unwrap(), case1_pfa(tau, &other, n).unwrap());
    }

    #[test]
    fn log_domain_matches_linear_domain((cells, loc, abs, _index) in instance(8), t in 0.0..2.0f64) {
        let crp = ClutterRangeProfile::new(cells.clone()).unwrap();
        let tau = t * crp.total();
        let naive2 = naive_mixture_pfa(tau, &cells, 0.0, &loc);
        let fast2 = case2_pfa(tau, &crp, &InterferencePrior::location(loc).unwrap()).unwrap();
        prop_assert!(rel(fast2, naive2) <= 1e-10, "{fast2} vs {naive2}");
        let naive3 = naive_mixture_pfa(tau, &cells, abs[0], &abs[1..]);
        let fast3 = case3_pfa(tau, &crp, &InterferencePrior::with_absence(abs).unwrap()).unwrap();
        prop_assert!(rel(fast3, naive3) <= 1e-10, "{fast3} vs {naive3}");
    }

    #[test]
    fn decision_matches_threshold((cells, loc, abs, index) in instance(16),
                                  alpha in prop::sample::select(vec![1e-1, 1e-2, 1e-4]),
                                  t in 0.0..3.0f64) {
        let crp = ClutterRangeProfile::new(cells).unwrap();
        let z0 = t * crp.total();
        for v in variants(&loc, &abs, index) {
            let tau = variant_threshold(alpha, &v, &crp).unwrap();
            if (z0 / tau - 1.0).abs() < 1e-8 {
                continue;
            }
            let spec = DetectorSpec::new(v, alpha).unwrap();
            let d = decide(z0, &spec, &crp).unwrap();
            prop_assert_eq!(d.target_declared, z0 > tau);
            prop_assert_eq!(d.pfa_at_cut < alpha, z0 > tau);
        }
    }

    #[test]
    fn threshold_round_trip((cells, loc, abs, index) in instance(32),
                            alpha in prop::sample::select(vec![1e-2, 1e-4, 1e-6])) {
        let crp = ClutterRangeProfile::new(cells).unwrap();
        for v in variants(&loc, &abs, index) {
            let tau = variant_threshold(alpha, &v, &crp).unwrap();
            let p = variant_pfa(tau, &v, &crp).unwrap();
            prop_assert!(rel(p, alpha) <= 1e-9, "{v:?}: {p} vs {alpha}");
        }
    }
}

#[test]
fn zero_cell_is_a_domain_error() {
    assert!(matches!(
        ClutterRangeProfile::new(vec![1.0, 0.0, 2.0]),
        Err(bayescfar::Error::Domain(_))
    ));
}
