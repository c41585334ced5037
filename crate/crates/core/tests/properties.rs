use chrono::NaiveDate;
use proptest::prelude::*;

use stormrisk::covariate::{return_level_covariate, Coefficients, CovariateDensity};
use stormrisk::declustering::{decluster, BlockRule, TimeSeries};
use stormrisk::risk::{risk_curve_cov, RiskQuery, RiskStatus};

fn series(values: Vec<f64>) -> TimeSeries {
    TimeSeries::daily(NaiveDate::from_ymd_opt(2001, 3, 1).unwrap(), values, BlockRule::WaterYear).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn declustered_events_are_exceedances(values in prop::collection::vec(0.0..10.0f64, 1..600),
                                          u in 5.0..9.5f64, w in 1usize..10) {
        let es = decluster(&series(values.clone()), u, w).unwrap();
        let exceed = values.iter().filter(|v| **v > u).count();
        prop_assert!(es.len() <= exceed);
        prop_assert_eq!(es.is_empty(), exceed == 0);
        prop_assert!(es.magnitudes().iter().all(|z| *z > u));
        let times: Vec<f64> = es.events().iter().map(|e| e.block as f64 + e.time_in_block).collect();
        prop_assert!(times.windows(2).all(|t| t[1] > t[0]));
    }

    #[test]
    fn one_long_run_keeps_only_the_maximum(values in prop::collection::vec(0.0..10.0f64, 1..300)) {
        let es = decluster(&series(values.clone()), 5.0, 1000).unwrap();
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if max > 5.0 {
            prop_assert_eq!(es.magnitudes(), vec![max]);
        } else {
            prop_assert!(es.is_empty());
        }
    }

    #[test]
    fn risk_ratio_is_numerator_over_denominator(mu1 in 0.0..3.0f64, sigma1 in -0.3..0.3f64,
                                                xi in -0.3..0.3f64, t in 0.05..0.95f64,
                                                period in 2.0..500.0f64) {
        let c = Coefficients { mu0: 0.0, mu1, sigma0: 0.3, sigma1, xi0: xi, xi1: 0.0 };
        let h = CovariateDensity::truncated_normal(4.0, 256);
        let q = RiskQuery::new(t, period, vec![2.0, 10.0, 100.0, 1000.0]).unwrap();
        let curve = risk_curve_cov(&q, &c, &h).unwrap();
        for p in &curve.points {
            prop_assert!(p.numerator >= 0.0 && p.denominator >= 0.0);
            if p.status == RiskStatus::Defined {
                prop_assert!(p.r >= 0.0);
                prop_assert_eq!(p.r, p.numerator / p.denominator);
            }
        }
    }

    #[test]
    fn covariate_levels_increase_with_period(mu1 in 0.0..3.0f64, xi in -0.3..0.3f64, t in 1.1..1e3f64) {
        let c = Coefficients { mu0: 1.0, mu1, sigma0: 0.0, sigma1: 0.0, xi0: xi, xi1: 0.0 };
        let h = CovariateDensity::truncated_normal(4.0, 256);
        let a = return_level_covariate(t, &c, &h).unwrap();
        let b = return_level_covariate(t * 1.5, &c, &h).unwrap();
        prop_assert!(b > a);
    }
}
