use nalgebra::DMatrix;
use netlocal::quantumcorr::{build_operators, full_table};
use num_complex::Complex64;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn table_matches_closed_forms(eta in 0.0f64..=1.0) {
        prop_assert!(full_table(eta).is_ok());
    }

    #[test]
    fn probabilities_are_a_distribution_per_setting(eta in 0.0f64..=1.0) {
        for block in full_table(eta).unwrap().probabilities() {
            prop_assert!(block.iter().all(|&p| p >= -1e-12));
            prop_assert!((block.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn charlie_side_marginal_ignores_alice(eta in 0.0f64..=1.0) {
        let p = full_table(eta).unwrap().probabilities();
        for z in 0..2 {
            for rest in 0..8 {
                let marginal = |x: usize| p[2 * x + z][rest] + p[2 * x + z][8 + rest];
                prop_assert!((marginal(0) - marginal(1)).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn projectors_and_observables_are_valid(eta in 0.0f64..=1.0) {
        let obs = build_operators(eta).unwrap();
        for p in &obs.bell {
            prop_assert!((p * p - p).iter().all(|z| z.norm() <= 1e-12));
            prop_assert!((p - p.adjoint()).iter().all(|z| z.norm() <= 1e-12));
        }
        let sum = obs.bell.iter().fold(DMatrix::<Complex64>::zeros(4, 4), |acc, p| acc + p);
        prop_assert!((sum - DMatrix::identity(4, 4)).iter().all(|z| z.norm() <= 1e-12));
    }

    #[test]
    fn outside_the_unit_interval_is_rejected(eta in prop_oneof![-5.0f64..-1e-9, 1.0f64 + 1e-9..5.0]) {
        prop_assert!(build_operators(eta).is_err());
    }
}
