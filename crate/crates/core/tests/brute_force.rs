mod support;

use bundlechoice_core::mrc::{mrc_beta_objective, mrc_gamma_objective};
use bundlechoice_core::panel_ms::{ms_beta_objective, ms_gamma_objective};
use proptest::prelude::*;

#[test]
fn hundred_fixed_cases_agree() {
    support::criteria::brute_force_equivalence(100).unwrap();
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cross_criteria_agree(seed in 0u64..1_000_000, n in 2usize..=6, order in prop::sample::select(vec![2u32, 4, 6]), h in 0.3f64..3.0, b2 in -3.0f64..3.0, r2 in -3.0f64..3.0) {
        let d = support::criteria::random_cross(seed, n);
        let (b, r) = ([1.0, b2], [1.0, r2]);
        prop_assert!(support::criteria::close(mrc_beta_objective(&d, &b, h, order).unwrap(), support::criteria::mrc_beta(&d, &b, h, order)));
        prop_assert!(support::criteria::close(mrc_gamma_objective(&d, &r, &b, h, order).unwrap(), support::criteria::mrc_gamma(&d, &r, &b, h, order)));
    }

    #[test]
    fn panel_criteria_agree(seed in 0u64..1_000_000, n in 1usize..=6, order in prop::sample::select(vec![2u32, 4, 6]), h in 0.3f64..3.0, b2 in -3.0f64..3.0, r2 in -3.0f64..3.0) {
        let d = support::criteria::random_panel(seed, n);
        let (b, r) = ([1.0, b2], [1.0, r2]);
        prop_assert!(support::criteria::close(ms_beta_objective(&d, &b, h, order).unwrap(), support::criteria::ms_beta(&d, &b, h, order)));
        prop_assert!(support::criteria::close(ms_gamma_objective(&d, &r, h, order).unwrap(), support::criteria::ms_gamma(&d, &r, h, order)));
    }
}
