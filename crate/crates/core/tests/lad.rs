use bundlechoice_core::data::PanelPeriod;
use bundlechoice_core::designs::{simulate_cross, DesignSpec};
use bundlechoice_core::lad::*;
use bundlechoice_core::{Block, ChoiceOutcome, ColumnKinds, Covariates, CrossSectionDataset, PanelDataset, ParamVector};
use proptest::prelude::*;

fn theta(b: f64, g: f64, r1: f64, r2: f64) -> ParamVector {
    ParamVector { beta: vec![1.0, b], gamma: vec![1.0, g], rho1: vec![r1], rho2: vec![r2], rho_b: vec![0.0] }
}

/// Rows where the first columns of `X1` and `X2` rise with `i` and the
/// first column of `W` falls, everything else zero.
fn ladder(n: usize) -> Covariates {
    let up: Vec<[f64; 2]> = (0..n).map(|i| [i as f64, 0.0]).collect();
    let down: Vec<[f64; 2]> = (0..n).map(|i| [-(i as f64), 0.0]).collect();
    let s: Vec<[f64; 1]> = (0..n).map(|_| [0.0]).collect();
    Covariates::new(Block::from_rows(2, &up).unwrap(), Block::from_rows(2, &up).unwrap(), Block::from_rows(2, &down).unwrap(), Block::from_rows(1, &s).unwrap()).unwrap()
}

#[test]
fn uninformative_pairs_cost_one_per_alternative() {
    let n = 6;
    let data = CrossSectionDataset::new(ladder(n), ColumnKinds::continuous(2, 2, 1), vec![ChoiceOutcome::FIRST; n]).unwrap();
    let probs: Vec<[f64; 4]> = (0..n).map(|i| [0.1 * i as f64, 0.05, 0.2, 0.0]).collect();
    let v = lad_objective_cross_from_probabilities(&data, &theta(0.0, 0.0, 0.0, 0.0), &probs, &ChoiceOutcome::ALL).unwrap();
    assert_eq!(v, (n * (n - 1) / 2) as f64 * 4.0);
}

#[test]
fn identical_periods_fire_both_indicators_everywhere() {
    let c = ladder(3);
    let periods = vec![PanelPeriod { covariates: c.clone(), choices: vec![ChoiceOutcome::NONE; 3] }, PanelPeriod { covariates: c, choices: vec![ChoiceOutcome::BUNDLE; 3] }];
    let data = PanelDataset::new(periods, ColumnKinds::continuous(2, 2, 1)).unwrap();
    let deltas = vec![[0.3, -0.2, 0.1, -0.4]; 3];
    let v = lad_objective_panel_from_deltas(&data, &theta(0.5, -1.0, 2.0, 0.0), &deltas, &ChoiceOutcome::ALL).unwrap();
    // Each alternative: (|1 - dp| + |1 + dp|) * 2 + (1 - 2) = 3.
    assert!((v - 3.0 * 12.0).abs() < 1e-12, "{v}");
}

#[test]
fn fitted_models_and_probabilities_give_the_same_criterion() {
    use bundlechoice_core::firststage::{ChoiceProbModel, NwConfig, NwModel};
    let d = simulate_cross(&DesignSpec::builtin(1).unwrap(), 40, 3).unwrap();
    let nw = NwModel::fit(&d, &NwConfig::default()).unwrap();
    let models: Vec<ChoiceProbModel> = ChoiceOutcome::ALL.iter().map(|&o| ChoiceProbModel::NadarayaWatson { model: nw.clone(), target: o }).collect();
    let probs: Vec<[f64; 4]> = (0..d.len()).map(|i| std::array::from_fn(|k| models[k].predict(&d.covariates.row(i).features()).unwrap())).collect();
    let t = theta(0.7, 1.3, 0.9, 1.1);
    let a = lad_objective_cross(&d, &t, &models).unwrap();
    let b = lad_objective_cross_from_probabilities(&d, &t, &probs, &ChoiceOutcome::ALL).unwrap();
    assert!((a - b).abs() < 1e-9);
    let terms = LadTerms::cross(&d, &probs, &ChoiceOutcome::ALL).unwrap();
    assert!((terms.eval(&t) - b).abs() < 1e-9);
}

#[test]
fn out_of_range_differences_are_rejected() {
    let d = simulate_cross(&DesignSpec::builtin(1).unwrap(), 5, 3).unwrap();
    let mut probs = vec![[0.25; 4]; 5];
    probs[0][1] = 1.8;
    assert!(lad_objective_cross_from_probabilities(&d, &theta(1.0, 1.0, 1.0, 1.0), &probs, &ChoiceOutcome::ALL).is_err());
    assert!(LadTerms::cross(&d, &probs, &ChoiceOutcome::ALL).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn criterion_depends_on_index_signs_only(seed in 0u64..10_000, b in -3.0f64..3.0, g in -3.0f64..3.0, r1 in -3.0f64..3.0, r2 in -3.0f64..3.0, c in 0.1f64..10.0, cb in 0.1f64..10.0) {
        let d = simulate_cross(&DesignSpec::builtin(1).unwrap(), 12, seed).unwrap();
        let probs: Vec<[f64; 4]> = (0..12).map(|i| [0.1, 0.02 * i as f64, 0.3, 0.05]).collect();
        let terms = LadTerms::cross(&d, &probs, &ChoiceOutcome::ALL).unwrap();
        let t = theta(b, g, r1, r2);
        let scaled = ParamVector { beta: t.beta.iter().map(|v| v * c).collect(), gamma: t.gamma.iter().map(|v| v * cb).collect(), rho1: vec![r1 * c], rho2: vec![r2 * c], rho_b: vec![0.0] };
        prop_assert!((terms.eval(&t) - terms.eval(&scaled)).abs() < 1e-9);
    }
}
