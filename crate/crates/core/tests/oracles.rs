mod support;

use support::oracles::*;

#[test]
fn kernel_moments_match_their_order() {
    let bad = kernel_moment_violations();
    assert!(bad.is_empty(), "{bad:?}");
}

#[test]
fn backpropagation_matches_central_differences() {
    let worst = mlp_gradient_max_relative_error(20);
    assert!(worst < 1e-5, "max relative error {worst}");
}

#[test]
fn cross_lad_criterion_is_minimized_only_at_the_truth() {
    let g = lad_identification_cross(150, 11);
    assert!(g.strict(), "{g:?}");
}

#[test]
fn panel_lad_criterion_is_minimized_only_at_the_truth() {
    let g = lad_identification_panel(400, 21);
    assert!(g.strict(), "{g:?}");
}

#[test]
fn cross_probabilities_are_monotone_in_each_index() {
    let bad = monotonicity_violations(1, &[[0.0; 3]]);
    assert!(bad.is_empty(), "{bad:?}");
}

#[test]
fn panel_probabilities_are_monotone_given_fixed_effects() {
    let bad = monotonicity_violations(3, &[[0.5, -0.5, 0.25], [-1.0, 0.3, 0.0]]);
    assert!(bad.is_empty(), "{bad:?}");
}
