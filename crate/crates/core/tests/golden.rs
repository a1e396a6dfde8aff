//! Step-by-step replays of two worked error-tolerant searches on the
//! 41-point grid over [-1, 1] with weights 0.25 / 0.35 / 0.45, plus the
//! exhaustive pair-rule table.

use fuzzy_refine_core::{
    build_variant_space, classify_pair, tolerant_step, validate_error_pattern, Direction,
    IntervalAction, Modifier, PositionRule, Power, SearchState, StepWeights, TolerantState,
    VariantSpace,
};

use Direction::{Greater, Less};
use Power::{Moderately, Significantly, Slightly};

const TOL: f64 = 1e-12;

fn space() -> VariantSpace {
    build_variant_space(0.0, 1.0, 0.05).unwrap()
}

fn weights() -> StepWeights {
    StepWeights::new(0.25, 0.35, 0.45).unwrap()
}

/// (input, correct?, updated interval, dx, next position, next variant)
type Row = (Modifier, bool, (f64, f64), f64, f64, f64);

fn m(p: Power, d: Direction) -> Modifier {
    Modifier::new(p, d)
}

fn replay(rows: &[Row], rule: PositionRule) -> TolerantState {
    let space = space();
    let w = weights();
    let mut state = TolerantState::new(SearchState::initial(&space).with_rule(rule));
    for (i, &(input, _, (lo, hi), dx, next, variant)) in rows.iter().enumerate() {
        state = tolerant_step(state, input, &w, &space).unwrap();
        let rec = state.search().history()[i];
        assert!(
            (rec.lower_after - lo).abs() < TOL && (rec.upper_after - hi).abs() < TOL,
            "step {i}: interval [{}, {}] expected [{lo}, {hi}]",
            rec.lower_after,
            rec.upper_after
        );
        assert!((rec.delta_x - dx).abs() < TOL, "step {i}: dx {} expected {dx}", rec.delta_x);
        if rule == PositionRule::Continuous {
            assert!(
                (rec.to_position - next).abs() < TOL,
                "step {i}: x {} expected {next}",
                rec.to_position
            );
        }
        let shown = state.search().variant(&space);
        assert!(
            (shown - variant).abs() < TOL,
            "step {i}: variant {shown} expected {variant}"
        );
        assert_eq!(space.index_of(shown), Some(space.nearest_index(variant, None)));
    }
    state
}

fn target_04() -> Vec<Row> {
    vec![
        (m(Moderately, Greater), true, (-1.0, 1.0), 0.7, 0.7, 0.7),
        (m(Slightly, Greater), false, (0.0, 1.0), 0.25, 0.95, 0.95),
        (m(Moderately, Less), true, (0.0, 1.0), 0.35, 0.6, 0.6),
        (m(Slightly, Less), true, (0.0, 0.95), 0.2375, 0.3625, 0.35),
        (m(Slightly, Less), false, (0.0, 0.6), 0.15, 0.2125, 0.2),
        (m(Moderately, Greater), true, (0.0, 0.6), 0.21, 0.4225, 0.4),
    ]
}

// Row 0 is "significantly less" and row 7 "slightly greater"; both are the
// only readings consistent with the positions and intervals that follow.
fn target_minus_045() -> Vec<Row> {
    vec![
        (m(Significantly, Less), true, (-1.0, 1.0), 0.9, -0.9, -0.9),
        (m(Slightly, Less), false, (-1.0, 0.0), 0.25, -1.0, -1.0),
        (m(Moderately, Greater), true, (-1.0, 0.0), 0.35, -0.65, -0.65),
        (m(Slightly, Less), false, (-1.0, 0.0), 0.25, -0.9, -0.9),
        (m(Moderately, Greater), true, (-1.0, 0.0), 0.35, -0.55, -0.55),
        (m(Slightly, Less), false, (-0.9, 0.0), 0.225, -0.775, -0.8),
        (m(Significantly, Greater), true, (-0.9, 0.0), 0.405, -0.37, -0.35),
        (m(Slightly, Greater), false, (-0.775, 0.0), 0.19375, -0.17625, -0.2),
        (m(Moderately, Less), true, (-0.775, 0.0), 0.27125, -0.4475, -0.45),
    ]
}

#[test]
fn replay_target_04_continuous() {
    let s = replay(&target_04(), PositionRule::Continuous);
    assert_eq!(s.search().step_index(), 6);
    assert_eq!(s.search().variant_index(&space()), 28);
}

#[test]
fn replay_target_04_snapping() {
    let s = replay(&target_04(), PositionRule::SnapEachStep);
    let positions: Vec<f64> = s.search().history().iter().map(|r| r.to_position).collect();
    let expected = [0.7, 0.95, 0.6, 0.35, 0.2, 0.4];
    for (got, want) in positions.iter().zip(expected) {
        assert!((got - want).abs() < TOL, "{positions:?}");
    }
}

#[test]
fn replay_target_minus_045() {
    let s = replay(&target_minus_045(), PositionRule::Continuous);
    assert_eq!(s.search().step_index(), 9);
    assert_eq!(s.search().variant_index(&space()), 11);
    // the 0.225 move is 0.25 of the already-reduced interval [-0.9, 0]
    assert!((s.search().history()[5].delta_x - 0.25 * 0.9).abs() < TOL);
}

#[test]
fn snapping_cannot_reproduce_target_minus_045() {
    let space = space();
    let w = weights();
    let mut state = TolerantState::new(
        SearchState::initial(&space).with_rule(PositionRule::SnapEachStep),
    );
    for (input, ..) in target_minus_045() {
        state = tolerant_step(state, input, &w, &space).unwrap();
    }
    assert!((state.search().position() - -0.5).abs() < TOL);
}

#[test]
fn replays_follow_error_model() {
    for rows in [target_04(), target_minus_045()] {
        let labelled: Vec<(Modifier, bool)> = rows.iter().map(|r| (r.0, r.1)).collect();
        assert!(validate_error_pattern(&labelled));
    }
}

#[test]
fn replays_keep_target_inside() {
    for (rows, target) in [(target_04(), 0.4), (target_minus_045(), -0.45)] {
        let space = space();
        let w = weights();
        let mut state = TolerantState::initial(&space);
        for (input, ..) in rows {
            state = tolerant_step(state, input, &w, &space).unwrap();
            let s = state.search();
            assert!(s.lower() - TOL <= target && target <= s.upper() + TOL);
        }
    }
}

fn expected_opposite(first: Modifier, second: Modifier) -> IntervalAction {
    // opposite-direction rows, written out as listed
    use IntervalAction::*;
    let rows = [
        ((Significantly, Greater), (Significantly, Less), Unchanged),
        ((Significantly, Greater), (Moderately, Less), SetLowerToPrevPosition),
        ((Significantly, Greater), (Slightly, Less), SetLowerToPrevPosition),
        ((Moderately, Greater), (Significantly, Less), Unchanged),
        ((Moderately, Greater), (Moderately, Less), SetLowerToPrevPosition),
        ((Moderately, Greater), (Slightly, Less), SetLowerToPrevPosition),
        ((Slightly, Greater), (Significantly, Less), Unchanged),
        ((Slightly, Greater), (Moderately, Less), Unchanged),
        ((Slightly, Greater), (Slightly, Less), SetLowerToPrevPosition),
        ((Significantly, Less), (Significantly, Greater), Unchanged),
        ((Significantly, Less), (Moderately, Greater), SetUpperToPrevPosition),
        ((Significantly, Less), (Slightly, Greater), SetUpperToPrevPosition),
        ((Moderately, Less), (Significantly, Greater), Unchanged),
        ((Moderately, Less), (Moderately, Greater), SetUpperToPrevPosition),
        ((Moderately, Less), (Slightly, Greater), SetUpperToPrevPosition),
        ((Slightly, Less), (Significantly, Greater), Unchanged),
        ((Slightly, Less), (Moderately, Greater), Unchanged),
        ((Slightly, Less), (Slightly, Greater), SetUpperToPrevPosition),
    ];
    rows.iter()
        .find(|(a, b, _)| m(a.0, a.1) == first && m(b.0, b.1) == second)
        .map(|r| r.2)
        .expect("row present")
}

#[test]
fn pair_rules_all_36() {
    let mut checked = 0;
    for first in Modifier::all() {
        for second in Modifier::all() {
            let got = classify_pair(first, second);
            let want = if first.direction == second.direction {
                match first.direction {
                    Greater => IntervalAction::SetLowerToPrevPosition,
                    Less => IntervalAction::SetUpperToPrevPosition,
                }
            } else {
                expected_opposite(first, second)
            };
            assert_eq!(got, want, "{first} then {second}");
            checked += 1;
        }
    }
    assert_eq!(checked, 36);
}
