use serde::{Deserialize, Serialize};

use crate::error::{invalid, FuzzyError, Result};
use crate::membership::StepWeights;
use crate::modifier::{Direction, Modifier};
use crate::space::VariantSpace;
use crate::tolerant::IntervalAction;

/// How the position is stored between steps.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PositionRule {
    /// Keep the exact position reached by each move; the reported variant is
    /// the grid point nearest to it.
    #[default]
    Continuous,
    /// Replace the position with its grid variant after every move.
    SnapEachStep,
}

/// One applied input, with the interval and position on both sides of it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: u64,
    pub modifier: Modifier,
    pub from_position: f64,
    pub lower_before: f64,
    pub upper_before: f64,
    /// Interval after the step, as seen by the next input.
    pub lower_after: f64,
    pub upper_after: f64,
    pub delta_x: f64,
    /// Position after clamping (and snapping, under [`PositionRule::SnapEachStep`]).
    pub to_position: f64,
    /// Pair rule that fired, for the error-tolerant search.
    pub action: Option<IntervalAction>,
}

/// Working interval, current position and input history of one search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchState {
    lower: f64,
    upper: f64,
    position: f64,
    step_index: u64,
    epsilon: f64,
    rule: PositionRule,
    history: Vec<StepRecord>,
}

impl SearchState {
    /// Starts at `base` on the full variant range with `ε = step / 2`.
    pub fn initial(space: &VariantSpace) -> SearchState {
        SearchState {
            lower: space.lowest(),
            upper: space.highest(),
            position: space.base,
            step_index: 0,
            epsilon: space.step / 2.0,
            rule: PositionRule::default(),
            history: Vec::new(),
        }
    }

    /// Arbitrary starting point, mostly for tests and replays.
    pub fn from_parts(lower: f64, upper: f64, position: f64, epsilon: f64) -> Result<SearchState> {
        if !(lower.is_finite() && upper.is_finite() && position.is_finite()) {
            return Err(invalid("interval and position must be finite"));
        }
        if !(lower <= position && position <= upper) {
            return Err(invalid(format!(
                "position {position} outside [{lower}, {upper}]"
            )));
        }
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(invalid(format!("epsilon must be > 0, got {epsilon}")));
        }
        Ok(SearchState {
            lower,
            upper,
            position,
            step_index: 0,
            epsilon,
            rule: PositionRule::default(),
            history: Vec::new(),
        })
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Result<SearchState> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(invalid(format!("epsilon must be > 0, got {epsilon}")));
        }
        self.epsilon = epsilon;
        Ok(self)
    }

    pub fn with_rule(mut self, rule: PositionRule) -> SearchState {
        self.rule = rule;
        self
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn position(&self) -> f64 {
        self.position
    }

    pub fn step_index(&self) -> u64 {
        self.step_index
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn rule(&self) -> PositionRule {
        self.rule
    }

    pub fn history(&self) -> &[StepRecord] {
        &self.history
    }

    pub fn last_direction(&self) -> Option<Direction> {
        self.history.last().map(|r| r.modifier.direction)
    }

    /// Grid index of the variant currently shown to the user.
    pub fn variant_index(&self, space: &VariantSpace) -> usize {
        space.snap_within(self.position, self.lower, self.upper, self.last_direction())
    }

    /// The variant currently shown to the user; always a grid point.
    pub fn variant(&self, space: &VariantSpace) -> f64 {
        space.point(self.variant_index(space))
    }

    pub fn is_terminated(&self) -> bool {
        is_terminated(self)
    }

    /// Moves from the current position on the current interval and records
    /// the step. Shared by both step rules; the caller has already applied
    /// its interval update and passes the pre-update interval for the record.
    pub(crate) fn advance(
        &mut self,
        input: Modifier,
        weights: &StepWeights,
        space: &VariantSpace,
        before: (f64, f64),
        refine: impl FnOnce(&mut SearchState, f64),
        action: Option<IntervalAction>,
    ) {
        let from = self.position;
        let (move_lower, move_upper) = (self.lower, self.upper);
        let delta_x = weights.weight(input.power) * (move_upper - move_lower);
        let moved = (from + input.direction.sign() * delta_x).clamp(move_lower, move_upper);
        refine(self, from);
        let to = match self.rule {
            PositionRule::Continuous => moved,
            PositionRule::SnapEachStep => space.point(space.snap_within(
                moved,
                self.lower,
                self.upper,
                Some(input.direction),
            )),
        };
        self.position = to;
        self.history.push(StepRecord {
            step: self.step_index,
            modifier: input,
            from_position: from,
            lower_before: before.0,
            upper_before: before.1,
            lower_after: self.lower,
            upper_after: self.upper,
            delta_x,
            to_position: to,
            action,
        });
        self.step_index += 1;
    }

    pub(crate) fn set_lower(&mut self, lower: f64) {
        self.lower = lower;
    }

    pub(crate) fn set_upper(&mut self, upper: f64) {
        self.upper = upper;
    }
}

/// True once the working interval is narrower than `ε` (strictly).
pub fn is_terminated(state: &SearchState) -> bool {
    state.upper - state.lower < state.epsilon
}

/// One step of the simple search.
///
/// The step is `w_power` times the current interval length. After moving
/// (clamped to the interval) the side of the interval behind the previous
/// position is cut off: `Greater` raises `lower` to the old position, `Less`
/// drops `upper` to it.
pub fn simple_step(
    mut state: SearchState,
    input: Modifier,
    weights: &StepWeights,
    space: &VariantSpace,
) -> Result<SearchState> {
    if state.is_terminated() {
        return Err(FuzzyError::StateTerminated);
    }
    let before = (state.lower, state.upper);
    state.advance(
        input,
        weights,
        space,
        before,
        |s, from| match input.direction {
            Direction::Greater => s.lower = from,
            Direction::Less => s.upper = from,
        },
        None,
    );
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modifier::Power;
    use crate::space::build_variant_space;

    fn unit_space() -> VariantSpace {
        build_variant_space(0.0, 1.0, 0.05).unwrap()
    }

    fn weights() -> StepWeights {
        StepWeights::new(0.25, 0.35, 0.45).unwrap()
    }

    const MOD_GREATER: Modifier = Modifier::new(Power::Moderately, Direction::Greater);
    const SIG_GREATER: Modifier = Modifier::new(Power::Significantly, Direction::Greater);

    #[test]
    fn initial_state() {
        let s = SearchState::initial(&unit_space());
        assert_eq!((s.lower(), s.upper(), s.position()), (-1.0, 1.0, 0.0));
        assert_eq!(s.epsilon(), 0.025);
        assert_eq!(s.step_index(), 0);
    }

    #[test]
    fn opening_move() {
        let space = unit_space();
        let s = simple_step(SearchState::initial(&space), MOD_GREATER, &weights(), &space).unwrap();
        assert_eq!((s.lower(), s.upper()), (0.0, 1.0));
        assert!((s.position() - 0.7).abs() < 1e-12);
        assert_eq!(s.variant_index(&space), 34);
        let rec = s.history()[0];
        assert!((rec.delta_x - 0.7).abs() < 1e-12);
        assert_eq!(rec.from_position, 0.0);
        assert_eq!(s.step_index(), 1);
    }

    #[test]
    fn clamps_at_boundary() {
        let space = unit_space();
        let s = SearchState::from_parts(0.0, 1.0, 0.95, 0.025).unwrap();
        let s = simple_step(s, SIG_GREATER, &weights(), &space).unwrap();
        assert_eq!(s.position(), 1.0);
        assert_eq!((s.lower(), s.upper()), (0.95, 1.0));
    }

    #[test]
    fn tiny_weights_barely_move() {
        let space = unit_space();
        let w = StepWeights::new(1e-9, 2e-9, 3e-9).unwrap();
        let s = SearchState::from_parts(-1.0, 1.0, 0.3, 0.025).unwrap();
        let s = simple_step(s, Modifier::new(Power::Slightly, Direction::Less), &w, &space).unwrap();
        assert_eq!(s.variant_index(&space), 26);
        assert_eq!((s.lower(), s.upper()), (-1.0, 0.3));
    }

    #[test]
    fn outward_move_from_boundary() {
        let space = unit_space();
        let s = SearchState::from_parts(0.0, 1.0, 1.0, 0.025).unwrap();
        let s = simple_step(s, SIG_GREATER, &weights(), &space).unwrap();
        assert_eq!(s.position(), 1.0);
        assert_eq!(s.width(), 0.0);
        assert!(s.is_terminated());
    }

    #[test]
    fn termination_is_strict() {
        let at = |lo, hi, eps| SearchState::from_parts(lo, hi, lo, eps).unwrap();
        assert!(is_terminated(&at(0.40, 0.44, 0.05)));
        assert!(!is_terminated(&at(-1.0, 1.0, 0.125)));
        assert!(!is_terminated(&at(0.0, 0.5, 0.5)));
    }

    #[test]
    fn terminated_state_rejects_steps() {
        let space = unit_space();
        let s = SearchState::from_parts(0.40, 0.44, 0.42, 0.05).unwrap();
        assert_eq!(
            simple_step(s, MOD_GREATER, &weights(), &space),
            Err(FuzzyError::StateTerminated)
        );
    }

    #[test]
    fn snapping_rule_keeps_grid_positions() {
        let space = unit_space();
        // 0.6 - 0.35 * 0.95 = 0.2675 -> 0.25
        let s = SearchState::from_parts(0.0, 0.95, 0.6, 0.025)
            .unwrap()
            .with_rule(PositionRule::SnapEachStep);
        let s = simple_step(s, Modifier::new(Power::Moderately, Direction::Less), &weights(), &space)
            .unwrap();
        assert_eq!(s.position(), 0.25);
        assert_eq!(space.index_of(s.position()), Some(25));
    }

    #[test]
    fn from_parts_validates() {
        assert!(SearchState::from_parts(0.0, 1.0, 2.0, 0.1).is_err());
        assert!(SearchState::from_parts(0.0, 1.0, 0.5, 0.0).is_err());
        assert!(SearchState::initial(&unit_space()).with_epsilon(-1.0).is_err());
        assert_eq!(
            SearchState::initial(&unit_space())
                .with_epsilon(0.2)
                .unwrap()
                .epsilon(),
            0.2
        );
    }
}
