//! Search that tolerates isolated wrong directions.
//!
//! The interval is never cut on a single input. Each new input is read
//! together with the previous one, and the interval is cut at the position
//! from which the previous input was issued only when the pair is consistent
//! with that previous input having been right.

use serde::{Deserialize, Serialize};

use crate::error::{FuzzyError, Result};
use crate::membership::StepWeights;
use crate::modifier::{Direction, Modifier, Power};
use crate::search::SearchState;
use crate::space::VariantSpace;

/// Interval update triggered by a pair of consecutive inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntervalAction {
    Unchanged,
    SetLowerToPrevPosition,
    SetUpperToPrevPosition,
}

impl IntervalAction {
    pub fn is_contracting(self) -> bool {
        self != IntervalAction::Unchanged
    }

    pub fn as_str(self) -> &'static str {
        match self {
            IntervalAction::Unchanged => "unchanged",
            IntervalAction::SetLowerToPrevPosition => "set_lower",
            IntervalAction::SetUpperToPrevPosition => "set_upper",
        }
    }
}

fn cut_behind(direction: Direction) -> IntervalAction {
    match direction {
        Direction::Greater => IntervalAction::SetLowerToPrevPosition,
        Direction::Less => IntervalAction::SetUpperToPrevPosition,
    }
}

/// Decides how the pair `(prev, curr)` updates the interval.
///
/// * Same direction: the previous input is trusted, cut behind it.
/// * Opposite directions, `curr` strictly stronger: could be a correction of
///   an error in `prev`, so leave the interval alone.
/// * Opposite directions, `curr` not stronger: trust `prev` and cut behind
///   it, except for significantly/significantly where no stronger correction
///   exists.
pub fn classify_pair(prev: Modifier, curr: Modifier) -> IntervalAction {
    if prev.direction == curr.direction {
        return cut_behind(prev.direction);
    }
    if prev.power < curr.power {
        return IntervalAction::Unchanged;
    }
    if prev.power == Power::Significantly && curr.power == Power::Significantly {
        return IntervalAction::Unchanged;
    }
    cut_behind(prev.direction)
}

/// [`SearchState`] plus the previous input and where it was issued from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TolerantState {
    search: SearchState,
    prev: Option<(Modifier, f64)>,
}

impl TolerantState {
    pub fn new(search: SearchState) -> TolerantState {
        TolerantState { search, prev: None }
    }

    pub fn initial(space: &VariantSpace) -> TolerantState {
        TolerantState::new(SearchState::initial(space))
    }

    /// State with a pending previous input, as in the middle of a replay.
    pub fn with_previous(search: SearchState, prev_input: Modifier, prev_position: f64) -> TolerantState {
        TolerantState {
            search,
            prev: Some((prev_input, prev_position)),
        }
    }

    pub fn search(&self) -> &SearchState {
        &self.search
    }

    pub fn into_search(self) -> SearchState {
        self.search
    }

    pub fn prev_input(&self) -> Option<Modifier> {
        self.prev.map(|(m, _)| m)
    }

    pub fn prev_position(&self) -> Option<f64> {
        self.prev.map(|(_, x)| x)
    }

    pub fn is_terminated(&self) -> bool {
        self.search.is_terminated()
    }
}

/// One step of the error-tolerant search.
///
/// The pair rule is applied first, anchored at the previous input's
/// position; the move is then computed on the updated interval.
pub fn tolerant_step(
    state: TolerantState,
    input: Modifier,
    weights: &StepWeights,
    space: &VariantSpace,
) -> Result<TolerantState> {
    if state.is_terminated() {
        return Err(FuzzyError::StateTerminated);
    }
    let TolerantState { mut search, prev } = state;
    let before = (search.lower(), search.upper());
    let action = prev.map(|(prev_input, prev_position)| {
        let action = classify_pair(prev_input, input);
        let anchor = prev_position.clamp(search.lower(), search.upper());
        match action {
            IntervalAction::Unchanged => {}
            IntervalAction::SetLowerToPrevPosition => search.set_lower(anchor),
            IntervalAction::SetUpperToPrevPosition => search.set_upper(anchor),
        }
        action
    });
    let from = search.position();
    search.advance(input, weights, space, before, |_, _| {}, action);
    Ok(TolerantState {
        search,
        prev: Some((input, from)),
    })
}

/// Checks a labelled input history against the error model: never two wrong
/// directions in a row, and a wrong direction is only followed by an
/// opposite-direction correction that is strictly stronger (or
/// significantly/significantly).
pub fn validate_error_pattern(history: &[(Modifier, bool)]) -> bool {
    history.windows(2).all(|pair| {
        let (first, first_ok) = pair[0];
        let (second, second_ok) = pair[1];
        if !first_ok && !second_ok {
            return false;
        }
        if !first_ok && first.direction != second.direction {
            let both_max =
                first.power == Power::Significantly && second.power == Power::Significantly;
            return second.power > first.power || both_max;
        }
        true
    })
}
