use fuzzy_refine_core::{
    simple_step, tolerant_step, Direction, IntervalAction, Modifier, Power, SearchState,
    StepWeights, TolerantState, VariantSpace,
};
use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};
use crate::policy::{SimulatedUser, UserMode, UserPolicy, UserView};

/// Hard cap on the number of inputs in one simulated run.
pub const MAX_STEPS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Simple,
    Tolerant,
}

impl Algorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Simple => "simple",
            Algorithm::Tolerant => "tolerant",
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "simple" => Ok(Algorithm::Simple),
            "tolerant" => Ok(Algorithm::Tolerant),
            other => Err(format!("unknown algorithm '{other}' (expected simple or tolerant)")),
        }
    }
}

/// One input of a simulated run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub step: usize,
    /// Interval and position when the input was issued.
    pub lower: f64,
    pub upper: f64,
    pub position: f64,
    pub modifier: Modifier,
    pub correct: bool,
    /// Pair rule that fired (tolerant search only, from the second input on).
    pub action: Option<IntervalAction>,
    pub delta_x: f64,
    /// Interval and position after the input.
    pub lower_after: f64,
    pub upper_after: f64,
    pub position_after: f64,
    pub variant_after: f64,
}

impl TraceStep {
    /// Position strictly inside the interval it was issued on.
    pub fn interior(&self) -> bool {
        self.lower < self.position && self.position < self.upper
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunTrace {
    pub n: usize,
    pub target_index: usize,
    pub target: f64,
    pub epsilon: f64,
    pub algorithm: Algorithm,
    pub steps: Vec<TraceStep>,
    /// Interval widths `L_0 .. L_T`.
    pub widths: Vec<f64>,
    /// `gamma_t = L_{t+1} / L_t`.
    pub gammas: Vec<f64>,
    /// Interval updates that shrank (or were classified to shrink) the interval.
    pub contracting_count: usize,
    pub neutral_count: usize,
    pub terminated: bool,
    pub final_position: f64,
    pub final_variant: f64,
    pub final_variant_index: usize,
}

impl RunTrace {
    pub fn step_count(&self) -> usize {
        self.steps.len()
    }

    pub fn labelled_inputs(&self) -> Vec<(Modifier, bool)> {
        self.steps.iter().map(|s| (s.modifier, s.correct)).collect()
    }

    /// Longest run of consecutive neutral pair updates.
    pub fn max_consecutive_neutral(&self) -> usize {
        let mut best = 0;
        let mut run = 0;
        for s in &self.steps {
            match s.action {
                Some(a) if !a.is_contracting() => {
                    run += 1;
                    best = best.max(run);
                }
                Some(_) => run = 0,
                None => {}
            }
        }
        best
    }
}

enum Engine {
    Simple(SearchState),
    Tolerant(TolerantState),
}

impl Engine {
    fn search(&self) -> &SearchState {
        match self {
            Engine::Simple(s) => s,
            Engine::Tolerant(t) => t.search(),
        }
    }

    fn step(self, input: Modifier, w: &StepWeights, space: &VariantSpace) -> Result<Engine> {
        Ok(match self {
            Engine::Simple(s) => Engine::Simple(simple_step(s, input, w, space)?),
            Engine::Tolerant(t) => Engine::Tolerant(tolerant_step(t, input, w, space)?),
        })
    }
}

/// The standard simulation grid: `n` points on [-1, 1].
pub fn unit_grid(n: usize) -> Result<VariantSpace> {
    if n < 2 {
        return Err(SimError::InvalidArgument(format!("need n >= 2, got {n}")));
    }
    Ok(VariantSpace::uniform(-1.0, 1.0, n)?)
}

/// Runs one search on the `n`-point grid over [-1, 1] from `x = 0` toward
/// grid point `target_index`.
pub fn simulate_run(
    n: usize,
    target_index: usize,
    weights: &StepWeights,
    policy: &UserPolicy,
    algorithm: Algorithm,
) -> Result<RunTrace> {
    simulate_run_on_stream(n, target_index, weights, policy, algorithm, target_index as u64)
}

/// [`simulate_run`] with an explicit random stream, for batches that revisit
/// the same target.
pub fn simulate_run_on_stream(
    n: usize,
    target_index: usize,
    weights: &StepWeights,
    policy: &UserPolicy,
    algorithm: Algorithm,
    stream: u64,
) -> Result<RunTrace> {
    let erroneous = matches!(policy.mode, UserMode::Erroneous { .. });
    if algorithm == Algorithm::Simple && erroneous && !policy.allow_errors_with_simple {
        return Err(SimError::InvalidArgument(
            "erroneous users need the tolerant search (or allow_errors_with_simple)".into(),
        ));
    }
    let space = unit_grid(n)?;
    let mut user = policy.user(stream)?;
    run_with_user(&space, target_index, weights, user.as_mut(), algorithm)
}

/// Drives a search with any [`SimulatedUser`] until termination, until the
/// user stops, or until [`MAX_STEPS`] (a fault).
pub fn run_with_user(
    space: &VariantSpace,
    target_index: usize,
    weights: &StepWeights,
    user: &mut dyn SimulatedUser,
    algorithm: Algorithm,
) -> Result<RunTrace> {
    if target_index >= space.count {
        return Err(SimError::InvalidTarget {
            index: target_index,
            n: space.count,
        });
    }
    let target = space.point(target_index);
    let initial = SearchState::initial(space);
    let epsilon = initial.epsilon();
    let mut engine = match algorithm {
        Algorithm::Simple => Engine::Simple(initial),
        Algorithm::Tolerant => Engine::Tolerant(TolerantState::new(initial)),
    };
    let mut steps = Vec::new();
    let mut widths = vec![engine.search().width()];
    let mut gammas = Vec::new();
    let (mut contracting, mut neutral) = (0, 0);

    while !engine.search().is_terminated() {
        if steps.len() >= MAX_STEPS {
            return Err(SimError::Fault(format!(
                "no termination after {MAX_STEPS} steps (n={}, target {target_index})",
                space.count
            )));
        }
        let s = engine.search();
        let view = UserView {
            target,
            lower: s.lower(),
            upper: s.upper(),
            position: s.position(),
            weights,
        };
        let Some(query) = user.next_input(&view)? else {
            break;
        };
        let before_width = s.width();
        engine = engine.step(query.modifier, weights, space)?;
        let s = engine.search();
        let rec = *s.history().last().expect("step recorded");
        let after_width = s.width();
        match (algorithm, rec.action) {
            (Algorithm::Simple, _) => {
                if after_width < before_width {
                    contracting += 1;
                } else {
                    neutral += 1;
                }
            }
            (Algorithm::Tolerant, Some(a)) if a.is_contracting() => contracting += 1,
            (Algorithm::Tolerant, Some(_)) => neutral += 1,
            (Algorithm::Tolerant, None) => {}
        }
        widths.push(after_width);
        gammas.push(after_width / before_width);
        steps.push(TraceStep {
            step: steps.len(),
            lower: view.lower,
            upper: view.upper,
            position: view.position,
            modifier: query.modifier,
            correct: query.correct,
            action: rec.action,
            delta_x: rec.delta_x,
            lower_after: s.lower(),
            upper_after: s.upper(),
            position_after: s.position(),
            variant_after: s.variant(space),
        });
    }

    let s = engine.search();
    let final_variant_index = s.variant_index(space);
    Ok(RunTrace {
        n: space.count,
        target_index,
        target,
        epsilon,
        algorithm,
        steps,
        widths,
        gammas,
        contracting_count: contracting,
        neutral_count: neutral,
        terminated: s.is_terminated(),
        final_position: s.position(),
        final_variant: space.point(final_variant_index),
        final_variant_index,
    })
}

/// Step count of an error-free closest-step user on the simple search.
pub fn fuzzy_steps(n: usize, target_index: usize, weights: &StepWeights) -> Result<usize> {
    let trace = simulate_run(
        n,
        target_index,
        weights,
        &UserPolicy::error_free(),
        Algorithm::Simple,
    )?;
    Ok(trace.step_count())
}

/// Fewest inputs with which any error-free user can finish the simple search,
/// found by trying every power sequence (breadth first, up to `max_depth`).
/// At the target both directions count as error-free.
pub fn min_fuzzy_steps(
    n: usize,
    target_index: usize,
    weights: &StepWeights,
    max_depth: usize,
) -> Result<Option<usize>> {
    let space = unit_grid(n)?;
    if target_index >= n {
        return Err(SimError::InvalidTarget {
            index: target_index,
            n,
        });
    }
    let target = space.point(target_index);
    let mut frontier = vec![SearchState::initial(&space)];
    for depth in 1..=max_depth {
        let mut next = Vec::with_capacity(frontier.len() * 3);
        for state in &frontier {
            let x = state.position();
            let dirs: &[Direction] = if target > x + 1e-12 {
                &[Direction::Greater]
            } else if target < x - 1e-12 {
                &[Direction::Less]
            } else {
                &Direction::ALL
            };
            for &d in dirs {
                for p in Power::ALL {
                    let s = simple_step(state.clone(), Modifier::new(p, d), weights, &space)?;
                    if s.is_terminated() {
                        return Ok(Some(depth));
                    }
                    next.push(s);
                }
            }
        }
        frontier = next;
    }
    Ok(None)
}
