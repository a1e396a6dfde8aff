//! Simulated users.
//!
//! A [`SimulatedUser`] sees the current interval and position and answers
//! with one modifier per step. The built-in [`ClosestStepUser`] always
//! points toward the target and picks the power whose step length best
//! matches the remaining distance. In erroneous mode it occasionally flips
//! the direction, but only in ways the error-tolerant search is designed for:
//! never two wrong directions in a row, every error is immediately followed
//! by an opposite, strictly stronger correction (or significantly after
//! significantly), and never three neutral pair updates in a row.

use fuzzy_refine_core::{classify_pair, Direction, Modifier, Power, StepWeights};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};

// Distances below this are treated as "already at the target".
const AT_TARGET_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum UserMode {
    ErrorFree,
    Erroneous { p_err: f64 },
    /// Replays a fixed list of inputs, then stops.
    Scripted { inputs: Vec<Modifier> },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PowerRule {
    /// Power whose step `w_p * width` is closest to `|x* - x|`; ties go to the
    /// weaker power.
    #[default]
    ClosestStep,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UserPolicy {
    pub mode: UserMode,
    pub power_rule: PowerRule,
    pub seed: u64,
    /// Lets erroneous users drive the simple search, which is not built to
    /// survive wrong directions.
    #[serde(default)]
    pub allow_errors_with_simple: bool,
}

impl UserPolicy {
    pub fn error_free() -> UserPolicy {
        UserPolicy {
            mode: UserMode::ErrorFree,
            power_rule: PowerRule::ClosestStep,
            seed: 0,
            allow_errors_with_simple: false,
        }
    }

    pub fn erroneous(p_err: f64, seed: u64) -> UserPolicy {
        UserPolicy {
            mode: UserMode::Erroneous { p_err },
            power_rule: PowerRule::ClosestStep,
            seed,
            allow_errors_with_simple: false,
        }
    }

    pub fn scripted(inputs: Vec<Modifier>) -> UserPolicy {
        UserPolicy {
            mode: UserMode::Scripted { inputs },
            power_rule: PowerRule::ClosestStep,
            seed: 0,
            allow_errors_with_simple: false,
        }
    }

    pub fn is_error_free(&self) -> bool {
        matches!(self.mode, UserMode::ErrorFree)
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if let UserMode::Erroneous { p_err } = self.mode {
            if !(0.0..1.0).contains(&p_err) {
                return Err(SimError::InvalidArgument(format!(
                    "p_err must be in [0, 1), got {p_err}"
                )));
            }
        }
        Ok(())
    }

    /// Builds the user for one run. `stream` separates the random streams of
    /// runs that share a seed.
    pub fn user(&self, stream: u64) -> Result<Box<dyn SimulatedUser + Send>> {
        self.validate()?;
        Ok(match &self.mode {
            UserMode::ErrorFree => Box::new(ClosestStepUser::new(0.0, self.seed, stream)),
            UserMode::Erroneous { p_err } => {
                Box::new(ClosestStepUser::new(*p_err, self.seed, stream))
            }
            UserMode::Scripted { inputs } => Box::new(ScriptedUser::new(inputs.clone())),
        })
    }
}

/// What a simulated user can see before answering.
#[derive(Debug, Clone, Copy)]
pub struct UserView<'a> {
    pub target: f64,
    pub lower: f64,
    pub upper: f64,
    pub position: f64,
    pub weights: &'a StepWeights,
}

impl UserView<'_> {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn at_target(&self) -> bool {
        (self.target - self.position).abs() <= AT_TARGET_TOL
    }

    /// Direction toward the target. At the target either direction keeps it
    /// in the interval; pick the side with the nearer boundary so the cut
    /// removes more.
    pub fn correct_direction(&self) -> Direction {
        if self.at_target() {
            if self.upper - self.position <= self.position - self.lower {
                Direction::Greater
            } else {
                Direction::Less
            }
        } else if self.target > self.position {
            Direction::Greater
        } else {
            Direction::Less
        }
    }

    /// Whether `direction` keeps the target on the kept side of the cut.
    pub fn is_correct(&self, direction: Direction) -> bool {
        self.at_target() || direction == self.correct_direction()
    }
}

/// One answer: the modifier plus whether its direction was correct.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Query {
    pub modifier: Modifier,
    pub correct: bool,
}

pub trait SimulatedUser {
    /// Next input, or `None` when the user stops on their own.
    fn next_input(&mut self, view: &UserView<'_>) -> Result<Option<Query>>;
}

/// Power among `allowed` whose step best matches the remaining distance.
pub fn closest_power(view: &UserView<'_>, allowed: &[Power]) -> Option<Power> {
    let distance = (view.target - view.position).abs();
    let width = view.width();
    let mut best: Option<(Power, f64)> = None;
    for &p in allowed {
        let miss = (view.weights.weight(p) * width - distance).abs();
        match best {
            Some((_, m)) if miss >= m - 1e-12 => {}
            _ => best = Some((p, miss)),
        }
    }
    best.map(|(p, _)| p)
}

/// [`PowerRule::ClosestStep`] user with optional structured errors.
#[derive(Debug, Clone)]
pub struct ClosestStepUser {
    p_err: f64,
    rng: ChaCha8Rng,
    prev: Option<Modifier>,
    /// Power of an error that still has to be corrected.
    pending_correction: Option<Power>,
    /// Whether each of the last two pair classifications was neutral.
    recent_neutral: [bool; 2],
    pairs_seen: usize,
}

impl ClosestStepUser {
    pub fn new(p_err: f64, seed: u64, stream: u64) -> ClosestStepUser {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        ClosestStepUser {
            p_err,
            rng,
            prev: None,
            pending_correction: None,
            recent_neutral: [false, false],
            pairs_seen: 0,
        }
    }

    fn record(&mut self, m: Modifier) {
        if let Some(prev) = self.prev {
            let neutral = !classify_pair(prev, m).is_contracting();
            self.recent_neutral = [self.recent_neutral[1], neutral];
            self.pairs_seen += 1;
        }
        self.prev = Some(m);
    }

    fn two_neutral(&self) -> bool {
        self.pairs_seen >= 2 && self.recent_neutral == [true, true]
    }

    fn last_pair_contracting(&self) -> bool {
        self.pairs_seen == 0 || !self.recent_neutral[1]
    }
}

impl SimulatedUser for ClosestStepUser {
    fn next_input(&mut self, view: &UserView<'_>) -> Result<Option<Query>> {
        let direction = view.correct_direction();

        if let Some(err_power) = self.pending_correction.take() {
            let allowed: Vec<Power> = Power::ALL
                .into_iter()
                .filter(|&p| p > err_power || p == Power::Significantly)
                .collect();
            let power = closest_power(view, &allowed)
                .ok_or_else(|| SimError::Fault("no power available for a correction".into()))?;
            if view.at_target() || self.prev.map(|m| m.direction) != Some(direction.opposite()) {
                return Err(SimError::Fault(
                    "correction would not reverse the erroneous direction".into(),
                ));
            }
            let m = Modifier::new(power, direction);
            self.record(m);
            return Ok(Some(Query {
                modifier: m,
                correct: true,
            }));
        }

        let restricted = self.two_neutral();
        let allowed: Vec<Power> = match self.prev {
            Some(prev) if restricted => Power::ALL
                .into_iter()
                .filter(|&p| classify_pair(prev, Modifier::new(p, direction)).is_contracting())
                .collect(),
            _ => Power::ALL.to_vec(),
        };
        let power = closest_power(view, &allowed).ok_or_else(|| {
            SimError::Fault("no power gives a contracting pair after two neutral updates".into())
        })?;

        let may_err = self.p_err > 0.0
            && !restricted
            && !view.at_target()
            && self.last_pair_contracting();
        if may_err && self.rng.random::<f64>() < self.p_err {
            let m = Modifier::new(power, direction.opposite());
            self.pending_correction = Some(power);
            self.record(m);
            return Ok(Some(Query {
                modifier: m,
                correct: false,
            }));
        }

        let m = Modifier::new(power, direction);
        self.record(m);
        Ok(Some(Query {
            modifier: m,
            correct: true,
        }))
    }
}

/// Replays fixed inputs; correctness is judged against the target.
#[derive(Debug, Clone)]
pub struct ScriptedUser {
    inputs: std::vec::IntoIter<Modifier>,
}

impl ScriptedUser {
    pub fn new(inputs: Vec<Modifier>) -> ScriptedUser {
        ScriptedUser {
            inputs: inputs.into_iter(),
        }
    }
}

impl SimulatedUser for ScriptedUser {
    fn next_input(&mut self, view: &UserView<'_>) -> Result<Option<Query>> {
        Ok(self.inputs.next().map(|m| Query {
            modifier: m,
            correct: view.is_correct(m.direction),
        }))
    }
}
