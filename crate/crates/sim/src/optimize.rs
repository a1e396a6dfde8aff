//! Exhaustive weight search maximizing the win rate against binary search.

use fuzzy_refine_core::{simple_step, Modifier, Power, SearchState, StepWeights, VariantSpace};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::binary::{binary_steps, BinaryConvention};
use crate::compare::{compare_vs_binary, ComparisonReport};
use crate::error::{Result, SimError};
use crate::policy::{closest_power, UserPolicy, UserView};
use crate::reference::optimum_for;
use crate::run::{unit_grid, MAX_STEPS};

/// Candidate values per weight, in thousandths.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightGrid {
    pub slightly: Vec<u32>,
    pub moderately: Vec<u32>,
    pub significantly: Vec<u32>,
}

fn axis(coarse_step: u32, fine: Option<(u32, u32, u32)>) -> Vec<u32> {
    let mut v: Vec<u32> = (1..)
        .map(|k| k * coarse_step)
        .take_while(|&x| x < 1000)
        .collect();
    if let Some((center, radius, step)) = fine {
        let lo = center.saturating_sub(radius).max(1);
        let hi = (center + radius).min(999);
        v.extend((lo..=hi).filter(|x| (x - lo) % step == 0));
    }
    v.sort_unstable();
    v.dedup();
    v
}

impl WeightGrid {
    /// Every multiple of `step` thousandths in (0, 1) on each axis.
    pub fn uniform(step_milli: u32) -> Result<WeightGrid> {
        if step_milli == 0 || step_milli >= 1000 {
            return Err(SimError::InvalidArgument(format!(
                "grid step must be between 1 and 999 thousandths, got {step_milli}"
            )));
        }
        let a = axis(step_milli, None);
        Ok(WeightGrid {
            slightly: a.clone(),
            moderately: a.clone(),
            significantly: a,
        })
    }

    /// Coarse grid everywhere plus a fine grid within `radius` of `anchor`
    /// on each axis (all in thousandths).
    pub fn refined(anchor: [u32; 3], radius: u32, fine_step: u32, coarse_step: u32) -> Result<WeightGrid> {
        if fine_step == 0 || coarse_step == 0 || coarse_step >= 1000 {
            return Err(SimError::InvalidArgument("grid steps must be positive".into()));
        }
        Ok(WeightGrid {
            slightly: axis(coarse_step, Some((anchor[0], radius, fine_step))),
            moderately: axis(coarse_step, Some((anchor[1], radius, fine_step))),
            significantly: axis(coarse_step, Some((anchor[2], radius, fine_step))),
        })
    }

    /// 0.01 everywhere, 0.001 within 0.05 of the published optimum for `n`
    /// (if there is one).
    pub fn default_for(n: usize) -> WeightGrid {
        match optimum_for(n) {
            Some(row) => WeightGrid::refined(row.weights_milli, 50, 1, 10).expect("valid"),
            None => WeightGrid::uniform(10).expect("valid"),
        }
    }

    /// Ordered candidate triples, lexicographically increasing.
    pub fn candidates(&self) -> impl Iterator<Item = [u32; 3]> + '_ {
        self.slightly.iter().flat_map(move |&s| {
            self.moderately
                .iter()
                .filter(move |&&m| m > s)
                .flat_map(move |&m| {
                    self.significantly
                        .iter()
                        .filter(move |&&g| g > m)
                        .map(move |&g| [s, m, g])
                })
        })
    }

    pub fn len(&self) -> usize {
        self.candidates().count()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates().next().is_none()
    }
}

fn to_weights(milli: [u32; 3]) -> Result<StepWeights> {
    let [s, m, g] = milli.map(|x| x as f64 / 1000.0);
    Ok(StepWeights::new(s, m, g)?)
}

/// Steps of the closest-step user on the simple search, without building a
/// trace. Same policy and step function as [`crate::simulate_run`].
fn count_steps(space: &VariantSpace, target: f64, weights: &StepWeights) -> Result<usize> {
    let mut state = SearchState::initial(space);
    let mut steps = 0;
    while !state.is_terminated() {
        if steps >= MAX_STEPS {
            return Err(SimError::Fault("no termination".into()));
        }
        let view = UserView {
            target,
            lower: state.lower(),
            upper: state.upper(),
            position: state.position(),
            weights,
        };
        let power = closest_power(&view, &Power::ALL).expect("three powers");
        state = simple_step(state, Modifier::new(power, view.correct_direction()), weights, space)?;
        steps += 1;
    }
    Ok(steps)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    pub weights: StepWeights,
    pub report: ComparisonReport,
    pub candidates: usize,
}

/// Best candidate of one chunk: strictly more wins replaces, so the first
/// (lexicographically smallest) maximizer is kept.
fn best_in(
    chunk: &[[u32; 3]],
    space: &VariantSpace,
    binary: &[usize],
) -> Result<Option<(usize, [u32; 3])>> {
    let n = binary.len();
    let mut best: Option<(usize, [u32; 3])> = None;
    for &cand in chunk {
        let weights = to_weights(cand)?;
        let floor = best.map_or(0, |(w, _)| w + 1);
        let mut wins = 0;
        let mut pruned = false;
        for (i, &tb) in binary.iter().enumerate() {
            if wins + (n - i) < floor {
                pruned = true;
                break;
            }
            if count_steps(space, space.point(i), &weights)? < tb {
                wins += 1;
            }
        }
        if !pruned && (best.is_none() || wins >= floor) {
            best = Some((wins, cand));
        }
    }
    Ok(best)
}

/// Exhaustive search over `grid` for the weights with the most wins; ties go
/// to the lexicographically smallest `(w_slightly, w_moderately, w_significantly)`.
pub fn optimize_weights(
    n: usize,
    grid: &WeightGrid,
    convention: BinaryConvention,
) -> Result<OptimizationResult> {
    let space = unit_grid(n)?;
    let binary: Vec<usize> = (0..n)
        .map(|t| binary_steps(n, t, convention))
        .collect::<Result<_>>()?;
    let candidates: Vec<[u32; 3]> = grid.candidates().collect();
    if candidates.is_empty() {
        return Err(SimError::EmptyGrid);
    }
    let chunk_bests = candidates
        .par_chunks(4096)
        .map(|chunk| best_in(chunk, &space, &binary))
        .collect::<Result<Vec<_>>>()?;
    // chunks come back in order, so the first maximum is the smallest triple
    let (wins, milli) = chunk_bests
        .into_iter()
        .flatten()
        .fold(None, |acc: Option<(usize, [u32; 3])>, c| match acc {
            Some(a) if a.0 >= c.0 => Some(a),
            _ => Some(c),
        })
        .ok_or(SimError::EmptyGrid)?;
    let weights = to_weights(milli)?;
    let report = compare_vs_binary(n, &weights, &UserPolicy::error_free(), convention)?;
    if report.wins != wins {
        return Err(SimError::Fault(format!(
            "fast count gave {wins} wins, full comparison {}",
            report.wins
        )));
    }
    Ok(OptimizationResult {
        weights,
        report,
        candidates: candidates.len(),
    })
}
