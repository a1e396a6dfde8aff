use std::fmt;

use fuzzy_refine_core::StepWeights;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::binary::{binary_steps, BinaryConvention};
use crate::error::{Result, SimError};
use crate::policy::UserPolicy;
use crate::run::{simulate_run, Algorithm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Win,
    Tie,
    Loss,
}

impl Outcome {
    pub fn classify(t_fuzzy: usize, t_binary: usize) -> Outcome {
        match t_fuzzy.cmp(&t_binary) {
            std::cmp::Ordering::Less => Outcome::Win,
            std::cmp::Ordering::Equal => Outcome::Tie,
            std::cmp::Ordering::Greater => Outcome::Loss,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Win => "win",
            Outcome::Tie => "tie",
            Outcome::Loss => "loss",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetResult {
    pub target_index: usize,
    pub t_fuzzy: usize,
    pub t_binary: usize,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub n: usize,
    pub weights: StepWeights,
    pub convention: BinaryConvention,
    /// Sorted by target index.
    pub per_target: Vec<TargetResult>,
    pub wins: usize,
    pub draws: usize,
    pub losses: usize,
    pub win_rate: f64,
}

impl ComparisonReport {
    pub fn from_results(
        n: usize,
        weights: StepWeights,
        convention: BinaryConvention,
        mut per_target: Vec<TargetResult>,
    ) -> ComparisonReport {
        per_target.sort_by_key(|r| r.target_index);
        let count = |o| per_target.iter().filter(|r| r.outcome == o).count();
        let (wins, draws, losses) = (count(Outcome::Win), count(Outcome::Tie), count(Outcome::Loss));
        ComparisonReport {
            n,
            weights,
            convention,
            per_target,
            wins,
            draws,
            losses,
            win_rate: wins as f64 / n as f64,
        }
    }

    pub fn split(&self) -> (usize, usize, usize) {
        (self.wins, self.draws, self.losses)
    }
}

impl fmt::Display for ComparisonReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "win_rate={:.3}, {}/{}/{}",
            self.win_rate, self.wins, self.draws, self.losses
        )
    }
}

/// Fuzzy (simple search, error-free user) against binary search on every
/// target of the `n`-point grid.
pub fn compare_vs_binary(
    n: usize,
    weights: &StepWeights,
    policy: &UserPolicy,
    convention: BinaryConvention,
) -> Result<ComparisonReport> {
    if !policy.is_error_free() {
        return Err(SimError::InvalidArgument(
            "comparison against binary search needs an error-free user".into(),
        ));
    }
    let per_target = (0..n)
        .into_par_iter()
        .map(|target_index| {
            let trace = simulate_run(n, target_index, weights, policy, Algorithm::Simple)?;
            if !trace.terminated {
                return Err(SimError::Fault(format!("run for target {target_index} did not terminate")));
            }
            let t_fuzzy = trace.step_count();
            let t_binary = binary_steps(n, target_index, convention)?;
            Ok(TargetResult {
                target_index,
                t_fuzzy,
                t_binary,
                outcome: Outcome::classify(t_fuzzy, t_binary),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if per_target.is_empty() {
        return Err(SimError::InvalidArgument(format!("need n >= 2, got {n}")));
    }
    Ok(ComparisonReport::from_results(n, *weights, convention, per_target))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn totals_add_up() {
        let w = StepWeights::new(0.25, 0.361, 0.444).unwrap();
        for n in [2, 3, 9, 16] {
            let r = compare_vs_binary(n, &w, &UserPolicy::error_free(), BinaryConvention::IndexLower)
                .unwrap();
            assert_eq!(r.wins + r.draws + r.losses, n);
            assert_eq!(r.per_target.len(), n);
            assert!((r.win_rate - r.wins as f64 / n as f64).abs() < 1e-15);
            assert!(r.per_target.windows(2).all(|p| p[0].target_index < p[1].target_index));
        }
    }

    #[test]
    fn display_format() {
        let w = StepWeights::new(0.25, 0.361, 0.444).unwrap();
        let results = vec![
            TargetResult { target_index: 1, t_fuzzy: 3, t_binary: 3, outcome: Outcome::Tie },
            TargetResult { target_index: 0, t_fuzzy: 2, t_binary: 3, outcome: Outcome::Win },
            TargetResult { target_index: 2, t_fuzzy: 5, t_binary: 3, outcome: Outcome::Loss },
        ];
        let r = ComparisonReport::from_results(3, w, BinaryConvention::IndexLower, results);
        assert_eq!(r.to_string(), "win_rate=0.333, 1/1/1");
        assert_eq!(r.per_target[0].target_index, 0);
    }

    #[test]
    fn erroneous_policy_rejected() {
        let w = StepWeights::new(0.25, 0.361, 0.444).unwrap();
        assert!(compare_vs_binary(9, &w, &UserPolicy::erroneous(0.1, 0), BinaryConvention::IndexLower)
            .is_err());
    }
}
