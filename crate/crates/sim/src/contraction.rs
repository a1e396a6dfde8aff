use fuzzy_refine_core::StepWeights;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};
use crate::policy::UserPolicy;
use crate::run::{simulate_run_on_stream, Algorithm, RunTrace};

pub const MIN_TRIALS: usize = 1000;

/// Monte-Carlo estimate of how often a pair of consecutive inputs shrinks the
/// interval in the error-tolerant search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContractionEstimate {
    /// Fraction of pair updates that contract.
    pub p_c_hat: f64,
    /// Fraction of contracting updates among pairs whose first input was correct.
    pub pi_c_hat: f64,
    /// Nominal per-query error probability of the policy.
    pub p_err: f64,
    /// Fraction of pairs whose first input was wrong.
    pub p_err_observed: f64,
    pub trials: usize,
    pub pairs: usize,
    /// `|p_c_hat - pi_c_hat * (1 - p_err)|`
    pub discrepancy: f64,
    /// Same with the observed error rate.
    pub discrepancy_observed: f64,
    /// Binomial standard error of `p_c_hat`.
    pub standard_error: f64,
}

#[derive(Debug, Default, Clone, Copy)]
struct PairCounts {
    pairs: usize,
    contracting: usize,
    first_correct: usize,
    contracting_first_correct: usize,
}

impl PairCounts {
    fn add(&mut self, trace: &RunTrace) {
        for w in trace.steps.windows(2) {
            let action = w[1].action.expect("tolerant pair update");
            let contracting = action.is_contracting();
            self.pairs += 1;
            self.contracting += contracting as usize;
            if w[0].correct {
                self.first_correct += 1;
                self.contracting_first_correct += contracting as usize;
            }
        }
    }
}

fn ratio(a: usize, b: usize) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

/// Runs `trials` error-tolerant searches (targets on a rotating schedule,
/// one random stream per trial) and tallies the pair updates.
pub fn estimate_contraction_probability(
    n: usize,
    weights: &StepWeights,
    policy: &UserPolicy,
    trials: usize,
) -> Result<ContractionEstimate> {
    if trials < MIN_TRIALS {
        return Err(SimError::TooFewTrials {
            min: MIN_TRIALS,
            got: trials,
        });
    }
    let p_err = match policy.mode {
        crate::policy::UserMode::Erroneous { p_err } => p_err,
        crate::policy::UserMode::ErrorFree => 0.0,
        crate::policy::UserMode::Scripted { .. } => {
            return Err(SimError::InvalidArgument(
                "contraction estimates need a generated user".into(),
            ))
        }
    };
    let mut counts = PairCounts::default();
    for trial in 0..trials {
        let trace = simulate_run_on_stream(
            n,
            trial % n,
            weights,
            policy,
            Algorithm::Tolerant,
            trial as u64,
        )?;
        counts.add(&trace);
    }
    Ok(summarize(counts, p_err, trials))
}

fn summarize(c: PairCounts, p_err: f64, trials: usize) -> ContractionEstimate {
    let p_c_hat = ratio(c.contracting, c.pairs);
    let pi_c_hat = ratio(c.contracting_first_correct, c.first_correct);
    let p_err_observed = 1.0 - ratio(c.first_correct, c.pairs);
    ContractionEstimate {
        p_c_hat,
        pi_c_hat,
        p_err,
        p_err_observed,
        trials,
        pairs: c.pairs,
        discrepancy: (p_c_hat - pi_c_hat * (1.0 - p_err)).abs(),
        discrepancy_observed: (p_c_hat - pi_c_hat * (1.0 - p_err_observed)).abs(),
        standard_error: (p_c_hat * (1.0 - p_c_hat) / c.pairs.max(1) as f64).sqrt(),
    }
}

/// Tallies pairs from traces produced elsewhere (e.g. a custom user).
pub fn estimate_from_traces<'a>(
    traces: impl IntoIterator<Item = &'a RunTrace>,
    p_err: f64,
) -> ContractionEstimate {
    let mut counts = PairCounts::default();
    let mut trials = 0;
    for t in traces {
        counts.add(t);
        trials += 1;
    }
    summarize(counts, p_err, trials)
}
