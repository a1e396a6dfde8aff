use fuzzy_refine_core::StepWeights;
use serde::{Deserialize, Serialize};

use crate::binary::{binary_steps, BinaryConvention};
use crate::compare::Outcome;
use crate::error::Result;
use crate::reference::{OPTIMA, PER_TARGET_N9};
use crate::run::fuzzy_steps;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConventionScore {
    pub convention: BinaryConvention,
    /// Binary step counts for the nine-point grid.
    pub per_target_n9: Vec<usize>,
    /// Targets whose binary count equals the published one (out of 9).
    pub per_target_matches: usize,
    /// Rows whose wins/draws/losses split is reproduced exactly.
    pub split_matches: usize,
    /// Sum over rows of |Δwins| + |Δdraws| + |Δlosses|.
    pub split_distance: usize,
    /// Split at N = 9 with the published N = 9 weights.
    pub split_n9: (usize, usize, usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationReport {
    pub scores: Vec<ConventionScore>,
    /// Convention matching the most published per-target binary counts, then
    /// the smallest split distance, then the most exact splits.
    pub best: BinaryConvention,
    pub rows: usize,
    /// Closest-step fuzzy counts for the nine-point grid.
    pub fuzzy_n9: Vec<usize>,
    pub fuzzy_n9_matches: usize,
}

fn split(fuzzy: &[usize], binary: &[usize]) -> (usize, usize, usize) {
    let mut s = (0, 0, 0);
    for (&f, &b) in fuzzy.iter().zip(binary) {
        match Outcome::classify(f, b) {
            Outcome::Win => s.0 += 1,
            Outcome::Tie => s.1 += 1,
            Outcome::Loss => s.2 += 1,
        }
    }
    s
}

fn weights_of(milli: [u32; 3]) -> Result<StepWeights> {
    let [s, m, g] = milli.map(|x| x as f64 / 1000.0);
    Ok(StepWeights::new(s, m, g)?)
}

/// Scores every binary counting convention against the published optima
/// table and the nine-point per-target table.
pub fn calibrate_binary() -> Result<CalibrationReport> {
    let fuzzy_rows: Vec<Vec<usize>> = OPTIMA
        .iter()
        .map(|row| {
            let w = weights_of(row.weights_milli)?;
            (0..row.n).map(|t| fuzzy_steps(row.n, t, &w)).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let row9 = OPTIMA.iter().position(|r| r.n == 9).expect("nine-point row");
    let fuzzy_n9 = fuzzy_rows[row9].clone();

    let mut scores = Vec::new();
    for convention in BinaryConvention::ALL {
        let mut split_matches = 0;
        let mut split_distance = 0;
        let mut split_n9 = (0, 0, 0);
        for (row, fuzzy) in OPTIMA.iter().zip(&fuzzy_rows) {
            let binary = (0..row.n)
                .map(|t| binary_steps(row.n, t, convention))
                .collect::<Result<Vec<_>>>()?;
            let s = split(fuzzy, &binary);
            if row.n == 9 {
                split_n9 = s;
            }
            split_matches += (s == (row.wins, row.draws, row.losses)) as usize;
            split_distance +=
                s.0.abs_diff(row.wins) + s.1.abs_diff(row.draws) + s.2.abs_diff(row.losses);
        }
        let per_target_n9 = (0..9)
            .map(|t| binary_steps(9, t, convention))
            .collect::<Result<Vec<_>>>()?;
        let per_target_matches = per_target_n9
            .iter()
            .zip(PER_TARGET_N9)
            .filter(|(a, (_, b))| **a == *b)
            .count();
        scores.push(ConventionScore {
            convention,
            per_target_n9,
            per_target_matches,
            split_matches,
            split_distance,
            split_n9,
        });
    }
    let best = scores
        .iter()
        .min_by_key(|s| {
            (
                std::cmp::Reverse(s.per_target_matches),
                s.split_distance,
                std::cmp::Reverse(s.split_matches),
            )
        })
        .expect("conventions")
        .convention;
    let fuzzy_n9_matches = fuzzy_n9
        .iter()
        .zip(PER_TARGET_N9)
        .filter(|(a, (b, _))| **a == *b)
        .count();
    Ok(CalibrationReport {
        scores,
        best,
        rows: OPTIMA.len(),
        fuzzy_n9,
        fuzzy_n9_matches,
    })
}
