use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::membership::StepWeights;

/// Best- and worst-case step counts for the simple search. Fractional;
/// callers round as they need.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationBounds {
    pub t_best: f64,
    pub t_worst: f64,
}

/// Two inputs shrink the interval by at least `min(1 - w_sig, w_slightly)` and
/// at most `max(w_sig, 1 - w_slightly)`, which brackets the number of steps
/// needed to get from `l0` below `epsilon`.
pub fn iteration_bounds(l0: f64, epsilon: f64, weights: &StepWeights) -> Result<IterationBounds> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(invalid(format!("epsilon must be > 0, got {epsilon}")));
    }
    if !(l0.is_finite() && l0 > epsilon) {
        return Err(invalid(format!(
            "initial length {l0} must exceed epsilon {epsilon}"
        )));
    }
    let span = (l0 / epsilon).ln();
    let (ws, wg) = (weights.slightly(), weights.significantly());
    let slowest = wg.max(1.0 - ws);
    let fastest = (1.0 - wg).min(ws);
    Ok(IterationBounds {
        t_best: 2.0 * span / (1.0 / fastest).ln(),
        t_worst: 2.0 * span / (1.0 / slowest).ln(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_example() {
        let w = StepWeights::new(0.25, 0.35, 0.444).unwrap();
        let b = iteration_bounds(2.0, 0.125, &w).unwrap();
        let expect_worst = 2.0 * 16f64.ln() / (1.0 / 0.75f64).ln();
        assert!((b.t_worst - expect_worst).abs() < 1e-12);
        assert!((b.t_worst - 19.275).abs() < 1e-3);
        assert!((b.t_best - 4.0).abs() < 1e-12);
        assert!(b.t_best <= b.t_worst);
    }

    #[test]
    fn symmetric_weights_make_candidates_coincide() {
        // w_slightly = 1 - w_significantly
        let w = StepWeights::new(0.3, 0.5, 0.7).unwrap();
        let span = 2.0 * (2.0f64 / 0.01).ln();
        let worst_a = span / (1.0 / (1.0 - w.slightly())).ln();
        let worst_b = span / (1.0 / w.significantly()).ln();
        let best_a = span / (1.0 / (1.0 - w.significantly())).ln();
        let best_b = span / (1.0 / w.slightly()).ln();
        assert!((worst_a - worst_b).abs() < 1e-12);
        assert!((best_a - best_b).abs() < 1e-12);
        let b = iteration_bounds(2.0, 0.01, &w).unwrap();
        assert!((b.t_worst - worst_a).abs() < 1e-12);
        assert!((b.t_best - best_a).abs() < 1e-12);
    }

    #[test]
    fn rejects_degenerate_lengths() {
        let w = StepWeights::new(0.25, 0.35, 0.45).unwrap();
        assert!(iteration_bounds(0.1, 0.1, &w).is_err());
        assert!(iteration_bounds(0.05, 0.1, &w).is_err());
        assert!(iteration_bounds(1.0, 0.0, &w).is_err());
    }
}
