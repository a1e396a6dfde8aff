//! Replays of the printed worked examples and a cell-by-cell comparison.

use fuzzy_refine_core::{
    build_variant_space, tolerant_step, IntervalAction, Modifier, StepWeights, TolerantState,
    VariantSpace,
};
use serde::Serialize;

use crate::error::Result;
use crate::reference::{PrintedRow, WorkedExample};

const EXACT: f64 = 1e-9;
// Printed positions carry at most three decimals.
const PRINT_ROUNDING: f64 = 0.0025;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReplayRow {
    pub step: usize,
    pub lower: f64,
    pub upper: f64,
    pub position: f64,
    pub variant: f64,
    pub input: Modifier,
    pub correct: bool,
    pub action: Option<IntervalAction>,
    pub lower_after: f64,
    pub upper_after: f64,
    pub delta_x: f64,
    pub next_position: f64,
    pub next_variant: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Divergence {
    pub row: usize,
    pub column: &'static str,
    pub printed: String,
    pub replayed: String,
    /// Explanation when this cell is a documented deviation.
    pub known: Option<&'static str>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GoldenReport {
    pub name: &'static str,
    pub rows: Vec<ReplayRow>,
    pub divergences: Vec<Divergence>,
    /// Documented deviations that the replay did not reproduce.
    pub missing_known: Vec<(usize, &'static str)>,
}

impl GoldenReport {
    pub fn unexpected(&self) -> impl Iterator<Item = &Divergence> {
        self.divergences.iter().filter(|d| d.known.is_none())
    }

    pub fn is_match(&self) -> bool {
        self.unexpected().next().is_none() && self.missing_known.is_empty()
    }
}

pub fn example_space() -> VariantSpace {
    build_variant_space(0.0, 1.0, 0.05).expect("valid example grid")
}

/// Replays `example.inputs` through the error-tolerant search.
pub fn replay(example: &WorkedExample) -> Result<Vec<ReplayRow>> {
    let space = example_space();
    let [ws, wm, wg] = example.weights;
    let weights = StepWeights::new(ws, wm, wg)?;
    let mut state = TolerantState::initial(&space);
    let mut rows = Vec::with_capacity(example.inputs.len());
    for (step, &input) in example.inputs.iter().enumerate() {
        let s = state.search();
        let (lower, upper, position) = (s.lower(), s.upper(), s.position());
        let variant = s.variant(&space);
        let correct = (example.target - position).abs() < 1e-12
            || (example.target > position) == (input.direction.sign() > 0.0);
        state = tolerant_step(state, input, &weights, &space)?;
        let s = state.search();
        let rec = s.history()[step];
        rows.push(ReplayRow {
            step,
            lower,
            upper,
            position,
            variant,
            input,
            correct,
            action: rec.action,
            lower_after: s.lower(),
            upper_after: s.upper(),
            delta_x: rec.delta_x,
            next_position: s.position(),
            next_variant: s.variant(&space),
        });
    }
    Ok(rows)
}

fn same(a: f64, b: f64) -> bool {
    (a - b).abs() <= EXACT
}

fn same_position(printed: f64, exact: f64, variant: f64) -> bool {
    same(printed, variant) || (printed - exact).abs() <= PRINT_ROUNDING
}

fn fmt_interval((a, b): (f64, f64)) -> String {
    format!("[{a}, {b}]")
}

fn compare_row(i: usize, p: &PrintedRow, r: &ReplayRow, out: &mut Vec<(usize, &'static str, String, String)>) {
    if !(same(p.interval.0, r.lower) && same(p.interval.1, r.upper)) {
        out.push((i, "interval", fmt_interval(p.interval), fmt_interval((r.lower, r.upper))));
    }
    if !same_position(p.position, r.position, r.variant) {
        out.push((i, "position", p.position.to_string(), r.position.to_string()));
    }
    if p.input != r.input {
        out.push((i, "input", p.input.to_string(), r.input.to_string()));
    }
    if p.marked_error == r.correct {
        out.push((i, "error", p.marked_error.to_string(), (!r.correct).to_string()));
    }
    if !(same(p.updated.0, r.lower_after) && same(p.updated.1, r.upper_after)) {
        out.push((i, "updated", fmt_interval(p.updated), fmt_interval((r.lower_after, r.upper_after))));
    }
    if !same(p.delta_x, r.delta_x) {
        out.push((i, "delta_x", p.delta_x.to_string(), r.delta_x.to_string()));
    }
    if !same_position(p.next_position, r.next_position, r.next_variant) {
        out.push((i, "next_position", p.next_position.to_string(), r.next_position.to_string()));
    }
}

/// Replays `example` and lists every cell that differs from the print.
pub fn divergence_report(example: &WorkedExample) -> Result<GoldenReport> {
    let rows = replay(example)?;
    let mut raw = Vec::new();
    for (i, (p, r)) in example.rows.iter().zip(&rows).enumerate() {
        compare_row(i, p, r, &mut raw);
    }
    if example.rows.len() != rows.len() {
        raw.push((
            rows.len().min(example.rows.len()),
            "rows",
            example.rows.len().to_string(),
            rows.len().to_string(),
        ));
    }
    let divergences: Vec<Divergence> = raw
        .into_iter()
        .map(|(row, column, printed, replayed)| Divergence {
            row,
            column,
            printed,
            replayed,
            known: example
                .known_deviations
                .iter()
                .find(|(r, c, _)| *r == row && *c == column)
                .map(|(_, _, why)| *why),
        })
        .collect();
    let missing_known = example
        .known_deviations
        .iter()
        .filter(|(r, c, _)| !divergences.iter().any(|d| d.row == *r && d.column == *c))
        .map(|(r, c, _)| (*r, *c))
        .collect();
    Ok(GoldenReport {
        name: example.name,
        rows,
        divergences,
        missing_known,
    })
}
