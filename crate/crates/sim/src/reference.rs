//! Published reference values used for reproduction checks.

use fuzzy_refine_core::{Direction, Modifier, Power};

use Direction::{Greater, Less};
use Power::{Moderately, Significantly, Slightly};

/// One row of the optimal-weights table: grid size, weights in thousandths,
/// and the wins / draws / losses split against binary search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OptimumRow {
    pub n: usize,
    pub weights_milli: [u32; 3],
    pub wins: usize,
    pub draws: usize,
    pub losses: usize,
}

impl OptimumRow {
    pub fn weights(&self) -> [f64; 3] {
        self.weights_milli.map(|w| w as f64 / 1000.0)
    }

    pub fn win_rate(&self) -> f64 {
        self.wins as f64 / self.n as f64
    }
}

const fn row(n: usize, w: [u32; 3], wins: usize, draws: usize, losses: usize) -> OptimumRow {
    OptimumRow {
        n,
        weights_milli: w,
        wins,
        draws,
        losses,
    }
}

pub const OPTIMA: [OptimumRow; 23] = [
    row(5, [300, 400, 500], 1, 1, 3),
    row(7, [340, 350, 480], 2, 1, 4),
    row(9, [250, 361, 444], 4, 1, 4),
    row(11, [250, 260, 430], 4, 3, 4),
    row(15, [180, 200, 400], 7, 3, 5),
    row(17, [122, 125, 375], 10, 4, 3),
    row(21, [103, 113, 380], 11, 5, 5),
    row(25, [86, 96, 372], 12, 6, 7),
    row(29, [74, 84, 366], 15, 7, 7),
    row(33, [70, 80, 360], 20, 5, 8),
    row(37, [65, 75, 355], 22, 7, 8),
    row(41, [52, 62, 355], 24, 8, 9),
    row(45, [50, 60, 355], 25, 6, 14),
    row(51, [45, 55, 350], 28, 7, 16),
    row(61, [35, 45, 345], 32, 8, 21),
    row(65, [32, 42, 346], 33, 11, 21),
    row(73, [29, 39, 344], 35, 12, 26),
    row(81, [26, 36, 343], 38, 13, 30),
    row(89, [23, 33, 342], 40, 14, 35),
    row(97, [22, 32, 341], 42, 15, 40),
    row(105, [18, 26, 355], 50, 15, 40),
    row(121, [16, 24, 354], 53, 17, 51),
    row(129, [15, 23, 354], 55, 18, 56),
];

pub fn optimum_for(n: usize) -> Option<&'static OptimumRow> {
    OPTIMA.iter().find(|r| r.n == n)
}

/// Per-target step counts for N = 9 at the N = 9 optimum: (fuzzy, binary).
pub const PER_TARGET_N9: [(usize, usize); 9] = [
    (2, 3),
    (3, 2),
    (3, 3),
    (3, 4),
    (4, 4),
    (3, 4),
    (3, 3),
    (3, 2),
    (2, 3),
];

/// A worked error-tolerant trace as printed: interval at issue, position at
/// issue, input, updated interval, step length and next position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrintedRow {
    pub interval: (f64, f64),
    pub position: f64,
    pub input: Modifier,
    pub marked_error: bool,
    pub updated: (f64, f64),
    pub delta_x: f64,
    pub next_position: f64,
}

const fn printed(
    interval: (f64, f64),
    position: f64,
    input: Modifier,
    marked_error: bool,
    updated: (f64, f64),
    delta_x: f64,
    next_position: f64,
) -> PrintedRow {
    PrintedRow {
        interval,
        position,
        input,
        marked_error,
        updated,
        delta_x,
        next_position,
    }
}

const fn m(p: Power, d: Direction) -> Modifier {
    Modifier::new(p, d)
}

/// A printed worked example plus the inputs actually replayed.
#[derive(Debug, Clone, Copy)]
pub struct WorkedExample {
    pub name: &'static str,
    pub target: f64,
    pub weights: [f64; 3],
    pub rows: &'static [PrintedRow],
    pub inputs: &'static [Modifier],
    /// (row, column, explanation) for every cell where the replay is known to
    /// differ from the print.
    pub known_deviations: &'static [(usize, &'static str, &'static str)],
}

pub const TARGET_04: WorkedExample = WorkedExample {
    name: "table4",
    target: 0.4,
    weights: [0.25, 0.35, 0.45],
    rows: &[
        printed((-1.0, 1.0), 0.0, m(Moderately, Greater), false, (-1.0, 1.0), 0.7, 0.7),
        printed((-1.0, 1.0), 0.7, m(Slightly, Greater), true, (0.0, 1.0), 0.25, 0.95),
        printed((0.0, 1.0), 0.95, m(Moderately, Less), false, (0.0, 1.0), 0.35, 0.6),
        printed((0.0, 1.0), 0.6, m(Slightly, Less), false, (0.0, 0.95), 0.2375, 0.35),
        printed((0.0, 0.95), 0.35, m(Slightly, Less), true, (0.0, 0.6), 0.15, 0.2),
        printed((0.0, 0.6), 0.2, m(Moderately, Greater), false, (0.0, 0.6), 0.21, 0.4),
    ],
    inputs: &[
        m(Moderately, Greater),
        m(Slightly, Greater),
        m(Moderately, Less),
        m(Slightly, Less),
        m(Slightly, Less),
        m(Moderately, Greater),
    ],
    known_deviations: &[],
};

pub const TARGET_MINUS_045: WorkedExample = WorkedExample {
    name: "table5",
    target: -0.45,
    weights: [0.25, 0.35, 0.45],
    rows: &[
        printed((-1.0, 1.0), 0.0, m(Significantly, Greater), false, (-1.0, 1.0), 0.9, -0.9),
        printed((-1.0, 1.0), -0.9, m(Slightly, Less), true, (-1.0, 0.0), 0.25, -1.0),
        printed((-1.0, 0.0), -1.0, m(Moderately, Greater), false, (-1.0, 0.0), 0.35, -0.65),
        printed((-1.0, 0.0), -0.65, m(Slightly, Less), true, (-1.0, 0.0), 0.25, -0.9),
        printed((-1.0, 0.0), -0.9, m(Moderately, Greater), false, (-1.0, 0.0), 0.35, -0.55),
        printed((-1.0, 0.0), -0.55, m(Slightly, Less), true, (-1.0, 0.0), 0.25, -0.775),
        printed((-0.9, 0.0), -0.775, m(Significantly, Greater), false, (-0.9, 0.0), 0.405, -0.37),
        printed((-0.9, 0.0), -0.37, m(Slightly, Less), true, (-0.775, 0.0), 0.19375, -0.175),
        printed((-0.775, 0.0), -0.175, m(Moderately, Less), false, (-0.775, 0.0), 0.27125, -0.45),
    ],
    inputs: &[
        m(Significantly, Less),
        m(Slightly, Less),
        m(Moderately, Greater),
        m(Slightly, Less),
        m(Moderately, Greater),
        m(Slightly, Less),
        m(Significantly, Greater),
        m(Slightly, Greater),
        m(Moderately, Less),
    ],
    known_deviations: &[
        (
            0,
            "input",
            "printed 'significantly greater' but x moves from 0 to -0.9; replayed as 'significantly less'",
        ),
        (
            5,
            "updated",
            "interval printed one row late; the move already uses [-0.9, 0]",
        ),
        (
            5,
            "delta_x",
            "printed 0.25 x 1 but the position column subtracts 0.225 = 0.25 x 0.9",
        ),
        (
            7,
            "input",
            "printed 'slightly less' but x moves from -0.37 up to -0.175 and the next row keeps [-0.775, 0]; replayed as 'slightly greater'",
        ),
    ],
};

pub const WORKED_EXAMPLES: [WorkedExample; 2] = [TARGET_04, TARGET_MINUS_045];
