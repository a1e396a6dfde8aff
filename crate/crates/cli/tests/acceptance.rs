//! Acceptance report: one `[PASS]`/`[FAIL]` line per criterion with indented
//! details. Criteria listed in `UNATTAINABLE` may fail without failing the
//! process; any other failure exits non-zero.

use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use fuzzy_refine_core::{
    centroid_weight_numeric, centroid_weights_numeric, classify_pair, defuzzified_weight,
    defuzzify_weights, iteration_bounds, CentroidConvention, Direction, IntervalAction,
    MembershipSpec, Modifier, Power, StepWeights,
};
use fuzzy_refine_service::{SessionConfig, SessionStore};
use fuzzy_refine_sim::golden::divergence_report;
use fuzzy_refine_sim::reference::{OPTIMA, PER_TARGET_N9, TARGET_04, TARGET_MINUS_045};
use fuzzy_refine_sim::{
    calibrate_binary, compare_vs_binary, fuzzy_steps, min_fuzzy_steps, optimize_weights,
    simulate_run, simulate_run_on_stream, Algorithm, BinaryConvention, RunTrace, UserPolicy,
    WeightGrid,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const UNATTAINABLE: &[&str] = &["table1-spot", "table1-trend"];
const TOL: f64 = 1e-9;

struct Check {
    id: &'static str,
    title: &'static str,
    pass: bool,
    details: Vec<String>,
}

impl Check {
    fn new(id: &'static str, title: &'static str) -> Check {
        Check {
            id,
            title,
            pass: true,
            details: Vec::new(),
        }
    }

    fn note(&mut self, line: impl Into<String>) {
        self.details.push(line.into());
    }

    fn require(&mut self, ok: bool, line: impl Into<String>) {
        if !ok {
            self.pass = false;
            self.details.push(format!("FAILED: {}", line.into()));
        }
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() < TOL
}

fn weights(s: f64, m: f64, g: f64) -> StepWeights {
    StepWeights::new(s, m, g).expect("valid weights")
}

fn random_weights(rng: &mut ChaCha8Rng) -> StepWeights {
    loop {
        let mut w = [
            rng.random_range(0.02..0.98),
            rng.random_range(0.02..0.98),
            rng.random_range(0.02..0.98),
        ];
        w.sort_by(f64::total_cmp);
        if let Ok(sw) = StepWeights::new(w[0], w[1], w[2]) {
            if w[1] - w[0] > 1e-3 && w[2] - w[1] > 1e-3 {
                return sw;
            }
        }
    }
}

fn table4() -> Check {
    let mut c = Check::new("table4", "first worked trace replays exactly");
    let started = Instant::now();
    let report = divergence_report(&TARGET_04).expect("replay");
    let elapsed = started.elapsed();
    for d in &report.divergences {
        c.require(false, format!("row {} {}: printed {} replayed {}", d.row, d.column, d.printed, d.replayed));
    }
    c.require(report.rows.len() == 6, format!("{} rows", report.rows.len()));
    let last = report.rows.last().expect("rows");
    c.require(close(last.next_variant, 0.4), format!("final variant {}", last.next_variant));
    // independent recomputation of the printed interval and step columns
    for (row, printed) in report.rows.iter().zip(TARGET_04.rows) {
        c.require(
            close(row.lower_after, printed.updated.0) && close(row.upper_after, printed.updated.1),
            format!("row {} interval", row.step),
        );
        c.require(close(row.delta_x, printed.delta_x), format!("row {} dx", row.step));
        c.require(
            (row.next_variant - printed.next_position).abs() < 0.025,
            format!("row {} position {} vs {}", row.step, row.next_variant, printed.next_position),
        );
    }
    c.require(elapsed < Duration::from_secs(1), format!("runtime {elapsed:?}"));
    c.note(format!("6 rows, final x = {}, {elapsed:?}", last.next_variant));
    c
}

fn table5() -> Check {
    let mut c = Check::new("table5", "second worked trace replays with documented deviations only");
    let report = divergence_report(&TARGET_MINUS_045).expect("replay");
    for d in report.unexpected() {
        c.require(false, format!("row {} {}: printed {} replayed {}", d.row, d.column, d.printed, d.replayed));
    }
    for (row, column) in &report.missing_known {
        c.require(false, format!("documented deviation at row {row} {column} not reproduced"));
    }
    let positions: Vec<f64> = report.rows.iter().map(|r| r.next_variant).collect();
    c.require(
        positions.len() == 9,
        format!("{} rows", positions.len()),
    );
    c.require(close(report.rows[5].next_position, -0.775), format!("row 5 position {}", report.rows[5].next_position));
    c.require(close(report.rows[5].delta_x, 0.25 * 0.9), format!("row 5 dx {}", report.rows[5].delta_x));
    c.require(close(positions[8], -0.45), format!("final {}", positions[8]));
    let known: Vec<_> = report.divergences.iter().filter(|d| d.known.is_some()).collect();
    for column in ["input"] {
        for row in [0, 7] {
            c.require(
                known.iter().any(|d| d.row == row && d.column == column),
                format!("typo at row {row} not listed"),
            );
        }
    }
    c.note(format!("positions {positions:?}"));
    for d in known {
        c.note(format!("known: row {} {}: printed {} replayed {}", d.row, d.column, d.printed, d.replayed));
    }
    c
}

fn expected_pair(first: Modifier, second: Modifier) -> IntervalAction {
    use Direction::*;
    use IntervalAction::*;
    if first.direction == second.direction {
        return match first.direction {
            Greater => SetLowerToPrevPosition,
            Less => SetUpperToPrevPosition,
        };
    }
    // opposite directions: printed rows per first power, indexed by the
    // second power (significantly, moderately, slightly)
    let keep = match first.power {
        Power::Significantly => [false, true, true],
        Power::Moderately => [false, true, true],
        Power::Slightly => [false, false, true],
    };
    let idx = match second.power {
        Power::Significantly => 0,
        Power::Moderately => 1,
        Power::Slightly => 2,
    };
    if !keep[idx] {
        Unchanged
    } else if first.direction == Greater {
        SetLowerToPrevPosition
    } else {
        SetUpperToPrevPosition
    }
}

fn table3() -> Check {
    let mut c = Check::new("table3", "pair rules match all 36 input pairs");
    let mut n = 0;
    for first in Modifier::all() {
        for second in Modifier::all() {
            let got = classify_pair(first, second);
            let want = expected_pair(first, second);
            c.require(got == want, format!("{first} then {second}: {got:?} != {want:?}"));
            n += 1;
        }
    }
    c.require(n == 36, format!("{n} pairs"));
    c.note(format!("{n} pairs checked"));
    c
}

fn table1_spot() -> Check {
    let mut c = Check::new("table1-spot", "nine-point comparison reproduces 4/1/4");
    let w = weights(0.250, 0.361, 0.444);
    let cal = calibrate_binary().expect("calibration");
    c.note(format!("calibrated binary convention: {}", cal.best));
    for s in &cal.scores {
        c.note(format!(
            "  {:<18} binary n9 {:?} matches {}/9, n9 split {:?}, exact splits {}/{}",
            s.convention.name(),
            s.per_target_n9,
            s.per_target_matches,
            s.split_n9,
            s.split_matches,
            cal.rows
        ));
    }
    let r = compare_vs_binary(9, &w, &UserPolicy::error_free(), cal.best).expect("compare");
    c.require(
        r.split() == (4, 1, 4),
        format!("split {:?} at w = (0.250, 0.361, 0.444)", r.split()),
    );
    let printed: Vec<usize> = PER_TARGET_N9.iter().map(|p| p.0).collect();
    let fuzzy: Vec<usize> = (0..9).map(|t| fuzzy_steps(9, t, &w).expect("steps")).collect();
    let fewest: Vec<Option<usize>> = (0..9)
        .map(|t| min_fuzzy_steps(9, t, &w, 12).expect("search"))
        .collect();
    c.require(fuzzy == printed, format!("fuzzy counts {fuzzy:?} vs printed {printed:?}"));
    c.note(format!("fewest possible fuzzy steps per target {fewest:?}"));
    for (t, (&p, f)) in printed.iter().zip(&fewest).enumerate() {
        if let Some(f) = f {
            if p < *f {
                c.note(format!("target {t}: printed {p} steps but no input sequence finishes in under {f}"));
            }
        }
    }
    c
}

fn table1_trend() -> Check {
    let mut c = Check::new("table1-trend", "optimal weights trend with N");
    let mut prev: Option<[f64; 3]> = None;
    for (n, printed) in [(9, 0.444), (17, 0.588), (33, 0.606)] {
        let started = Instant::now();
        let r = optimize_weights(n, &WeightGrid::default_for(n), BinaryConvention::IndexOutward)
            .expect("optimize");
        let w = r.weights.as_array();
        c.note(format!(
            "N={n}: w = ({}, {}, {}) win rate {:.1}% vs printed {:.1}% ({} candidates, {:?})",
            w[0],
            w[1],
            w[2],
            100.0 * r.report.win_rate,
            100.0 * printed,
            r.candidates,
            started.elapsed()
        ));
        c.require(
            (r.report.win_rate - printed).abs() <= 0.10,
            format!("N={n} win rate off by more than 10 points"),
        );
        if let Some(p) = prev {
            c.require(w[0] <= p[0] && w[1] <= p[1], format!("N={n} weights increase"));
        }
        prev = Some(w);
    }
    c
}

fn convergence() -> Check {
    let mut c = Check::new("convergence", "1000 error-free runs converge; gamma in (0,1) whenever x is inside the interval");
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let started = Instant::now();
    let mut boundary = 0;
    let mut steps = 0;
    for i in 0..1000 {
        let n = rng.random_range(5..=129usize);
        let w = random_weights(&mut rng);
        let target = i % n;
        let t = simulate_run(n, target, &w, &UserPolicy::error_free(), Algorithm::Simple)
            .expect("run");
        let eps = (2.0 / (n - 1) as f64) / 2.0;
        if !t.terminated || (t.final_position - t.target).abs() >= eps {
            c.require(false, format!("run {i}: N={n} target {target} ended at {}", t.final_position));
            continue;
        }
        for s in &t.steps {
            let before = s.upper - s.lower;
            let after = s.upper_after - s.lower_after;
            let gamma = after / before;
            steps += 1;
            if s.lower < s.position && s.position < s.upper {
                if !(gamma > 0.0 && gamma < 1.0) {
                    c.require(false, format!("run {i} step {}: gamma {gamma}", s.step));
                }
            } else {
                boundary += 1;
                if gamma > 1.0 {
                    c.require(false, format!("run {i} step {}: width grew", s.step));
                }
            }
        }
    }
    let elapsed = started.elapsed();
    c.require(elapsed < Duration::from_secs(30), format!("runtime {elapsed:?}"));
    c.note(format!(
        "{steps} steps, {boundary} issued from an interval end (gamma = 1 there), {elapsed:?}"
    ));
    c
}

/// Longest run of neutral pair updates, classified with the independent pair
/// table, and the number of contracting updates that left the interval as it was.
fn neutral_runs(t: &RunTrace) -> (usize, usize) {
    let (mut best, mut run, mut idle) = (0, 0, 0);
    for w in t.steps.windows(2) {
        if expected_pair(w[0].modifier, w[1].modifier) == IntervalAction::Unchanged {
            run += 1;
            best = best.max(run);
        } else {
            run = 0;
            let s = &w[1];
            idle += (s.lower_after == s.lower && s.upper_after == s.upper) as usize;
        }
    }
    (best, idle)
}

fn error_tolerance() -> Check {
    let mut c = Check::new("error-tolerance", "1000 erroneous runs keep the target and converge");
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    let mut errors = 0;
    let mut inputs = 0;
    let mut worst_neutral = 0;
    let mut idle = 0;
    for i in 0..1000 {
        let n = rng.random_range(5..=129usize);
        let w = random_weights(&mut rng);
        let p = [0.1, 0.2, 0.3][i % 3];
        let target = i % n;
        let policy = UserPolicy::erroneous(p, rng.random());
        let t = simulate_run_on_stream(n, target, &w, &policy, Algorithm::Tolerant, i as u64)
            .expect("run");
        let eps = 1.0 / (n - 1) as f64;
        c.require(
            t.terminated && (t.final_position - t.target).abs() < eps,
            format!("run {i}: N={n} target {} ended at {}", t.target, t.final_position),
        );
        for s in &t.steps {
            if !(s.lower_after <= t.target + TOL && t.target <= s.upper_after + TOL) {
                c.require(false, format!("run {i} step {}: target left [{}, {}]", s.step, s.lower_after, s.upper_after));
            }
            errors += (!s.correct) as usize;
            inputs += 1;
        }
        let (neutral, no_op) = neutral_runs(&t);
        idle += no_op;
        worst_neutral = worst_neutral.max(neutral);
        c.require(neutral <= 2, format!("run {i}: {neutral} consecutive neutral updates"));
    }
    c.note(format!(
        "{inputs} inputs, {errors} wrong ({:.1}%), longest neutral run {worst_neutral}",
        100.0 * errors as f64 / inputs as f64
    ));
    c.note(format!(
        "{idle} contracting updates moved an end onto itself (previous position already on it)"
    ));
    c
}

fn bound_envelope() -> Check {
    let mut c = Check::new("bounds", "step counts inside the iteration bounds in >= 99% of runs");
    let (mut total, mut inside) = (0, 0);
    let mut violations = Vec::new();
    for row in OPTIMA {
        let [s, m, g] = row.weights();
        let w = weights(s, m, g);
        let b = iteration_bounds(2.0, 1.0 / (row.n - 1) as f64, &w).expect("bounds");
        for target in 0..row.n {
            let t = simulate_run(row.n, target, &w, &UserPolicy::error_free(), Algorithm::Simple)
                .expect("run");
            let k = t.step_count() as f64;
            total += 1;
            if k >= b.t_best.floor() && k <= b.t_worst.ceil() + 2.0 {
                inside += 1;
            } else {
                let trail: Vec<String> = t
                    .steps
                    .iter()
                    .map(|s| format!("{}@{}", s.modifier, s.position))
                    .collect();
                violations.push(format!(
                    "N={} target {target}: {k} steps outside [{}, {}]; {}",
                    row.n,
                    b.t_best.floor(),
                    b.t_worst.ceil() + 2.0,
                    trail.join(" ")
                ));
            }
        }
    }
    c.require(inside as f64 >= 0.99 * total as f64, format!("{inside}/{total}"));
    c.note(format!("published configurations: {inside}/{total} inside"));
    for v in violations {
        c.note(format!("violation: {v}"));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    let (mut rt, mut ri) = (0, 0);
    for i in 0..500 {
        let n = rng.random_range(5..=129usize);
        let w = random_weights(&mut rng);
        let b = iteration_bounds(2.0, 1.0 / (n - 1) as f64, &w).expect("bounds");
        let t = simulate_run(n, i % n, &w, &UserPolicy::error_free(), Algorithm::Simple).expect("run");
        let k = t.step_count() as f64;
        rt += 1;
        ri += (k >= b.t_best.floor() && k <= b.t_worst.ceil() + 2.0) as usize;
    }
    c.note(format!("info: random weights {ri}/{rt} inside"));
    c
}

fn defuzzification() -> Check {
    let mut c = Check::new("defuzz", "closed-form weights agree with quadrature");
    let spec = MembershipSpec {
        k1: 4.0,
        k2: 2.0,
        k3: 6.0,
        k4: 4.0,
        k5: 3.0,
        k6: 4.0,
        k7: 2.0,
    };
    for power in Power::ALL {
        let closed = defuzzified_weight(power, &spec).expect("closed form");
        let matching: Vec<String> = CentroidConvention::ALL
            .iter()
            .filter(|cv| {
                centroid_weight_numeric(power, &spec, **cv).is_ok_and(|v| (v - closed).abs() < TOL)
            })
            .map(|cv| cv.name())
            .collect();
        c.note(format!("{power}: {closed:.6} matches {}", matching.join(", ")));
        c.require(
            matching.contains(&CentroidConvention::CLOSED_FORM.name()),
            format!("{power} not matched by {}", CentroidConvention::CLOSED_FORM.name()),
        );
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    let mut checked = 0;
    for _ in 0..2000 {
        let k2 = rng.random_range(2.0..6.0);
        let k5 = rng.random_range(2.0..4.0);
        let k4 = k5 + rng.random_range(0.1..4.0);
        let k7 = rng.random_range(2.0..4.0);
        let spec = MembershipSpec {
            k1: k2 + rng.random_range(0.1..6.0),
            k2,
            k3: k4 + rng.random_range(0.1..6.0),
            k4,
            k5,
            k6: k7 + rng.random_range(0.1..6.0),
            k7,
        };
        let (Ok(closed), Ok(numeric)) = (
            defuzzify_weights(&spec),
            centroid_weights_numeric(&spec, CentroidConvention::CLOSED_FORM),
        ) else {
            continue;
        };
        checked += 1;
        for (a, b) in closed.as_array().iter().zip(numeric.as_array()) {
            c.require((a - b).abs() < TOL, format!("{spec:?}: {a} vs {b}"));
        }
    }
    c.require(checked >= 100, format!("only {checked} consistent specs"));
    c.note(format!("{checked} random consistent specs agree to 1e-9 under {}", CentroidConvention::CLOSED_FORM.name()));
    c
}

fn run_cli(args: &[&str], out_dir: &Path) -> bool {
    Command::new(env!("CARGO_BIN_EXE_fuzzy-refine"))
        .args(args)
        .env("FUZZY_REFINE_OUT_DIR", out_dir)
        .output()
        .is_ok_and(|o| o.status.success())
}

fn determinism() -> Check {
    let mut c = Check::new("determinism", "same seed gives identical CSVs; restored sessions continue identically");
    let dirs = [tempfile::tempdir().expect("tmp"), tempfile::tempdir().expect("tmp")];
    let commands: [&[&str]; 3] = [
        &["simulate", "--n", "65", "--target-index", "17", "--p-err", "0.2", "--seed", "42"],
        &["compare", "--n", "9,17", "--weights", "0.25,0.361,0.444"],
        &["reproduce-tables", "--table", "all"],
    ];
    for dir in &dirs {
        for args in commands {
            c.require(run_cli(args, dir.path()), format!("{} failed", args.join(" ")));
        }
    }
    let mut files: Vec<_> = std::fs::read_dir(dirs[0].path())
        .expect("dir")
        .map(|e| e.expect("entry").file_name())
        .collect();
    files.sort();
    for f in &files {
        let a = std::fs::read(dirs[0].path().join(f)).expect("read");
        let b = std::fs::read(dirs[1].path().join(f)).ok();
        c.require(b.as_deref() == Some(&a[..]), format!("{} differs between runs", f.to_string_lossy()));
    }
    c.note(format!("{} CSV files byte-identical across two runs", files.len()));

    let data = tempfile::tempdir().expect("tmp");
    let config = || -> SessionConfig {
        serde_json::from_value(serde_json::json!({
            "base": 0.0, "range": 1.0, "step": 0.05, "algorithm": "tolerant",
            "weights": {"slightly": 0.25, "moderately": 0.35, "significantly": 0.45}
        }))
        .expect("config")
    };
    let inputs = TARGET_04.inputs;
    let live = SessionStore::open(data.path()).expect("open");
    let reference = SessionStore::in_memory();
    let id = live.create(config()).expect("create").id;
    let rid = reference.create(config()).expect("create").id;
    for &m in &inputs[..3] {
        live.apply_modifier(id, m).expect("apply");
        reference.apply_modifier(rid, m).expect("apply");
    }
    let before = live.session(id).expect("session");
    drop(live);
    let restored = SessionStore::open(data.path()).expect("reopen");
    c.require(restored.session(id).ok().as_ref() == Some(&before), "restored state differs");
    for &m in &inputs[3..] {
        let a = restored.apply_modifier(id, m).expect("apply");
        let b = reference.apply_modifier(rid, m).expect("apply");
        c.require(
            (a.lower, a.upper, a.position, a.variant) == (b.lower, b.upper, b.position, b.variant),
            format!("step {} diverged after restore", a.step_index),
        );
    }
    let (ha, hb) = (restored.history(id).expect("h"), reference.history(rid).expect("h"));
    c.require(ha == hb, "histories differ");
    c.note(format!("restored after 3 of {} inputs; {} history rows identical", inputs.len(), ha.len()));
    c
}

fn main() -> ExitCode {
    let checks = [
        table4(),
        table5(),
        table3(),
        table1_spot(),
        table1_trend(),
        convergence(),
        error_tolerance(),
        bound_envelope(),
        defuzzification(),
        determinism(),
    ];
    let mut unexpected = 0;
    for c in &checks {
        let tag = if c.pass { "PASS" } else { "FAIL" };
        let known = !c.pass && UNATTAINABLE.contains(&c.id);
        println!(
            "[{tag}] {}: {}{}",
            c.id,
            c.title,
            if known { " (known unattainable)" } else { "" }
        );
        for d in &c.details {
            println!("    {d}");
        }
        if !c.pass && !known {
            unexpected += 1;
        }
    }
    let passed = checks.iter().filter(|c| c.pass).count();
    println!("{passed}/{} criteria passed, {unexpected} unexpected failure(s)", checks.len());
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
