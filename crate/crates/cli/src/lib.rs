//! The `fuzzy-refine` command line.

use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use fuzzy_refine_core::{IntervalAction, StepWeights};
use fuzzy_refine_service::SessionStore;
use fuzzy_refine_sim::{
    calibrate_binary, compare_vs_binary, estimate_contraction_probability, optimize_weights,
    simulate_run, Algorithm, BinaryConvention, RunTrace, UserPolicy, WeightGrid,
};
use thiserror::Error;

pub mod output;
pub mod tables;

use output::{emit, num, CsvReport};

pub const OUT_DIR_ENV: &str = "FUZZY_REFINE_OUT_DIR";

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] fuzzy_refine_core::FuzzyError),
    #[error(transparent)]
    Sim(#[from] fuzzy_refine_sim::SimError),
    #[error(transparent)]
    Service(#[from] fuzzy_refine_service::ServiceError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("golden trace mismatch:\n{0}")]
    GoldenMismatch(String),
}

#[derive(Debug, Parser)]
#[command(name = "fuzzy-refine", version, about = "Fuzzy-modifier refinement: simulations, table reproduction and the session service")]
pub struct Cli {
    /// Directory for CSV outputs when `--out` is not given.
    #[arg(long, global = true, env = OUT_DIR_ENV)]
    pub out_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one simulated search and write its trace.
    Simulate(SimulateArgs),
    /// Compare the fuzzy search with binary search on every grid target.
    Compare(CompareArgs),
    /// Brute-force the step weights that maximize the win rate.
    OptimizeWeights(OptimizeArgs),
    /// Write CSV mirrors of the published tables and a divergence report.
    ReproduceTables(ReproduceArgs),
    /// Score the binary-search counting conventions against the published counts.
    CalibrateBinary(CalibrateArgs),
    /// Estimate pair contraction probabilities for an erroneous user.
    Contraction(ContractionArgs),
    /// Start the HTTP session service.
    Serve(ServeArgs),
}

fn parse_weights(s: &str) -> Result<StepWeights, String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("'{p}': {e}")))
        .collect::<Result<_, _>>()?;
    let [a, b, c] = parts[..] else {
        return Err(format!("expected three comma-separated weights, got {}", parts.len()));
    };
    StepWeights::new(a, b, c).map_err(|e| e.to_string())
}

fn parse_n(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|e| format!("'{s}': {e}"))?;
    if n < 2 {
        return Err(format!("n must be at least 2, got {n}"));
    }
    Ok(n)
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_parser = parse_n)]
    pub n: usize,
    #[arg(long)]
    pub target_index: usize,
    /// w_slightly,w_moderately,w_significantly
    #[arg(long, value_parser = parse_weights, default_value = "0.25,0.35,0.45")]
    pub weights: StepWeights,
    #[arg(long, default_value = "tolerant")]
    pub algorithm: Algorithm,
    /// Per-query direction error probability (0 = error-free user).
    #[arg(long, default_value_t = 0.0)]
    pub p_err: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Let an erroneous user drive the simple search.
    #[arg(long)]
    pub allow_errors_with_simple: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long, value_parser = parse_n, value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    #[arg(long, value_parser = parse_weights)]
    pub weights: StepWeights,
    #[arg(long, default_value = "index-outward")]
    pub binary: BinaryConvention,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[arg(long, value_parser = parse_n, value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    /// Uniform grid spacing in thousandths; by default 0.001 near the
    /// published optimum and 0.01 elsewhere.
    #[arg(long)]
    pub grid_step: Option<u32>,
    #[arg(long, default_value = "index-outward")]
    pub binary: BinaryConvention,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub table: tables::Table,
    #[arg(long, default_value = "index-outward")]
    pub binary: BinaryConvention,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct CalibrateArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ContractionArgs {
    #[arg(long, value_parser = parse_n, default_value = "41")]
    pub n: usize,
    #[arg(long, value_parser = parse_weights, default_value = "0.25,0.35,0.45")]
    pub weights: StepWeights,
    #[arg(long, default_value_t = 0.2)]
    pub p_err: f64,
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, default_value = "127.0.0.1:8080")]
    pub addr: SocketAddr,
    /// Event-log directory; sessions are kept in memory only when absent.
    #[arg(long, env = "FUZZY_REFINE_DATA_DIR")]
    pub data_dir: Option<PathBuf>,
}

/// Parses `args` and runs the command. Usage errors exit with 2, failures
/// and golden-trace mismatches with 1.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

pub fn execute(cli: Cli) -> Result<(), CliError> {
    let out_dir = cli.out_dir.as_deref();
    match cli.command {
        Command::Simulate(a) => simulate(a, out_dir),
        Command::Compare(a) => compare(a, out_dir),
        Command::OptimizeWeights(a) => optimize(a, out_dir),
        Command::ReproduceTables(a) => reproduce(a, out_dir),
        Command::CalibrateBinary(a) => calibrate(a, out_dir),
        Command::Contraction(a) => contraction(a, out_dir),
        Command::Serve(a) => serve(a),
    }
}

fn announce(path: Option<PathBuf>) {
    if let Some(p) = path {
        eprintln!("wrote {}", p.display());
    }
}

fn weights_text(w: &StepWeights) -> String {
    let [s, m, g] = w.as_array();
    format!("{s},{m},{g}")
}

fn action_name(trace: &RunTrace, i: usize) -> &'static str {
    let s = &trace.steps[i];
    match (trace.algorithm, s.action) {
        (_, Some(a)) => a.as_str(),
        (Algorithm::Simple, None) => match s.modifier.direction {
            fuzzy_refine_core::Direction::Greater => IntervalAction::SetLowerToPrevPosition.as_str(),
            fuzzy_refine_core::Direction::Less => IntervalAction::SetUpperToPrevPosition.as_str(),
        },
        (Algorithm::Tolerant, None) => "",
    }
}

fn simulate(a: SimulateArgs, out_dir: Option<&Path>) -> Result<(), CliError> {
    let mut policy = if a.p_err > 0.0 {
        UserPolicy::erroneous(a.p_err, a.seed)
    } else {
        UserPolicy {
            seed: a.seed,
            ..UserPolicy::error_free()
        }
    };
    policy.allow_errors_with_simple = a.allow_errors_with_simple;
    let trace = simulate_run(a.n, a.target_index, &a.weights, &policy, a.algorithm)?;
    let mut report = CsvReport::new(
        "simulate",
        a.seed,
        &["step", "a", "b", "x", "power", "direction", "dx", "snapped_x", "action"],
    )?;
    report
        .comment("n", a.n)
        .comment("target_index", a.target_index)
        .comment("target", trace.target)
        .comment("weights", weights_text(&a.weights))
        .comment("algorithm", a.algorithm.as_str())
        .comment("p_err", a.p_err)
        .comment("epsilon", trace.epsilon)
        .comment("steps", trace.step_count())
        .comment("final_variant", trace.final_variant);
    for (i, s) in trace.steps.iter().enumerate() {
        report.row([
            s.step.to_string(),
            num(s.lower_after),
            num(s.upper_after),
            num(s.position),
            s.modifier.power.to_string(),
            s.modifier.direction.to_string(),
            num(s.delta_x),
            num(s.variant_after),
            action_name(&trace, i).to_string(),
        ])?;
    }
    let name = format!("simulate_n{}_t{}_seed{}.csv", a.n, a.target_index, a.seed);
    announce(emit(report, a.out.as_deref(), out_dir, &name)?);
    Ok(())
}

fn compare(a: CompareArgs, out_dir: Option<&Path>) -> Result<(), CliError> {
    let mut report = CsvReport::new(
        "compare",
        a.seed,
        &["n", "target_index", "t_fuzzy", "t_binary", "outcome"],
    )?;
    report
        .comment("weights", weights_text(&a.weights))
        .comment("binary_convention", a.binary);
    for &n in &a.n {
        let r = compare_vs_binary(n, &a.weights, &UserPolicy::error_free(), a.binary)?;
        println!("n={n} {r}");
        for t in &r.per_target {
            report.row([
                n.to_string(),
                t.target_index.to_string(),
                t.t_fuzzy.to_string(),
                t.t_binary.to_string(),
                t.outcome.as_str().to_string(),
            ])?;
        }
    }
    // the summary goes to stdout, so the CSV needs a file
    let dir = out_dir.unwrap_or(Path::new("."));
    let name = format!("compare_{}.csv", join(&a.n));
    announce(emit(report, a.out.as_deref(), Some(dir), &name)?);
    Ok(())
}

fn join(ns: &[usize]) -> String {
    ns.iter().map(|n| n.to_string()).collect::<Vec<_>>().join("-")
}

fn optimize(a: OptimizeArgs, out_dir: Option<&Path>) -> Result<(), CliError> {
    let mut report = CsvReport::new(
        "optimize-weights",
        a.seed,
        &[
            "n",
            "w_slightly",
            "w_moderately",
            "w_significantly",
            "win_rate",
            "wins",
            "draws",
            "losses",
            "candidates",
        ],
    )?;
    report.comment("binary_convention", a.binary).comment(
        "grid",
        a.grid_step.map_or("default".to_string(), |s| format!("uniform:{s}")),
    );
    for &n in &a.n {
        let grid = match a.grid_step {
            Some(step) => WeightGrid::uniform(step)?,
            None => WeightGrid::default_for(n),
        };
        let r = optimize_weights(n, &grid, a.binary)?;
        let [s, m, g] = r.weights.as_array();
        println!("n={n} w=({s}, {m}, {g}) {} over {} candidates", r.report, r.candidates);
        report.row([
            n.to_string(),
            num(s),
            num(m),
            num(g),
            num(r.report.win_rate),
            r.report.wins.to_string(),
            r.report.draws.to_string(),
            r.report.losses.to_string(),
            r.candidates.to_string(),
        ])?;
    }
    let dir = out_dir.unwrap_or(Path::new("."));
    let name = format!("optimize_{}.csv", join(&a.n));
    announce(emit(report, a.out.as_deref(), Some(dir), &name)?);
    Ok(())
}

fn reproduce(a: ReproduceArgs, out_dir: Option<&Path>) -> Result<(), CliError> {
    let dir = out_dir.map_or_else(|| PathBuf::from("tables"), Path::to_path_buf);
    let outcome = tables::reproduce(a.table, &dir, a.binary, a.seed)?;
    for line in &outcome.summary {
        println!("{line}");
    }
    for f in &outcome.files {
        eprintln!("wrote {}", f.display());
    }
    if outcome.unexpected.is_empty() {
        Ok(())
    } else {
        Err(CliError::GoldenMismatch(outcome.unexpected.join("\n")))
    }
}

fn calibrate(a: CalibrateArgs, out_dir: Option<&Path>) -> Result<(), CliError> {
    let r = calibrate_binary()?;
    let mut report = CsvReport::new(
        "calibrate-binary",
        a.seed,
        &[
            "convention",
            "per_target_matches",
            "per_target_n9",
            "split_matches",
            "split_distance",
            "split_n9",
        ],
    )?;
    report
        .comment("rows", r.rows)
        .comment("best", r.best)
        .comment("fuzzy_n9", join(&r.fuzzy_n9))
        .comment("fuzzy_n9_matches", r.fuzzy_n9_matches);
    for s in &r.scores {
        report.row([
            s.convention.to_string(),
            s.per_target_matches.to_string(),
            join(&s.per_target_n9),
            s.split_matches.to_string(),
            s.split_distance.to_string(),
            format!("{}/{}/{}", s.split_n9.0, s.split_n9.1, s.split_n9.2),
        ])?;
    }
    println!("best convention: {}", r.best);
    announce(emit(report, a.out.as_deref(), out_dir, "calibrate_binary.csv")?);
    Ok(())
}

fn contraction(a: ContractionArgs, out_dir: Option<&Path>) -> Result<(), CliError> {
    let policy = UserPolicy::erroneous(a.p_err, a.seed);
    let e = estimate_contraction_probability(a.n, &a.weights, &policy, a.trials)?;
    let mut report = CsvReport::new(
        "contraction",
        a.seed,
        &[
            "n",
            "p_err",
            "trials",
            "pairs",
            "p_c_hat",
            "pi_c_hat",
            "p_err_observed",
            "discrepancy",
            "discrepancy_observed",
            "standard_error",
        ],
    )?;
    report.comment("weights", weights_text(&a.weights));
    report.row([
        a.n.to_string(),
        num(e.p_err),
        e.trials.to_string(),
        e.pairs.to_string(),
        num(e.p_c_hat),
        num(e.pi_c_hat),
        num(e.p_err_observed),
        num(e.discrepancy),
        num(e.discrepancy_observed),
        num(e.standard_error),
    ])?;
    announce(emit(report, a.out.as_deref(), out_dir, "contraction.csv")?);
    Ok(())
}

fn serve(a: ServeArgs) -> Result<(), CliError> {
    let _ = tracing_subscriber::fmt()
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env()
                .unwrap_or_else(|_| tracing_subscriber::EnvFilter::new("info")),
        )
        .with_writer(std::io::stderr)
        .try_init();
    let store = match &a.data_dir {
        Some(dir) => SessionStore::open(dir)?,
        None => SessionStore::in_memory(),
    };
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(fuzzy_refine_service::serve(a.addr, Arc::new(store)))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_parse() {
        let w = parse_weights("0.25, 0.35,0.45").unwrap();
        assert_eq!(w.as_array(), [0.25, 0.35, 0.45]);
        assert!(parse_weights("0.25,0.35").is_err());
        assert!(parse_weights("0.45,0.35,0.25").is_err());
        assert!(parse_weights("a,b,c").is_err());
    }

    #[test]
    fn grid_size_parse() {
        assert_eq!(parse_n("2"), Ok(2));
        assert!(parse_n("1").is_err());
        assert!(parse_n("-3").is_err());
    }

    #[test]
    fn command_tree_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn out_dir_is_global() {
        let cli = Cli::try_parse_from(["fuzzy-refine", "calibrate-binary", "--out-dir", "x"]).unwrap();
        assert_eq!(cli.out_dir, Some(PathBuf::from("x")));
    }
}
