//! Simulation harness for fuzzy refinement: simulated users, the binary
//! search baseline, fuzzy-vs-binary comparisons, weight optimization and
//! contraction statistics for the error-tolerant search.

mod binary;
mod calibrate;
mod compare;
mod contraction;
mod error;
pub mod golden;
mod optimize;
mod policy;
pub mod reference;
mod run;

pub use binary::{binary_search_steps, binary_steps, BinaryConvention};
pub use calibrate::{calibrate_binary, CalibrationReport, ConventionScore};
pub use compare::{compare_vs_binary, ComparisonReport, Outcome, TargetResult};
pub use contraction::{
    estimate_contraction_probability, estimate_from_traces, ContractionEstimate, MIN_TRIALS,
};
pub use error::{Result, SimError};
pub use optimize::{optimize_weights, OptimizationResult, WeightGrid};
pub use policy::{
    closest_power, ClosestStepUser, PowerRule, Query, ScriptedUser, SimulatedUser, UserMode,
    UserPolicy, UserView,
};
pub use run::{
    fuzzy_steps, min_fuzzy_steps, run_with_user, simulate_run, simulate_run_on_stream, unit_grid,
    Algorithm, RunTrace, TraceStep, MAX_STEPS,
};
