//! Fuzzy-modifier refinement of a single design parameter.
//!
//! A base value is expanded into a grid of local variants ([`VariantSpace`]).
//! A user then steers a working interval toward the variant they want by
//! issuing [`Modifier`]s such as "slightly less" or "significantly greater".
//! Two step rules are provided:
//!
//! * [`simple_step`] trusts every direction and shrinks the interval on each
//!   input.
//! * [`tolerant_step`] only shrinks the interval after looking at pairs of
//!   consecutive inputs, so that a single wrong direction followed by a
//!   stronger correction never drops the target.
//!
//! Step sizes come from [`StepWeights`], either supplied directly or derived
//! from triangular membership functions via [`defuzzify_weights`].

mod bounds;
mod error;
mod membership;
mod modifier;
mod search;
mod space;
mod tolerant;

pub use bounds::{iteration_bounds, IterationBounds};
pub use error::{FuzzyError, Result};
pub use membership::{
    centroid_weight_numeric, centroid_weights_numeric, defuzzified_weight, defuzzify_weights,
    membership, Aggregation, CentroidConvention, IntegrationDomain, MembershipSpec, StepWeights,
};
pub use modifier::{Direction, Modifier, ParseModifierError, Power};
pub use search::{is_terminated, simple_step, PositionRule, SearchState, StepRecord};
pub use space::{build_variant_space, VariantSpace};
pub use tolerant::{
    classify_pair, tolerant_step, validate_error_pattern, IntervalAction, TolerantState,
};
