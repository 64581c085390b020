//! The reductions: threshold-graph composition, weight removal, the two
//! Clique/SetCover translations, parameter presets and gap certification.

mod certify;
mod compose;
mod presets;
mod setcover_clique;
mod small_universe;
mod weights;

pub use certify::{certify_gap, GapReport, GapThresholds};
pub use compose::{compose, BlockDiagnostic, BlockOutcome, Composed, ComposedLayout, SetRole};
pub use presets::{preset_derand, preset_w1, preset_w2, PipelineParams, PresetCheck, DEFAULT_W1_FLOOR};
pub use setcover_clique::{setcover_to_clique, CliqueLayout, CliqueReduction};
pub use small_universe::{clique_to_setcover_small_universe, SmallUniverseLayout};
pub use weights::remove_weights;

use thiserror::Error;

use crate::ecc::CodeError;
use crate::instance::{InstanceError, SetId};
use crate::threshold::ThresholdError;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReductionError {
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Threshold(#[from] ThresholdError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error("the instance has {sets} sets but each A-part only has n = {n} vertices")]
    PartSize { sets: usize, n: u64 },
    #[error("k = {k} must divide m = {m} so that the A-side weight m/k is an integer")]
    Divisibility { k: u64, m: u64 },
    #[error("the tuple arity c must be at least 1")]
    ZeroArity,
    #[error("{what} would be {count}, over the limit of {limit}")]
    Budget {
        what: &'static str,
        count: u128,
        limit: u64,
    },
    #[error("expected unit weights, found weights {0:?}")]
    Weighted(Vec<u64>),
    #[error("weight removal needs weights {{1, w}}, found {0:?}")]
    UnsupportedWeights(Vec<u64>),
    #[error("k must be at least 2, got {0}")]
    SmallK(u64),
    #[error("the graph needs at least 2 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("|U| = {universe} is not a multiple of the group size {group} = floor(log_k |S|)")]
    NonFactorable { universe: usize, group: usize },
    #[error("cover uses {found} sets, more than k = {k}")]
    CoverTooLarge { found: usize, k: u64 },
    #[error("the given solution does not cover the instance (first missing element {0})")]
    NotACover(usize),
    #[error("set {0} has no matching vertex")]
    UnknownSet(SetId),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

/// `base^exp` in `u128`, `None` on overflow.
pub(crate) fn checked_power(base: u64, exp: usize) -> Option<u128> {
    (base as u128).checked_pow(u32::try_from(exp).ok()?)
}
