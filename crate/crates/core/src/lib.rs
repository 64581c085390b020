//! Gap-producing reduction machinery for weighted and unweighted SetCover.
//!
//! The crate is organised bottom-up:
//!
//! * [`instance`] holds the set systems, graphs and solutions every other
//!   module consumes, plus [`instance::verify_cover`].
//! * [`ecc`] provides prime fields, Reed–Solomon encoding, code
//!   concatenation and exact brute-force distance measurement.
//! * [`threshold`] builds strong threshold graphs from a codebook and checks
//!   their covering and threshold properties exhaustively.
//! * [`reductions`] contains the threshold-graph composition, weight removal,
//!   the two Clique/SetCover reductions and the parameter preset calculators.
//! * [`solvers`] contains the exact and greedy oracles used to certify the
//!   reductions on small instances.
//!
//! The narrative guide in `book/` walks through each piece with runnable
//! snippets.

pub mod ecc;
pub mod instance;
pub mod limits;
pub mod math;
pub mod reductions;
pub mod solvers;
pub mod threshold;

pub use instance::{
    verify_cover, CoverCheck, InstanceError, Labels, ProvenanceStep, SetCoverInstance, SetId,
    SimpleGraph, Solution, WeightedSet,
};
pub use limits::Limits;
pub use math::Rational;
