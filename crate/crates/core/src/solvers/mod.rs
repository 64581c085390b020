//! Exact and approximate solvers used as oracles.
//!
//! Set systems are converted once into dense word bitsets ([`Bits`]); all
//! searches run over set indices and translate back to [`SetId`]s only in
//! their results.
//!
//! [`SetId`]: crate::SetId

mod block_greedy;
mod clique;
mod exact;
mod greedy;

pub use block_greedy::{block_greedy, round_count, BlockGreedyReport, RoundTrace};
pub use clique::{exact_clique, CliqueResult};
pub use exact::{certify_no_cover_at_most, exact_weighted_opt, BoundCertificate, ExactOutcome, ExactReport};
pub use greedy::greedy;

use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::instance::SetCoverInstance;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolverError {
    #[error("elements {0:?} are in no set")]
    Uncoverable(Vec<usize>),
    #[error("block greedy needs 2 <= T < k, got k = {k}, T = {t}")]
    InvalidBlockParameters { k: usize, t: usize },
    #[error("block greedy runs on unweighted instances only")]
    Weighted,
    #[error("budget limits must be positive")]
    InvalidBudget,
    #[error("search budget exhausted after {nodes} nodes")]
    BudgetExhausted { nodes: u64 },
}

/// Limits on an exact search. All three must be positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SolverBudget {
    /// Largest weight bound the search will try to certify.
    pub max_weight_bound: u64,
    /// Maximum number of search nodes (partial selections) expanded.
    pub max_subset_enumeration: u64,
    pub wall_time_limit: Duration,
}

impl SolverBudget {
    pub fn new(max_weight_bound: u64, max_subset_enumeration: u64, wall_time_limit: Duration) -> Result<Self, SolverError> {
        if max_weight_bound == 0 || max_subset_enumeration == 0 || wall_time_limit.is_zero() {
            return Err(SolverError::InvalidBudget);
        }
        Ok(SolverBudget {
            max_weight_bound,
            max_subset_enumeration,
            wall_time_limit,
        })
    }
}

impl Default for SolverBudget {
    fn default() -> Self {
        SolverBudget {
            max_weight_bound: u64::MAX,
            max_subset_enumeration: 200_000_000,
            wall_time_limit: Duration::from_secs(300),
        }
    }
}

/// Node and clock accounting shared by the searches.
pub(crate) struct Meter {
    nodes: u64,
    limit: u64,
    deadline: Instant,
    started: Instant,
    exhausted: bool,
}

impl Meter {
    pub(crate) fn new(budget: &SolverBudget) -> Self {
        let started = Instant::now();
        Meter {
            nodes: 0,
            limit: budget.max_subset_enumeration,
            deadline: started + budget.wall_time_limit,
            started,
            exhausted: false,
        }
    }

    /// Counts one node; false once the budget is gone.
    pub(crate) fn tick(&mut self) -> bool {
        if self.exhausted {
            return false;
        }
        self.nodes += 1;
        if self.nodes > self.limit || (self.nodes.is_multiple_of(1024) && Instant::now() >= self.deadline) {
            self.exhausted = true;
        }
        !self.exhausted
    }

    pub(crate) fn nodes(&self) -> u64 {
        self.nodes
    }

    pub(crate) fn elapsed(&self) -> Duration {
        self.started.elapsed()
    }
}

/// Dense bitset over the universe, one row per set.
#[derive(Debug, Clone)]
pub(crate) struct Bits {
    pub(crate) words: usize,
    pub(crate) universe: usize,
    pub(crate) rows: Vec<Vec<u64>>,
}

impl Bits {
    pub(crate) fn new(instance: &SetCoverInstance) -> Self {
        let universe = instance.universe_size();
        let words = universe.div_ceil(64);
        let rows = instance
            .sets()
            .iter()
            .map(|set| {
                let mut row = vec![0u64; words];
                for &e in &set.elements {
                    row[e / 64] |= 1 << (e % 64);
                }
                row
            })
            .collect();
        Bits { words, universe, rows }
    }

    pub(crate) fn empty(&self) -> Vec<u64> {
        vec![0u64; self.words]
    }

    /// Lowest element not in `covered`.
    pub(crate) fn first_uncovered(&self, covered: &[u64]) -> Option<usize> {
        for (w, &word) in covered.iter().enumerate() {
            if word != u64::MAX {
                let e = w * 64 + (!word).trailing_zeros() as usize;
                return (e < self.universe).then_some(e);
            }
        }
        None
    }

    pub(crate) fn uncovered_count(&self, covered: &[u64]) -> usize {
        self.universe - covered.iter().map(|w| w.count_ones() as usize).sum::<usize>()
    }

    /// `|row \ covered|`.
    pub(crate) fn gain(&self, set: usize, covered: &[u64]) -> usize {
        self.rows[set]
            .iter()
            .zip(covered)
            .map(|(r, c)| (r & !c).count_ones() as usize)
            .sum()
    }

    pub(crate) fn add(&self, set: usize, covered: &mut [u64]) {
        for (c, r) in covered.iter_mut().zip(&self.rows[set]) {
            *c |= r;
        }
    }
}
