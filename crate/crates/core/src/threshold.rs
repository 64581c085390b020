//! Strong threshold graphs built from a code.
//!
//! For a codebook `C: Σ^r → Σ^m` and a part count `k`, the graph has A-parts
//! `A_1..A_k`, each a copy of the codebook, and B-parts `B_1..B_m`, each a
//! copy of `Σ^k`. The A-vertex `(i, x)` and the B-vertex `(j, b)` are linked
//! iff `C(x)_j = b_i`. Adjacency is computed from the stored codewords on
//! demand; no edge list is ever materialized.
//!
//! A B-vertex is addressed by its index in `0..|Σ|^k`, read little-endian in
//! base `|Σ|`: digit `i` is the symbol `b_i` facing part `A_i`.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::ecc::{CodeError, Codebook};
use crate::limits::Limits;
use crate::math::{ceil, floor_sqrt, format_rational, Rational};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ThresholdError {
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error("relative distance 1 makes the threshold h = sqrt(2ε/(1-δ)) undefined")]
    DegenerateDistance,
    #[error("ε must lie strictly between 0 and 1, got {0}")]
    InvalidEpsilon(String),
    #[error("the number of A-parts k must be positive")]
    NoParts,
    #[error("{what} needs {count} steps, over the budget of {limit}")]
    BudgetExceeded {
        what: &'static str,
        count: u128,
        limit: u64,
    },
    #[error("A-vertex ({part}, {codeword}) is outside k = {k} parts of size n = {n}")]
    AVertexOutOfRange {
        part: usize,
        codeword: usize,
        k: usize,
        n: usize,
    },
    #[error("B-vertex ({part}, {index}) is outside m = {m} parts of size t = {t}")]
    BVertexOutOfRange {
        part: usize,
        index: u64,
        m: usize,
        t: u64,
    },
    #[error("expected {expected} entries (one per part), got {found}")]
    ChoiceCount { expected: usize, found: usize },
    #[error("choice for part {expected} lies in part {found}")]
    ChoiceOutOfOrder { expected: usize, found: usize },
    #[error("A-vertex ({0}, {1}) listed twice")]
    DuplicateVertex(usize, usize),
}

/// An `(n, k, t, m, h, ε)` tuple. `h` is generally irrational and is kept as
/// the exact square `h²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ThresholdParams {
    pub n: u64,
    pub k: usize,
    pub t: u64,
    pub m: usize,
    #[serde(serialize_with = "serialize_rational")]
    pub h_squared: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub epsilon: Rational,
}

pub(crate) fn serialize_rational<S: serde::Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(value))
}

impl ThresholdParams {
    /// `h² = 2ε/(1-δ)` for a code of relative distance `δ < 1`.
    pub fn threshold_squared(epsilon: Rational, distance: Rational) -> Result<Rational, ThresholdError> {
        if distance >= Rational::one() {
            return Err(ThresholdError::DegenerateDistance);
        }
        Ok(epsilon * Rational::from_integer(2) / (Rational::one() - distance))
    }

    pub fn h(&self) -> f64 {
        (*self.h_squared.numer() as f64 / *self.h_squared.denom() as f64).sqrt()
    }

    /// `⌊h⌋`, exact.
    pub fn h_floor(&self) -> u128 {
        floor_sqrt(&self.h_squared)
    }

    /// Whether a set of `size` A-vertices is larger than `h`.
    pub fn exceeds_h(&self, size: usize) -> bool {
        let size = size as u128;
        Rational::from_integer(size * size) > self.h_squared
    }

    /// `⌈εm⌉`, the number of bad indices the threshold property talks about.
    pub fn bad_index_threshold(&self) -> usize {
        ceil(&(self.epsilon * Rational::from_integer(self.m as u128))) as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct AVertex {
    pub part: usize,
    pub codeword: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BVertex {
    pub part: usize,
    pub index: u64,
}

/// Deliberate damage used to probe the checkers.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Faults {
    pub removed_b: BTreeSet<BVertex>,
    pub removed_edges: BTreeSet<(AVertex, BVertex)>,
}

impl Faults {
    pub fn is_empty(&self) -> bool {
        self.removed_b.is_empty() && self.removed_edges.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdGraph {
    params: ThresholdParams,
    codebook: Codebook,
    faults: Faults,
}

/// Builds the threshold graph of `book` with `k` A-parts.
pub fn build_threshold_graph(
    book: Codebook,
    k: usize,
    epsilon: Rational,
    limits: &Limits,
) -> Result<ThresholdGraph, ThresholdError> {
    if k == 0 {
        return Err(ThresholdError::NoParts);
    }
    if epsilon.is_zero() || epsilon >= Rational::one() {
        return Err(ThresholdError::InvalidEpsilon(format_rational(&epsilon)));
    }
    let h_squared = ThresholdParams::threshold_squared(epsilon, book.declared_distance())?;
    let t = (book.alphabet() as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if t > limits.max_b_part as u128 {
        return Err(ThresholdError::BudgetExceeded {
            what: "B-part |Σ|^k",
            count: t,
            limit: limits.max_b_part,
        });
    }
    if book.len() as u64 > limits.max_codewords {
        return Err(CodeError::BudgetExceeded {
            count: book.len() as u128,
            limit: limits.max_codewords,
        }
        .into());
    }
    let params = ThresholdParams {
        n: book.len() as u64,
        k,
        t: t as u64,
        m: book.block_length(),
        h_squared,
        epsilon,
    };
    Ok(ThresholdGraph {
        params,
        codebook: book,
        faults: Faults::default(),
    })
}

/// Outcome of the exhaustive covering check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoveringReport {
    pub tuples_checked: u64,
    pub passed: bool,
    /// First failing `(a_1..a_k, j)`, codeword indices per part.
    pub counterexample: Option<(Vec<usize>, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub x_size: usize,
    pub bad_index_count: usize,
    pub bad_index_threshold: usize,
    pub exceeds_h: bool,
    pub implication_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub max_subset_size: usize,
    pub subsets_checked: u64,
    pub b_choices_checked: u64,
    pub max_bad_index_count: usize,
    pub violation: Option<(Vec<AVertex>, Vec<BVertex>)>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CollisionReport {
    pub holds: bool,
    /// `Σ |L_{x,x'}|` over unordered pairs of distinct vertices of `X`.
    pub agreement_sum: u64,
    /// Pairs whose agreement exceeds `(1-δ)m`, with the agreement size.
    pub flagged_pairs: Vec<(AVertex, AVertex, usize)>,
}

impl ThresholdGraph {
    pub fn params(&self) -> &ThresholdParams {
        &self.params
    }

    pub fn codebook(&self) -> &Codebook {
        &self.codebook
    }

    pub fn faults(&self) -> &Faults {
        &self.faults
    }

    /// Size of the alphabet `Σ`.
    pub fn alphabet(&self) -> u64 {
        self.codebook.alphabet()
    }

    pub fn with_faults(mut self, faults: Faults) -> Self {
        self.faults = faults;
        self
    }

    /// Symbol `b_i` of a B-vertex index.
    pub fn b_symbol(&self, index: u64, i: usize) -> u32 {
        let q = self.alphabet();
        ((index / q.pow(i as u32)) % q) as u32
    }

    /// The vector `b ∈ Σ^k` of a B-vertex index.
    pub fn b_vector(&self, index: u64) -> Vec<u32> {
        (0..self.params.k).map(|i| self.b_symbol(index, i)).collect()
    }

    /// Index of the B-vertex holding the vector `b`.
    pub fn b_index(&self, vector: &[u32]) -> u64 {
        let q = self.alphabet();
        vector.iter().rev().fold(0u64, |acc, &s| acc * q + s as u64)
    }

    fn check_a(&self, a: AVertex) -> Result<(), ThresholdError> {
        if a.part >= self.params.k || a.codeword >= self.codebook.len() {
            return Err(ThresholdError::AVertexOutOfRange {
                part: a.part,
                codeword: a.codeword,
                k: self.params.k,
                n: self.codebook.len(),
            });
        }
        Ok(())
    }

    fn check_b(&self, b: BVertex) -> Result<(), ThresholdError> {
        if b.part >= self.params.m || b.index >= self.params.t {
            return Err(ThresholdError::BVertexOutOfRange {
                part: b.part,
                index: b.index,
                m: self.params.m,
                t: self.params.t,
            });
        }
        Ok(())
    }

    /// `(a, b) ∈ E` iff `C(x)_j = b_i`, minus any injected faults.
    pub fn adjacency(&self, a: AVertex, b: BVertex) -> Result<bool, ThresholdError> {
        self.check_a(a)?;
        self.check_b(b)?;
        Ok(self.adjacent_unchecked(a, b))
    }

    pub(crate) fn adjacent_unchecked(&self, a: AVertex, b: BVertex) -> bool {
        let linked = self.codebook.codeword(a.codeword)[b.part] == self.b_symbol(b.index, a.part);
        if !linked || self.faults.is_empty() {
            return linked;
        }
        !self.faults.removed_b.contains(&b) && !self.faults.removed_edges.contains(&(a, b))
    }

    /// `b = ((a_1)_j, …, (a_k)_j)` for codeword indices `tuple[i] ∈ A_i`.
    pub fn common_neighbor(&self, tuple: &[usize], j: usize) -> Result<BVertex, ThresholdError> {
        if tuple.len() != self.params.k {
            return Err(ThresholdError::ChoiceCount {
                expected: self.params.k,
                found: tuple.len(),
            });
        }
        for (part, &codeword) in tuple.iter().enumerate() {
            self.check_a(AVertex { part, codeword })?;
        }
        self.check_b(BVertex { part: j, index: 0 })?;
        let symbols: Vec<u32> = tuple.iter().map(|&x| self.codebook.codeword(x)[j]).collect();
        Ok(BVertex {
            part: j,
            index: self.b_index(&symbols),
        })
    }

    /// Exhaustively checks that every tuple `(a_1..a_k)` has a common
    /// neighbour in every `B_j`. The only candidate is the vertex returned by
    /// [`Self::common_neighbor`], since `b_i` is forced to be `(a_i)_j`.
    pub fn check_covering_property(&self, limits: &Limits) -> Result<CoveringReport, ThresholdError> {
        let n = self.codebook.len();
        let k = self.params.k;
        let count = (n as u128)
            .checked_pow(k as u32)
            .and_then(|c| c.checked_mul(self.params.m as u128))
            .unwrap_or(u128::MAX);
        if count > limits.max_sweep as u128 {
            return Err(ThresholdError::BudgetExceeded {
                what: "covering sweep n^k·m",
                count,
                limit: limits.max_sweep,
            });
        }
        let mut checked = 0u64;
        for tuple in (0..k).map(|_| 0..n).multi_cartesian_product() {
            for j in 0..self.params.m {
                checked += 1;
                let b = self.common_neighbor(&tuple, j)?;
                let ok = tuple.iter().enumerate().all(|(part, &codeword)| {
                    self.adjacent_unchecked(AVertex { part, codeword }, b)
                });
                if !ok {
                    return Ok(CoveringReport {
                        tuples_checked: checked,
                        passed: false,
                        counterexample: Some((tuple, j)),
                    });
                }
            }
        }
        Ok(CoveringReport {
            tuples_checked: checked,
            passed: true,
            counterexample: None,
        })
    }

    fn check_x(&self, x: &[AVertex]) -> Result<(), ThresholdError> {
        let mut seen = BTreeSet::new();
        for &a in x {
            self.check_a(a)?;
            if !seen.insert(a) {
                return Err(ThresholdError::DuplicateVertex(a.part, a.codeword));
            }
        }
        Ok(())
    }

    fn report(&self, size: usize, bad: usize) -> WitnessReport {
        let threshold = self.params.bad_index_threshold();
        let exceeds_h = self.params.exceeds_h(size);
        WitnessReport {
            x_size: size,
            bad_index_count: bad,
            bad_index_threshold: threshold,
            exceeds_h,
            implication_holds: bad < threshold || exceeds_h,
        }
    }

    /// Evaluates the threshold implication for one `X` and one choice
    /// `b_1 ∈ B_1, …, b_m ∈ B_m`.
    pub fn check_threshold_witness(&self, x: &[AVertex], choice: &[BVertex]) -> Result<WitnessReport, ThresholdError> {
        self.check_x(x)?;
        if choice.len() != self.params.m {
            return Err(ThresholdError::ChoiceCount {
                expected: self.params.m,
                found: choice.len(),
            });
        }
        for (j, &b) in choice.iter().enumerate() {
            self.check_b(b)?;
            if b.part != j {
                return Err(ThresholdError::ChoiceOutOfOrder {
                    expected: j,
                    found: b.part,
                });
            }
        }
        let k = self.params.k;
        let bad = choice
            .iter()
            .filter(|&&b| x.iter().filter(|&&a| self.adjacent_unchecked(a, b)).count() > k)
            .count();
        Ok(self.report(x.len(), bad))
    }

    /// The largest bad-index count over all b-choices for a fixed `X`:
    /// the number of parts `B_j` holding some vertex with `≥ k+1`
    /// neighbours in `X`.
    pub fn max_bad_index_count(&self, x: &[AVertex]) -> Result<usize, ThresholdError> {
        self.check_x(x)?;
        Ok((0..self.params.m)
            .filter(|&j| self.neighbor_counts(x, j).iter().any(|&c| c > self.params.k))
            .count())
    }

    /// `|N(b) ∩ X|` for every `b ∈ B_j`.
    fn neighbor_counts(&self, x: &[AVertex], j: usize) -> Vec<usize> {
        let mut counts = vec![0usize; self.params.t as usize];
        for (index, count) in counts.iter_mut().enumerate() {
            let b = BVertex {
                part: j,
                index: index as u64,
            };
            *count = x.iter().filter(|&&a| self.adjacent_unchecked(a, b)).count();
        }
        counts
    }

    /// Checks the threshold implication for every `X ⊆ A` with
    /// `|X| ≤ max_size` (default `⌊h⌋`) against every one of the `t^m`
    /// b-choices, enumerated one by one.
    pub fn sweep_threshold_property(
        &self,
        max_size: Option<usize>,
        limits: &Limits,
    ) -> Result<SweepReport, ThresholdError> {
        let max_size = max_size.unwrap_or(self.params.h_floor() as usize);
        let a_count = self.params.k * self.codebook.len();
        let subsets: u128 = (0..=max_size.min(a_count))
            .map(|s| binomial(a_count as u128, s as u128))
            .fold(0u128, u128::saturating_add);
        let choices = (self.params.t as u128)
            .checked_pow(self.params.m as u32)
            .unwrap_or(u128::MAX);
        let total = subsets.saturating_mul(choices);
        if total > limits.max_sweep as u128 {
            return Err(ThresholdError::BudgetExceeded {
                what: "threshold sweep",
                count: total,
                limit: limits.max_sweep,
            });
        }
        let all: Vec<AVertex> = (0..self.params.k)
            .flat_map(|part| (0..self.codebook.len()).map(move |codeword| AVertex { part, codeword }))
            .collect();
        let m = self.params.m;
        let t = self.params.t as usize;
        let k = self.params.k;
        let mut report = SweepReport {
            max_subset_size: max_size,
            subsets_checked: 0,
            b_choices_checked: 0,
            max_bad_index_count: 0,
            violation: None,
        };
        for size in 0..=max_size.min(a_count) {
            for x in all.iter().copied().combinations(size) {
                report.subsets_checked += 1;
                let counts: Vec<Vec<usize>> = (0..m).map(|j| self.neighbor_counts(&x, j)).collect();
                let mut digits = vec![0usize; m];
                loop {
                    report.b_choices_checked += 1;
                    let bad = (0..m).filter(|&j| counts[j][digits[j]] > k).count();
                    report.max_bad_index_count = report.max_bad_index_count.max(bad);
                    if !self.report(size, bad).implication_holds && report.violation.is_none() {
                        let choice = digits
                            .iter()
                            .enumerate()
                            .map(|(part, &d)| BVertex { part, index: d as u64 })
                            .collect();
                        report.violation = Some((x.clone(), choice));
                    }
                    let mut j = 0;
                    while j < m {
                        digits[j] += 1;
                        if digits[j] < t {
                            break;
                        }
                        digits[j] = 0;
                        j += 1;
                    }
                    if j == m {
                        break;
                    }
                }
            }
        }
        Ok(report)
    }

    /// Agreement sets `L_{x,x'}` over pairs of distinct vertices of `X`,
    /// compared against the `(1-δ)m` bound. Two vertices backed by the same
    /// codeword in different parts agree everywhere and are flagged.
    pub fn collision_bound_check(&self, x: &[AVertex]) -> Result<CollisionReport, ThresholdError> {
        self.check_x(x)?;
        let m = self.params.m as u128;
        let delta = self.codebook.declared_distance();
        let bound = (Rational::one() - delta) * Rational::from_integer(m);
        let mut report = CollisionReport {
            holds: true,
            agreement_sum: 0,
            flagged_pairs: Vec::new(),
        };
        for (i, &a) in x.iter().enumerate() {
            for &b in &x[i + 1..] {
                let agreement = self
                    .codebook
                    .codeword(a.codeword)
                    .iter()
                    .zip(self.codebook.codeword(b.codeword))
                    .filter(|(s, t)| s == t)
                    .count();
                report.agreement_sum += agreement as u64;
                if Rational::from_integer(agreement as u128) > bound {
                    report.holds = false;
                    report.flagged_pairs.push((a, b, agreement));
                }
            }
        }
        Ok(report)
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}
