use itertools::Itertools;
use num_bigint::BigUint;
use serde::Serialize;

use super::{Bits, Meter, SolverBudget, SolverError};
use crate::instance::{SetCoverInstance, SetId, Solution};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RoundTrace {
    pub picked: Vec<SetId>,
    pub uncovered_after: usize,
    /// `uncovered_after ≤ (T/k)^i · |U|` for this round `i`.
    pub within_bound: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockGreedyReport {
    pub k: usize,
    pub t: usize,
    /// `⌈log |U| / (log k − log T)⌉`, at least 1.
    pub rounds_planned: usize,
    pub size_bound: usize,
    pub rounds: Vec<RoundTrace>,
    pub covered: bool,
    pub solution: Solution,
}

/// Least `r ≥ 1` with `(k/T)^r ≥ |U|`, computed in exact integers. This is
/// `⌈log₂|U| / (log₂k − log₂T)⌉` without floating point.
pub fn round_count(universe: usize, k: usize, t: usize) -> usize {
    let universe = BigUint::from(universe);
    let mut lhs = BigUint::from(k);
    let mut rhs = BigUint::from(t) * &universe;
    let mut r = 1;
    while lhs < rhs {
        lhs *= k;
        rhs *= t;
        r += 1;
    }
    r
}

/// Each round adds the `k − T` sets that together cover the most uncovered
/// elements (ties to the lexicographically first combination). Stops when
/// the universe is covered or after the planned rounds.
pub fn block_greedy(
    instance: &SetCoverInstance,
    k: usize,
    t: usize,
    budget: &SolverBudget,
) -> Result<BlockGreedyReport, SolverError> {
    if t < 2 || t >= k {
        return Err(SolverError::InvalidBlockParameters { k, t });
    }
    if !instance.is_unweighted() {
        return Err(SolverError::Weighted);
    }
    let bits = Bits::new(instance);
    let universe = instance.universe_size();
    let rounds_planned = round_count(universe, k, t);
    let width = (k - t).min(instance.len());
    let mut meter = Meter::new(budget);
    let mut covered = bits.empty();
    let mut chosen: Vec<usize> = Vec::new();
    let mut rounds = Vec::new();
    let mut k_pow = BigUint::from(1u32);
    let mut t_pow = BigUint::from(1u32);
    for _ in 0..rounds_planned {
        if bits.first_uncovered(&covered).is_none() {
            break;
        }
        let mut best: Option<(usize, Vec<usize>)> = None;
        for combo in (0..instance.len()).combinations(width) {
            if !meter.tick() {
                return Err(SolverError::BudgetExhausted { nodes: meter.nodes() });
            }
            let mut union = covered.clone();
            for &s in &combo {
                bits.add(s, &mut union);
            }
            let gain = bits.uncovered_count(&covered) - bits.uncovered_count(&union);
            if best.as_ref().is_none_or(|(g, _)| gain > *g) {
                best = Some((gain, combo));
            }
        }
        let (_, combo) = best.expect("at least one combination");
        for &s in &combo {
            bits.add(s, &mut covered);
        }
        chosen.extend(&combo);
        k_pow *= k;
        t_pow *= t;
        let uncovered_after = bits.uncovered_count(&covered);
        rounds.push(RoundTrace {
            picked: combo.iter().map(|&s| instance.sets()[s].id).collect(),
            uncovered_after,
            within_bound: BigUint::from(uncovered_after) * &k_pow <= &t_pow * BigUint::from(universe),
        });
    }
    Ok(BlockGreedyReport {
        k,
        t,
        rounds_planned,
        size_bound: rounds_planned * (k - t),
        covered: bits.first_uncovered(&covered).is_none(),
        solution: instance.solution_from_indices(chosen),
        rounds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::verify_cover;
    use proptest::prelude::*;

    /// Least r with (k/T)^r ≥ u, by floating point, away from ties.
    fn float_rounds(u: usize, k: usize, t: usize) -> usize {
        let r = ((u as f64).log2() / ((k as f64).log2() - (t as f64).log2())).ceil() as usize;
        r.max(1)
    }

    #[test]
    fn round_counts() {
        assert_eq!(round_count(16, 4, 2), 4);
        assert_eq!(round_count(1, 4, 2), 1);
        assert_eq!(round_count(64, 6, 5), float_rounds(64, 6, 5));
        assert_eq!(round_count(10, 3, 2), float_rounds(10, 3, 2));
        for u in [3, 7, 30, 50, 63] {
            for (k, t) in [(3, 2), (5, 2), (6, 4), (6, 5)] {
                assert_eq!(round_count(u, k, t), float_rounds(u, k, t), "u={u} k={k} t={t}");
            }
        }
    }

    #[test]
    fn planted_four_cover_of_sixteen() {
        // four quarters plus distractors; OPT = 4
        let mut sets: Vec<Vec<usize>> = (0..4).map(|q| (4 * q..4 * q + 4).collect()).collect();
        sets.push(vec![0, 5, 10, 15]);
        sets.push(vec![1, 2, 3, 4, 5]);
        sets.push(vec![6, 7]);
        let inst = SetCoverInstance::unweighted(16, sets, None).unwrap();
        let report = block_greedy(&inst, 4, 2, &SolverBudget::default()).unwrap();
        assert_eq!(report.rounds_planned, 4);
        assert!(report.covered);
        assert!(report.solution.len() <= 8);
        assert!(verify_cover(&inst, &report.solution).unwrap().covered);
        assert!(report.rounds.iter().all(|r| r.within_bound));
    }

    #[test]
    fn one_set_per_round_when_t_is_k_minus_one() {
        let inst = SetCoverInstance::unweighted(6, vec![vec![0, 1], vec![2, 3], vec![4, 5]], None).unwrap();
        let report = block_greedy(&inst, 3, 2, &SolverBudget::default()).unwrap();
        assert!(report.rounds.iter().all(|r| r.picked.len() == 1));
        assert_eq!(report.rounds_planned, round_count(6, 3, 2));
        assert!(report.covered);
    }

    #[test]
    fn rejects_bad_parameters() {
        let inst = SetCoverInstance::unweighted(1, vec![vec![0]], None).unwrap();
        let budget = SolverBudget::default();
        assert!(block_greedy(&inst, 3, 3, &budget).is_err());
        assert!(block_greedy(&inst, 3, 1, &budget).is_err());
        let weighted = SetCoverInstance::new(1, vec![crate::WeightedSet::new(0, 2, vec![0])], None).unwrap();
        assert_eq!(block_greedy(&weighted, 3, 2, &budget), Err(SolverError::Weighted));
    }

    #[test]
    fn reports_partial_cover_without_a_k_cover() {
        let inst = SetCoverInstance::unweighted(8, (0..8).map(|e| vec![e]).collect(), None).unwrap();
        let report = block_greedy(&inst, 3, 2, &SolverBudget::default()).unwrap();
        assert!(!report.covered);
        assert_eq!(report.solution.len(), report.rounds_planned);
    }

    proptest! {
        #[test]
        fn planted_covers_are_completed_within_the_bound(
            k in 3usize..6,
            extra in prop::collection::vec(prop::collection::btree_set(0usize..24, 1..6), 0..6),
            assignment in prop::collection::vec(0usize..5, 24),
            use_k_minus_one in any::<bool>(),
        ) {
            let t = if use_k_minus_one { k - 1 } else { 2 };
            let mut sets: Vec<Vec<usize>> = vec![Vec::new(); k];
            for (e, &a) in assignment.iter().enumerate() {
                sets[a % k].push(e);
            }
            sets.extend(extra.into_iter().map(|s| s.into_iter().collect()));
            let inst = SetCoverInstance::unweighted(24, sets, None).unwrap();
            let report = block_greedy(&inst, k, t, &SolverBudget::default()).unwrap();
            prop_assert!(report.covered);
            prop_assert!(report.solution.len() <= report.size_bound);
            prop_assert!(verify_cover(&inst, &report.solution).unwrap().covered);
            prop_assert!(report.rounds.iter().all(|r| r.within_bound));
        }
    }
}
