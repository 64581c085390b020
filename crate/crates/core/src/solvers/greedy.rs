use super::{Bits, SolverError};
use crate::instance::{SetCoverInstance, Solution};

/// Classic greedy: repeatedly take the set with the most newly covered
/// elements per unit weight, ties to the lowest set id. Ratios are compared
/// by cross-multiplication, so there is no rounding.
pub fn greedy(instance: &SetCoverInstance) -> Result<Solution, SolverError> {
    let uncoverable = instance.uncoverable_elements();
    if !uncoverable.is_empty() {
        return Err(SolverError::Uncoverable(uncoverable));
    }
    let bits = Bits::new(instance);
    let sets = instance.sets();
    let mut covered = bits.empty();
    let mut chosen = Vec::new();
    while bits.first_uncovered(&covered).is_some() {
        let mut best: Option<(usize, usize)> = None;
        for (index, set) in sets.iter().enumerate() {
            let gain = bits.gain(index, &covered);
            if gain == 0 {
                continue;
            }
            let better = match best {
                None => true,
                Some((b, b_gain)) => {
                    let lhs = gain as u128 * sets[b].weight as u128;
                    let rhs = b_gain as u128 * set.weight as u128;
                    lhs > rhs || (lhs == rhs && set.id < sets[b].id)
                }
            };
            if better {
                best = Some((index, gain));
            }
        }
        let (index, _) = best.expect("an uncovered element lies in some set");
        bits.add(index, &mut covered);
        chosen.push(index);
    }
    Ok(instance.solution_from_indices(chosen))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{verify_cover, WeightedSet};
    use crate::solvers::{exact_weighted_opt, SolverBudget};
    use proptest::prelude::*;

    /// Two rows of `2^L - 1` elements each, plus blocks of size `2^{i+1}`
    /// straddling both rows. OPT takes the two rows; greedy takes the `L`
    /// blocks, largest first.
    fn log_trap(levels: u32) -> SetCoverInstance {
        let row = (1usize << levels) - 1;
        let top: Vec<usize> = (0..row).collect();
        let bottom: Vec<usize> = (row..2 * row).collect();
        let mut sets = vec![top, bottom];
        let mut start = 0;
        for i in (0..levels).rev() {
            let half = 1usize << i;
            let block: Vec<usize> = (start..start + half).chain(row + start..row + start + half).collect();
            sets.push(block);
            start += half;
        }
        SetCoverInstance::unweighted(2 * row, sets, None).unwrap()
    }

    #[test]
    fn singleton_partition_is_solved_exactly() {
        let inst = SetCoverInstance::unweighted(4, (0..4).map(|e| vec![e]).collect(), None).unwrap();
        assert_eq!(greedy(&inst).unwrap().total_weight(), 4);
    }

    #[test]
    fn ties_go_to_lowest_id() {
        let sets = vec![
            WeightedSet::new(9, 1, vec![0, 1]),
            WeightedSet::new(3, 1, vec![0, 1]),
        ];
        let inst = SetCoverInstance::new(2, sets, None).unwrap();
        assert_eq!(greedy(&inst).unwrap().chosen(), &[crate::SetId(3)]);
    }

    #[test]
    fn weight_changes_the_choice() {
        // per-unit gain 3/4 versus 2/1
        let sets = vec![
            WeightedSet::new(0, 4, vec![0, 1, 2]),
            WeightedSet::new(1, 1, vec![0, 1]),
            WeightedSet::new(2, 1, vec![2]),
        ];
        let inst = SetCoverInstance::new(3, sets, None).unwrap();
        let sol = greedy(&inst).unwrap();
        assert_eq!(sol.total_weight(), 2);
    }

    #[test]
    fn uncoverable_is_an_error() {
        let inst = SetCoverInstance::unweighted(2, vec![vec![0]], None).unwrap();
        assert_eq!(greedy(&inst), Err(SolverError::Uncoverable(vec![1])));
    }

    #[test]
    fn log_trap_ratio_grows_with_universe() {
        let mut previous = 0.0;
        for levels in 2..=6 {
            let inst = log_trap(levels);
            let g = greedy(&inst).unwrap().total_weight();
            let opt = exact_weighted_opt(&inst, &SolverBudget::default()).optimum().unwrap();
            assert_eq!(opt, 2);
            assert_eq!(g, levels as u64);
            let ratio = g as f64 / opt as f64;
            let log_u = (inst.universe_size() as f64).log2();
            assert!(ratio > previous);
            // ratio L/2 against log2|U| = L + 1 - o(1)
            assert!((ratio - log_u / 2.0).abs() < 1.0);
            previous = ratio;
        }
    }

    proptest! {
        #[test]
        fn greedy_covers_and_is_never_below_opt(
            sets in prop::collection::vec((1u64..4, prop::collection::btree_set(0usize..6, 1..4)), 1..9)
        ) {
            let sets: Vec<WeightedSet> = sets
                .into_iter()
                .enumerate()
                .map(|(i, (w, e))| WeightedSet::new(i as u64, w, e.into_iter().collect()))
                .collect();
            let inst = SetCoverInstance::new(6, sets, None).unwrap();
            match greedy(&inst) {
                Ok(sol) => {
                    prop_assert!(verify_cover(&inst, &sol).unwrap().covered);
                    let opt = exact_weighted_opt(&inst, &SolverBudget::default()).optimum().unwrap();
                    prop_assert!(sol.total_weight() >= opt);
                }
                Err(SolverError::Uncoverable(missing)) => prop_assert!(!missing.is_empty()),
                Err(other) => prop_assert!(false, "unexpected error {other}"),
            }
        }
    }
}
