use serde::Serialize;

use super::{greedy, Bits, Meter, SolverBudget};
use crate::instance::{SetCoverInstance, Solution};

/// Result of [`exact_weighted_opt`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ExactOutcome {
    Optimal { weight: u64, witness: Solution },
    /// The budget ran out; no cover of weight `<= no_cover_at_most` exists.
    LowerBound {
        no_cover_at_most: u64,
        best_known: Option<Solution>,
    },
    /// The budget ran out before any bound was fully searched.
    Unknown { best_known: Option<Solution> },
    Infeasible { uncovered: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExactReport {
    pub outcome: ExactOutcome,
    pub nodes: u64,
    pub elapsed_ms: u128,
}

impl ExactReport {
    pub fn optimum(&self) -> Option<u64> {
        match self.outcome {
            ExactOutcome::Optimal { weight, .. } => Some(weight),
            _ => None,
        }
    }
}

/// Result of [`certify_no_cover_at_most`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum BoundCertificate {
    /// The whole search space below the bound was refuted.
    NoCoverAtMost { bound: u64, nodes: u64 },
    CoverFound { solution: Solution, nodes: u64 },
    Exhausted { nodes: u64 },
}

impl BoundCertificate {
    pub fn certified(&self) -> bool {
        matches!(self, BoundCertificate::NoCoverAtMost { .. })
    }
}

enum Step {
    Found,
    NotFound,
    Exhausted,
}

/// Branch and bound over "which set covers the lowest uncovered element".
/// In the `i`-th branch the earlier candidates are forbidden, so every cover
/// is reached along exactly one path.
struct Search<'a> {
    bits: &'a Bits,
    weights: Vec<u64>,
    /// For each element, the sets containing it by (weight, index).
    containing: Vec<Vec<usize>>,
    forbidden: Vec<bool>,
    chosen: Vec<usize>,
    /// Elements no two of which share a set, with their cheapest set
    /// weight. Every completion pays at least the sum over the uncovered
    /// ones.
    independent: Vec<(usize, u64)>,
    meter: Meter,
}

impl<'a> Search<'a> {
    fn new(instance: &SetCoverInstance, bits: &'a Bits, budget: &SolverBudget) -> Self {
        let weights: Vec<u64> = instance.sets().iter().map(|s| s.weight).collect();
        let mut containing = vec![Vec::new(); instance.universe_size()];
        for (index, set) in instance.sets().iter().enumerate() {
            for &e in &set.elements {
                containing[e].push(index);
            }
        }
        for list in &mut containing {
            list.sort_by_key(|&s| (weights[s], s));
        }
        let mut used = vec![false; weights.len()];
        let mut independent = Vec::new();
        for (e, list) in containing.iter().enumerate() {
            if !list.is_empty() && list.iter().all(|&s| !used[s]) {
                independent.push((e, weights[list[0]]));
                for &s in list {
                    used[s] = true;
                }
            }
        }
        Search {
            bits,
            forbidden: vec![false; weights.len()],
            weights,
            containing,
            chosen: Vec::new(),
            independent,
            meter: Meter::new(budget),
        }
    }

    /// Looks for a cover of weight `<= bound`. `next` collects the least
    /// pruned cost above the bound.
    fn dfs(&mut self, covered: &[u64], cost: u64, bound: u64, next: &mut u64) -> Step {
        if !self.meter.tick() {
            return Step::Exhausted;
        }
        let Some(e) = self.bits.first_uncovered(covered) else {
            return Step::Found;
        };
        let lower = cost
            + self
                .independent
                .iter()
                .filter(|&&(u, _)| covered[u / 64] >> (u % 64) & 1 == 0)
                .map(|&(_, w)| w)
                .sum::<u64>();
        if lower > bound {
            *next = (*next).min(lower);
            return Step::NotFound;
        }
        let mut forbidden_here = Vec::new();
        let mut outcome = Step::NotFound;
        for position in 0..self.containing[e].len() {
            let s = self.containing[e][position];
            if self.forbidden[s] {
                continue;
            }
            let f = cost + self.weights[s];
            if f > bound {
                // candidates are sorted by weight; the rest cost at least f
                *next = (*next).min(f);
                break;
            }
            let mut child = covered.to_vec();
            self.bits.add(s, &mut child);
            self.chosen.push(s);
            match self.dfs(&child, f, bound, next) {
                Step::Found => return Step::Found,
                Step::Exhausted => {
                    self.chosen.pop();
                    outcome = Step::Exhausted;
                    break;
                }
                Step::NotFound => {}
            }
            self.chosen.pop();
            self.forbidden[s] = true;
            forbidden_here.push(s);
        }
        for s in forbidden_here {
            self.forbidden[s] = false;
        }
        outcome
    }

    fn run(&mut self, bound: u64) -> (Step, u64) {
        let mut next = u64::MAX;
        let root = self.bits.empty();
        self.chosen.clear();
        let step = self.dfs(&root, 0, bound, &mut next);
        (step, next)
    }
}

/// Minimum total weight of a cover, by iterative deepening on the weight
/// bound. Each failed round certifies that no cover lies below the next
/// bound; the greedy weight ends the deepening early.
pub fn exact_weighted_opt(instance: &SetCoverInstance, budget: &SolverBudget) -> ExactReport {
    let uncovered = instance.uncoverable_elements();
    if !uncovered.is_empty() {
        return ExactReport {
            outcome: ExactOutcome::Infeasible { uncovered },
            nodes: 0,
            elapsed_ms: 0,
        };
    }
    let upper = greedy(instance).expect("every element is coverable");
    let bits = Bits::new(instance);
    let mut search = Search::new(instance, &bits, budget);
    // every cover pays at least the cheapest set of each element, and of
    // each independent element separately
    let single = search
        .containing
        .iter()
        .map(|list| search.weights[list[0]])
        .max()
        .unwrap_or(0);
    let packed: u64 = search.independent.iter().map(|&(_, w)| w).sum();
    let mut bound = single.max(packed);
    let mut certified: Option<u64> = None;
    let outcome = loop {
        if bound >= upper.total_weight() {
            break ExactOutcome::Optimal {
                weight: upper.total_weight(),
                witness: upper.clone(),
            };
        }
        if bound > budget.max_weight_bound {
            break stopped(certified, &upper);
        }
        match search.run(bound) {
            (Step::Found, _) => {
                let witness = instance.solution_from_indices(search.chosen.iter().copied());
                break ExactOutcome::Optimal {
                    weight: witness.total_weight(),
                    witness,
                };
            }
            (Step::Exhausted, _) => break stopped(certified, &upper),
            (Step::NotFound, next) => {
                certified = Some(next - 1);
                bound = next;
            }
        }
    };
    ExactReport {
        outcome,
        nodes: search.meter.nodes(),
        elapsed_ms: search.meter.elapsed().as_millis(),
    }
}

fn stopped(certified: Option<u64>, upper: &Solution) -> ExactOutcome {
    let best_known = Some(upper.clone());
    match certified {
        Some(no_cover_at_most) => ExactOutcome::LowerBound {
            no_cover_at_most,
            best_known,
        },
        None => ExactOutcome::Unknown { best_known },
    }
}

/// Decides whether some cover has weight `<= bound`, exploring only the
/// search space under that bound.
pub fn certify_no_cover_at_most(instance: &SetCoverInstance, bound: u64, budget: &SolverBudget) -> BoundCertificate {
    if !instance.uncoverable_elements().is_empty() {
        return BoundCertificate::NoCoverAtMost { bound, nodes: 0 };
    }
    if bound > budget.max_weight_bound {
        return BoundCertificate::Exhausted { nodes: 0 };
    }
    let bits = Bits::new(instance);
    let mut search = Search::new(instance, &bits, budget);
    let (step, _) = search.run(bound);
    let nodes = search.meter.nodes();
    match step {
        Step::Found => BoundCertificate::CoverFound {
            solution: instance.solution_from_indices(search.chosen.iter().copied()),
            nodes,
        },
        Step::NotFound => BoundCertificate::NoCoverAtMost { bound, nodes },
        Step::Exhausted => BoundCertificate::Exhausted { nodes },
    }
}
