use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::{checked_power, ReductionError};
use crate::instance::{verify_cover, Labels, SetCoverInstance, SetId, Solution, WeightedSet};
use crate::limits::Limits;
use crate::math::format_rational;
use crate::threshold::{AVertex, BVertex, ThresholdGraph};

/// Index arithmetic of a composed instance.
///
/// Sets: A-vertex `(i, x)` has id `i·n + x`, B-vertex `(j, b)` has id
/// `n·k + j·t + b`. Elements: `(u_1..u_c, b_1..b_c, j)` has id
/// `(j·t^c + bidx)·|U|^c + uidx`, where `bidx` and `uidx` read the tuples
/// big-endian (first coordinate most significant).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ComposedLayout {
    pub n: u64,
    pub k: usize,
    pub t: u64,
    pub m: usize,
    pub c: usize,
    pub universe: usize,
    pub source_sets: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SetRole {
    A(AVertex),
    B(BVertex),
}

impl ComposedLayout {
    pub fn set_count(&self) -> u128 {
        self.n as u128 * self.k as u128 + self.t as u128 * self.m as u128
    }

    /// `m·(|U|·t)^c`, saturating.
    pub fn element_count(&self) -> u128 {
        checked_power(self.universe as u64 * self.t, self.c)
            .and_then(|p| p.checked_mul(self.m as u128))
            .unwrap_or(u128::MAX)
    }

    fn t_pow_c(&self) -> u64 {
        self.t.pow(self.c as u32)
    }

    fn u_pow_c(&self) -> u64 {
        (self.universe as u64).pow(self.c as u32)
    }

    pub fn a_set_id(&self, a: AVertex) -> SetId {
        SetId(a.part as u64 * self.n + a.codeword as u64)
    }

    pub fn b_set_id(&self, b: BVertex) -> SetId {
        SetId(self.n * self.k as u64 + b.part as u64 * self.t + b.index)
    }

    pub fn role(&self, id: SetId) -> Option<SetRole> {
        let a_total = self.n * self.k as u64;
        if id.0 < a_total {
            return Some(SetRole::A(AVertex {
                part: (id.0 / self.n) as usize,
                codeword: (id.0 % self.n) as usize,
            }));
        }
        let rest = id.0 - a_total;
        (rest < self.t * self.m as u64).then(|| {
            SetRole::B(BVertex {
                part: (rest / self.t) as usize,
                index: rest % self.t,
            })
        })
    }

    pub fn element_id(&self, block: usize, bs: &[u64], us: &[usize]) -> usize {
        let bidx = bs.iter().fold(0u64, |acc, &b| acc * self.t + b);
        let uidx = us.iter().fold(0u64, |acc, &u| acc * self.universe as u64 + u as u64);
        ((block as u64 * self.t_pow_c() + bidx) * self.u_pow_c() + uidx) as usize
    }

    /// Inverse of [`Self::element_id`]: `(j, b_1..b_c, u_1..u_c)`.
    pub fn decode_element(&self, id: usize) -> (usize, Vec<u64>, Vec<usize>) {
        let id = id as u64;
        let u_pow = self.u_pow_c();
        let t_pow = self.t_pow_c();
        let mut uidx = id % u_pow;
        let mut bidx = (id / u_pow) % t_pow;
        let block = (id / u_pow / t_pow) as usize;
        let mut us = vec![0usize; self.c];
        let mut bs = vec![0u64; self.c];
        for slot in (0..self.c).rev() {
            us[slot] = (uidx % self.universe as u64) as usize;
            uidx /= self.universe as u64;
            bs[slot] = bidx % self.t;
            bidx /= self.t;
        }
        (block, bs, us)
    }
}

/// Output of [`compose`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Composed {
    pub instance: SetCoverInstance,
    pub layout: ComposedLayout,
}

/// Per-block classification of a candidate solution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum BlockOutcome {
    /// At least `c+1` distinct vertices of `B_j` are picked.
    ManyB,
    /// Some `b` that an uncovered tuple can use has `≥ k+1` picked
    /// A-neighbours.
    HeavyNeighbor { b: BVertex, picked_a_neighbors: usize },
    /// Neither case holds.
    Violated,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockDiagnostic {
    pub block: usize,
    pub picked_b: usize,
    pub outcome: BlockOutcome,
}

/// Big-endian digit vectors of `0..base^len`.
fn tuples(base: u64, len: usize) -> Vec<Vec<u64>> {
    let count = base.pow(len as u32);
    (0..count)
        .map(|mut index| {
            let mut digits = vec![0u64; len];
            for slot in digits.iter_mut().rev() {
                *slot = index % base;
                index /= base;
            }
            digits
        })
        .collect()
}

/// Composes an unweighted instance `Γ` with the threshold graph `T`.
///
/// `S' = A ∪ B` with `w(a) = m/k` and `w(b) = 1`. The element
/// `(u_1..u_c, b_1..b_c, j)` is covered by `a` iff some `ℓ` has
/// `(a, b_ℓ) ∈ E_T` and `u_ℓ ∈ s(a)`, and by `b` iff `b ∈ B_j` differs from
/// every `b_ℓ`. A-vertices beyond `|S|` stand for empty dummy sets.
pub fn compose(
    gamma: &SetCoverInstance,
    graph: &ThresholdGraph,
    c: usize,
    limits: &Limits,
) -> Result<Composed, ReductionError> {
    if !gamma.is_unweighted() {
        return Err(ReductionError::Weighted(gamma.distinct_weights().into_iter().collect()));
    }
    if c == 0 {
        return Err(ReductionError::ZeroArity);
    }
    let params = graph.params();
    if gamma.len() as u64 > params.n {
        return Err(ReductionError::PartSize {
            sets: gamma.len(),
            n: params.n,
        });
    }
    let (k, m) = (params.k, params.m);
    if m % k != 0 {
        return Err(ReductionError::Divisibility {
            k: k as u64,
            m: m as u64,
        });
    }
    let layout = ComposedLayout {
        n: params.n,
        k,
        t: params.t,
        m,
        c,
        universe: gamma.universe_size(),
        source_sets: gamma.len(),
    };
    let elements = layout.element_count();
    if elements > limits.max_universe as u128 {
        return Err(ReductionError::Budget {
            what: "composed universe m·(|U|·t)^c",
            count: elements,
            limit: limits.max_universe,
        });
    }
    let b_tuples = tuples(layout.t, c);
    let u_tuples = tuples(layout.universe as u64, c);
    let heavy = (m / k) as u64;
    let mut incidences = 0u128;
    let mut charge = |count: usize| -> Result<(), ReductionError> {
        incidences += count as u128;
        if incidences > limits.max_incidences as u128 {
            return Err(ReductionError::Budget {
                what: "composed incidences",
                count: incidences,
                limit: limits.max_incidences,
            });
        }
        Ok(())
    };

    let mut sets = Vec::with_capacity(layout.set_count() as usize);
    for part in 0..k {
        for codeword in 0..params.n as usize {
            let a = AVertex { part, codeword };
            let mut covered = Vec::new();
            if let Some(source) = gamma.sets().get(codeword) {
                let mut member = vec![false; layout.universe];
                for &e in &source.elements {
                    member[e] = true;
                }
                for block in 0..m {
                    let adjacent: Vec<bool> = (0..layout.t)
                        .map(|index| graph.adjacent_unchecked(a, BVertex { part: block, index }))
                        .collect();
                    for bs in &b_tuples {
                        for us in &u_tuples {
                            let hit = bs
                                .iter()
                                .zip(us)
                                .any(|(&b, &u)| adjacent[b as usize] && member[u as usize]);
                            if hit {
                                covered.push(layout.element_id(block, bs, &to_usize(us)));
                            }
                        }
                    }
                }
            }
            charge(covered.len())?;
            sets.push(WeightedSet {
                id: layout.a_set_id(a),
                weight: heavy,
                elements: covered,
            });
        }
    }
    for block in 0..m {
        for index in 0..layout.t {
            let b = BVertex { part: block, index };
            let mut covered = Vec::new();
            for bs in b_tuples.iter().filter(|bs| !bs.contains(&index)) {
                for us in &u_tuples {
                    covered.push(layout.element_id(block, bs, &to_usize(us)));
                }
            }
            charge(covered.len())?;
            sets.push(WeightedSet {
                id: layout.b_set_id(b),
                weight: 1,
                elements: covered,
            });
        }
    }

    let mut parameters = BTreeMap::new();
    parameters.insert("c".to_string(), c.to_string());
    parameters.insert("k".to_string(), k.to_string());
    parameters.insert("m".to_string(), m.to_string());
    parameters.insert("n".to_string(), params.n.to_string());
    parameters.insert("t".to_string(), params.t.to_string());
    parameters.insert("alphabet".to_string(), graph.alphabet().to_string());
    parameters.insert("h_squared".to_string(), format_rational(&params.h_squared));
    parameters.insert("epsilon".to_string(), format_rational(&params.epsilon));
    let instance = SetCoverInstance::new(elements as usize, sets, Some(2 * m as u64))?
        .with_provenance(gamma.provenance().to_vec())
        .record_step("compose", parameters, gamma.content_hash());
    Ok(Composed { instance, layout })
}

fn to_usize(us: &[u64]) -> Vec<usize> {
    us.iter().map(|&u| u as usize).collect()
}

impl Composed {
    /// The instance with a label table naming every set and element tuple.
    pub fn labeled(&self) -> Result<SetCoverInstance, ReductionError> {
        let l = &self.layout;
        let sets = self
            .instance
            .sets()
            .iter()
            .map(|s| match l.role(s.id) {
                Some(SetRole::A(a)) => format!("a({},{})", a.part, a.codeword),
                Some(SetRole::B(b)) => format!("b({},{})", b.part, b.index),
                None => s.id.to_string(),
            })
            .collect();
        let elements = (0..self.instance.universe_size())
            .map(|e| {
                let (block, bs, us) = l.decode_element(e);
                format!("(u={us:?};b={bs:?};j={block})")
            })
            .collect();
        Ok(self.instance.clone().with_labels(Labels { sets, elements })?)
    }

    /// The yes-case solution `{a_1..a_k} ∪ {b_1..b_m}` of weight `2m` built
    /// from a cover of `Γ` with at most `k` sets. Shorter covers are padded
    /// by repeating their first set in the remaining parts, and
    /// `b_j = ((a_1)_j, …, (a_k)_j)`.
    pub fn completeness_witness(
        &self,
        gamma: &SetCoverInstance,
        graph: &ThresholdGraph,
        cover: &Solution,
    ) -> Result<Solution, ReductionError> {
        let check = verify_cover(gamma, cover)?;
        if let Some(&missing) = check.uncovered_elements.first() {
            return Err(ReductionError::NotACover(missing));
        }
        let k = self.layout.k;
        if cover.len() > k {
            return Err(ReductionError::CoverTooLarge {
                found: cover.len(),
                k: k as u64,
            });
        }
        let mut tuple: Vec<usize> = cover
            .chosen()
            .iter()
            .map(|&id| gamma.index_of(id).ok_or(ReductionError::UnknownSet(id)))
            .collect::<Result<_, _>>()?;
        let filler = tuple.first().copied().unwrap_or(0);
        tuple.resize(k, filler);
        let mut ids: Vec<SetId> = tuple
            .iter()
            .enumerate()
            .map(|(part, &codeword)| self.layout.a_set_id(AVertex { part, codeword }))
            .collect();
        for j in 0..self.layout.m {
            ids.push(self.layout.b_set_id(graph.common_neighbor(&tuple, j)?));
        }
        Ok(self.instance.solution(ids)?)
    }

    /// Classifies every block `B_j` for a candidate solution: many picked
    /// B-vertices, a usable `b` with `≥ k+1` picked A-neighbours, or neither.
    /// When fewer than `c+1` vertices of `B_j` are picked, the usable `b`
    /// are the picked ones (a tuple of uncovered elements must repeat them),
    /// or all of `B_j` if none is picked.
    pub fn soundness_dichotomy(
        &self,
        graph: &ThresholdGraph,
        solution: &Solution,
    ) -> Result<Vec<BlockDiagnostic>, ReductionError> {
        let mut picked_a = Vec::new();
        let mut picked_b: Vec<BTreeSet<u64>> = vec![BTreeSet::new(); self.layout.m];
        for &id in solution.chosen() {
            match self.layout.role(id) {
                Some(SetRole::A(a)) => picked_a.push(a),
                Some(SetRole::B(b)) => {
                    picked_b[b.part].insert(b.index);
                }
                None => return Err(ReductionError::UnknownSet(id)),
            }
        }
        let k = self.layout.k;
        let c = self.layout.c;
        let mut out = Vec::with_capacity(self.layout.m);
        for (block, picks) in picked_b.iter().enumerate() {
            let outcome = if picks.len() > c {
                BlockOutcome::ManyB
            } else {
                let candidates: Vec<u64> = if picks.is_empty() {
                    (0..self.layout.t).collect()
                } else {
                    picks.iter().copied().collect()
                };
                candidates
                    .into_iter()
                    .map(|index| {
                        let b = BVertex { part: block, index };
                        let count = picked_a.iter().filter(|&&a| graph.adjacent_unchecked(a, b)).count();
                        (b, count)
                    })
                    .find(|&(_, count)| count > k)
                    .map_or(BlockOutcome::Violated, |(b, picked_a_neighbors)| {
                        BlockOutcome::HeavyNeighbor { b, picked_a_neighbors }
                    })
            };
            out.push(BlockDiagnostic {
                block,
                picked_b: picks.len(),
                outcome,
            });
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ecc::{enumerate_codebook, CodeSpec};
    use crate::math::Rational;
    use crate::threshold::build_threshold_graph;

    fn graph(p: u32, r: usize, m: usize, k: usize) -> ThresholdGraph {
        let limits = Limits::default();
        let book = enumerate_codebook(&CodeSpec::reed_solomon(p, r, m).unwrap(), &limits).unwrap();
        build_threshold_graph(book, k, Rational::new(1, 2), &limits).unwrap()
    }

    fn gamma() -> SetCoverInstance {
        SetCoverInstance::unweighted(3, vec![vec![0, 1], vec![2], vec![0], vec![1]], Some(2)).unwrap()
    }

    #[test]
    fn sizes_weights_and_parameter() {
        let g = graph(5, 2, 4, 2);
        let composed = compose(&gamma(), &g, 2, &Limits::default()).unwrap();
        assert_eq!(composed.instance.len(), 150);
        assert_eq!(composed.instance.universe_size(), 22_500);
        assert_eq!(composed.instance.distinct_weights().into_iter().collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(composed.instance.chi(), 2);
        assert_eq!(composed.instance.parameter_k(), Some(8));
        let step = composed.instance.provenance().last().unwrap();
        assert_eq!(step.reduction, "compose");
        assert_eq!(step.input_hash, gamma().content_hash());
        assert_eq!(step.output_hash, composed.instance.content_hash());
    }

    #[test]
    fn degenerate_single_block() {
        // c = k = 1, m = 2: U' is U × B_1 ∪ U × B_2
        let g = graph(3, 1, 2, 1);
        let inst = SetCoverInstance::unweighted(2, vec![vec![0], vec![1]], None).unwrap();
        let composed = compose(&inst, &g, 1, &Limits::default()).unwrap();
        assert_eq!(composed.instance.universe_size(), 2 * 2 * 3);
        assert_eq!(composed.instance.len(), 3 + 2 * 3);
    }

    #[test]
    fn element_ids_round_trip() {
        let layout = ComposedLayout {
            n: 25,
            k: 2,
            t: 25,
            m: 4,
            c: 2,
            universe: 3,
            source_sets: 4,
        };
        for id in [0usize, 1, 77, 5624, 5625, 22_499] {
            let (block, bs, us) = layout.decode_element(id);
            assert_eq!(layout.element_id(block, &bs, &us), id);
        }
        assert_eq!(layout.role(SetId(26)), Some(SetRole::A(AVertex { part: 1, codeword: 1 })));
        assert_eq!(layout.role(SetId(50 + 25 + 3)), Some(SetRole::B(BVertex { part: 1, index: 3 })));
        assert_eq!(layout.role(SetId(150)), None);
    }

    #[test]
    fn membership_matches_definition() {
        let g = graph(3, 1, 2, 2);
        let inst = SetCoverInstance::unweighted(2, vec![vec![0], vec![1], vec![0, 1]], None).unwrap();
        let composed = compose(&inst, &g, 2, &Limits::default()).unwrap();
        let layout = composed.layout;
        for set in composed.instance.sets() {
            let members: BTreeSet<usize> = set.elements.iter().copied().collect();
            for e in 0..composed.instance.universe_size() {
                let (block, bs, us) = layout.decode_element(e);
                let expected = match layout.role(set.id).unwrap() {
                    SetRole::A(a) => inst.sets().get(a.codeword).is_some_and(|s| {
                        bs.iter().zip(&us).any(|(&b, u)| {
                            g.adjacency(a, BVertex { part: block, index: b }).unwrap() && s.elements.contains(u)
                        })
                    }),
                    SetRole::B(b) => b.part == block && !bs.contains(&b.index),
                };
                assert_eq!(members.contains(&e), expected, "set {} element {e}", set.id);
            }
        }
    }

    #[test]
    fn precondition_errors() {
        let g = graph(5, 2, 4, 2);
        let limits = Limits::default();
        assert_eq!(compose(&gamma(), &g, 0, &limits), Err(ReductionError::ZeroArity));
        let g3 = graph(5, 2, 4, 3);
        assert!(matches!(compose(&gamma(), &g3, 1, &limits), Err(ReductionError::Divisibility { .. })));
        let big = SetCoverInstance::unweighted(1, vec![vec![0]; 26], None).unwrap();
        assert!(matches!(compose(&big, &g, 1, &limits), Err(ReductionError::PartSize { .. })));
        let weighted = SetCoverInstance::new(1, vec![WeightedSet::new(0, 3, vec![0])], None).unwrap();
        assert!(matches!(compose(&weighted, &g, 1, &limits), Err(ReductionError::Weighted(_))));
        let tight = Limits {
            max_universe: 1000,
            ..Limits::default()
        };
        assert!(matches!(compose(&gamma(), &g, 2, &tight), Err(ReductionError::Budget { .. })));
    }

    #[test]
    fn completeness_witness_covers_with_weight_2m() {
        let g = graph(5, 2, 4, 2);
        let gamma = gamma();
        let composed = compose(&gamma, &g, 2, &Limits::default()).unwrap();
        let cover = gamma.solution([SetId(0), SetId(1)]).unwrap();
        let witness = composed.completeness_witness(&gamma, &g, &cover).unwrap();
        assert_eq!(witness.total_weight(), 8);
        assert!(verify_cover(&composed.instance, &witness).unwrap().covered);
        let short = gamma.solution([SetId(0)]).unwrap();
        assert!(matches!(
            composed.completeness_witness(&gamma, &g, &short),
            Err(ReductionError::NotACover(2))
        ));
    }

    #[test]
    fn dichotomy_on_the_witness() {
        let g = graph(5, 2, 4, 2);
        let gamma = gamma();
        let composed = compose(&gamma, &g, 2, &Limits::default()).unwrap();
        let cover = gamma.solution([SetId(0), SetId(1)]).unwrap();
        let witness = composed.completeness_witness(&gamma, &g, &cover).unwrap();
        // only k = 2 A-vertices are picked and one b per block, so no block
        // meets either case: the yes case is exactly where the argument fails
        let diagnostics = composed.soundness_dichotomy(&g, &witness).unwrap();
        assert_eq!(diagnostics.len(), 4);
        assert!(diagnostics.iter().all(|d| d.picked_b == 1 && d.outcome == BlockOutcome::Violated));
        let all = composed.instance.all_sets();
        assert!(composed
            .soundness_dichotomy(&g, &all)
            .unwrap()
            .iter()
            .all(|d| d.outcome == BlockOutcome::ManyB));
    }

    #[test]
    fn labels_have_one_entry_per_set_and_element() {
        let g = graph(3, 1, 2, 1);
        let inst = SetCoverInstance::unweighted(2, vec![vec![0], vec![1]], None).unwrap();
        let composed = compose(&inst, &g, 1, &Limits::default()).unwrap();
        let labeled = composed.labeled().unwrap();
        let labels = labeled.labels().unwrap();
        assert_eq!(labels.sets[0], "a(0,0)");
        assert_eq!(labels.sets[3], "b(0,0)");
        assert_eq!(labels.elements.len(), 12);
    }
}
