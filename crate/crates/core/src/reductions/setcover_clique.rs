use std::collections::BTreeMap;

use serde::Serialize;

use super::ReductionError;
use crate::instance::{verify_cover, SetCoverInstance, SimpleGraph, Solution};
use crate::limits::Limits;

/// Vertex numbering of [`setcover_to_clique`]: `V_i` (copies of `S`) come
/// first, vertex `(i, s)` at `i·|S| + s`; then `W_j = [k]^g`, vertex `(j, w)`
/// at `k·|S| + j·k^g + w`, where digit `ℓ` of `w` (little-endian base `k`)
/// names the part `V_{w[ℓ]}` responsible for element `j·g + ℓ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CliqueLayout {
    pub k: usize,
    pub sets: usize,
    /// Group size `g = max(1, ⌊log_k |S|⌋)`.
    pub group: usize,
    /// Number of groups `h = |U| / g`.
    pub groups: usize,
    /// `k^g`, the size of each `W_j`.
    pub w_size: usize,
}

impl CliqueLayout {
    pub fn v_vertex(&self, part: usize, set: usize) -> usize {
        part * self.sets + set
    }

    pub fn w_vertex(&self, group: usize, w: usize) -> usize {
        self.k * self.sets + group * self.w_size + w
    }

    pub fn digit(&self, w: usize, position: usize) -> usize {
        (w / self.k.pow(position as u32)) % self.k
    }

    pub fn vertex_count(&self) -> usize {
        self.k * self.sets + self.groups * self.w_size
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueReduction {
    pub graph: SimpleGraph,
    pub k_prime: usize,
    pub layout: CliqueLayout,
}

/// Largest `g ≥ 1` with `k^g ≤ n` (1 when `n < k`).
fn group_size(k: usize, n: usize) -> usize {
    let mut g = 1;
    let mut power = k as u128 * k as u128;
    while power <= n as u128 {
        g += 1;
        power *= k as u128;
    }
    g
}

/// Reduces an unweighted instance to a graph that has a `k'`-clique,
/// `k' = k + |U|/g`, iff the instance has a cover with at most `k` sets.
///
/// Parts are independent sets and every two parts of the same kind are
/// completely joined. `v ∈ V_i` and `w ∈ W_j` are adjacent iff every
/// position `ℓ` with `w[ℓ] = i` has `v` covering element `j·g + ℓ`.
pub fn setcover_to_clique(
    gamma: &SetCoverInstance,
    k: usize,
    limits: &Limits,
) -> Result<CliqueReduction, ReductionError> {
    if k < 2 {
        return Err(ReductionError::SmallK(k as u64));
    }
    if !gamma.is_unweighted() {
        return Err(ReductionError::Weighted(gamma.distinct_weights().into_iter().collect()));
    }
    let n = gamma.len();
    if n == 0 {
        return Err(ReductionError::Precondition("the instance has no sets".to_string()));
    }
    let universe = gamma.universe_size();
    let group = group_size(k, n);
    if !universe.is_multiple_of(group) {
        return Err(ReductionError::NonFactorable { universe, group });
    }
    let w_size = k
        .checked_pow(group as u32)
        .expect("k^g <= |S| or g = 1");
    let layout = CliqueLayout {
        k,
        sets: n,
        group,
        groups: universe / group,
        w_size,
    };
    let vertices = layout.vertex_count();
    if vertices as u64 > limits.max_vertices {
        return Err(ReductionError::Budget {
            what: "clique graph vertices",
            count: vertices as u128,
            limit: limits.max_vertices,
        });
    }
    let mut member = vec![vec![false; universe]; n];
    for (s, set) in gamma.sets().iter().enumerate() {
        for &e in &set.elements {
            member[s][e] = true;
        }
    }
    let mut edges = Vec::new();
    let mut push = |u: usize, v: usize| -> Result<(), ReductionError> {
        edges.push((u, v));
        if edges.len() as u64 > limits.max_incidences {
            return Err(ReductionError::Budget {
                what: "clique graph edges",
                count: edges.len() as u128,
                limit: limits.max_incidences,
            });
        }
        Ok(())
    };
    for i in 0..k {
        for i2 in i + 1..k {
            for s in 0..n {
                for s2 in 0..n {
                    push(layout.v_vertex(i, s), layout.v_vertex(i2, s2))?;
                }
            }
        }
    }
    for j in 0..layout.groups {
        for j2 in j + 1..layout.groups {
            for w in 0..w_size {
                for w2 in 0..w_size {
                    push(layout.w_vertex(j, w), layout.w_vertex(j2, w2))?;
                }
            }
        }
    }
    for i in 0..k {
        for (s, covers) in member.iter().enumerate() {
            for j in 0..layout.groups {
                for w in 0..w_size {
                    let compatible =
                        (0..group).all(|l| layout.digit(w, l) != i || covers[j * group + l]);
                    if compatible {
                        push(layout.v_vertex(i, s), layout.w_vertex(j, w))?;
                    }
                }
            }
        }
    }
    let k_prime = k + layout.groups;
    let mut parameters = BTreeMap::new();
    parameters.insert("k".to_string(), k.to_string());
    parameters.insert("group".to_string(), group.to_string());
    parameters.insert("groups".to_string(), layout.groups.to_string());
    parameters.insert("k_prime".to_string(), k_prime.to_string());
    let graph = SimpleGraph::new(vertices, edges, Some(k_prime as u64))?
        .with_provenance(gamma.provenance().to_vec())
        .record_step("setcover-to-clique", parameters, gamma.content_hash());
    Ok(CliqueReduction {
        graph,
        k_prime,
        layout,
    })
}

impl CliqueReduction {
    /// The `k'`-clique built from a cover with at most `k` sets: `v_i` is the
    /// `i`-th cover set (the first one repeated when the cover is shorter),
    /// and `w_j[ℓ]` is the first `i` whose `v_i` covers element `j·g + ℓ`.
    pub fn clique_from_cover(&self, gamma: &SetCoverInstance, cover: &Solution) -> Result<Vec<usize>, ReductionError> {
        let check = verify_cover(gamma, cover)?;
        if let Some(&missing) = check.uncovered_elements.first() {
            return Err(ReductionError::NotACover(missing));
        }
        let l = &self.layout;
        if cover.len() > l.k {
            return Err(ReductionError::CoverTooLarge {
                found: cover.len(),
                k: l.k as u64,
            });
        }
        let mut picks: Vec<usize> = cover
            .chosen()
            .iter()
            .map(|&id| gamma.index_of(id).ok_or(ReductionError::UnknownSet(id)))
            .collect::<Result<_, _>>()?;
        let filler = picks.first().copied().unwrap_or(0);
        picks.resize(l.k, filler);
        let mut clique: Vec<usize> = picks.iter().enumerate().map(|(i, &s)| l.v_vertex(i, s)).collect();
        for j in 0..l.groups {
            let mut w = 0;
            for position in (0..l.group).rev() {
                let element = j * l.group + position;
                let part = picks
                    .iter()
                    .position(|&s| gamma.sets()[s].elements.binary_search(&element).is_ok())
                    .expect("the cover covers every element");
                w = w * l.k + part;
            }
            clique.push(l.w_vertex(j, w));
        }
        Ok(clique)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::WeightedSet;
    use crate::solvers::{exact_clique, exact_weighted_opt, SolverBudget};

    fn reduce(gamma: &SetCoverInstance, k: usize) -> CliqueReduction {
        setcover_to_clique(gamma, k, &Limits::default()).unwrap()
    }

    #[test]
    fn group_sizes() {
        assert_eq!(group_size(2, 1), 1);
        assert_eq!(group_size(2, 3), 1);
        assert_eq!(group_size(2, 4), 2);
        assert_eq!(group_size(2, 7), 2);
        assert_eq!(group_size(2, 8), 3);
        assert_eq!(group_size(3, 9), 2);
    }

    #[test]
    fn cover_yields_the_assembled_clique() {
        let gamma = SetCoverInstance::unweighted(4, vec![vec![0, 1], vec![2, 3], vec![1, 2], vec![0]], None).unwrap();
        let red = reduce(&gamma, 2);
        assert_eq!(red.layout.group, 2);
        assert_eq!(red.k_prime, 4);
        assert_eq!(red.graph.parameter_k(), Some(4));
        let cover = gamma.solution([crate::SetId(0), crate::SetId(1)]).unwrap();
        let clique = red.clique_from_cover(&gamma, &cover).unwrap();
        assert_eq!(clique.len(), 4);
        assert!(red.graph.is_clique(&clique));
        assert!(exact_clique(&red.graph, red.k_prime).found);
    }

    #[test]
    fn uncoverable_element_blocks_every_clique() {
        let gamma = SetCoverInstance::unweighted(2, vec![vec![0], vec![0], vec![0], vec![0]], None).unwrap();
        let red = reduce(&gamma, 2);
        assert!(!exact_clique(&red.graph, red.k_prime).found);
    }

    #[test]
    fn tiny_exhaustive_two_elements_one_group() {
        // k = 2, |U| = 2, four sets so that g = 2: every family of four
        // subsets of {0, 1}
        let subsets = [vec![], vec![0], vec![1], vec![0, 1]];
        for a in 0..4 {
            for b in a..4 {
                for c in b..4 {
                    for d in c..4 {
                        let sets = [a, b, c, d].iter().map(|&i| subsets[i].clone()).collect();
                        let gamma = SetCoverInstance::unweighted(2, sets, None).unwrap();
                        let red = reduce(&gamma, 2);
                        assert_eq!(red.layout.groups, 1);
                        let coverable = exact_weighted_opt(&gamma, &SolverBudget::default())
                            .optimum()
                            .is_some_and(|opt| opt <= 2);
                        assert_eq!(exact_clique(&red.graph, red.k_prime).found, coverable);
                    }
                }
            }
        }
    }

    #[test]
    fn errors() {
        let limits = Limits::default();
        let gamma = SetCoverInstance::unweighted(3, vec![vec![0], vec![1], vec![2], vec![0]], None).unwrap();
        assert_eq!(
            setcover_to_clique(&gamma, 2, &limits).unwrap_err(),
            ReductionError::NonFactorable { universe: 3, group: 2 }
        );
        assert_eq!(setcover_to_clique(&gamma, 1, &limits).unwrap_err(), ReductionError::SmallK(1));
        let weighted = SetCoverInstance::new(1, vec![WeightedSet::new(0, 2, vec![0])], None).unwrap();
        assert!(matches!(setcover_to_clique(&weighted, 2, &limits), Err(ReductionError::Weighted(_))));
    }
}
