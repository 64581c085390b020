use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::instance::SimpleGraph;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CliqueResult {
    pub found: bool,
    /// `k` vertices forming a clique, ascending, when found.
    pub witness: Option<Vec<usize>>,
}

/// Searches for a clique on `k` vertices: Bron–Kerbosch with a Tomita
/// pivot, cut off as soon as `|R| = k` and pruned when `|R| + |P| < k`.
pub fn exact_clique(graph: &SimpleGraph, k: usize) -> CliqueResult {
    if k == 0 {
        return CliqueResult {
            found: true,
            witness: Some(Vec::new()),
        };
    }
    let n = graph.vertex_count();
    let adjacency = graph.adjacency();
    let mut p = FixedBitSet::with_capacity(n);
    p.insert_range(..);
    let x = FixedBitSet::with_capacity(n);
    let mut r = Vec::new();
    if expand(&adjacency, k, &mut r, p, x) {
        r.sort_unstable();
        CliqueResult {
            found: true,
            witness: Some(r),
        }
    } else {
        CliqueResult {
            found: false,
            witness: None,
        }
    }
}

fn expand(adjacency: &[FixedBitSet], k: usize, r: &mut Vec<usize>, mut p: FixedBitSet, mut x: FixedBitSet) -> bool {
    if r.len() >= k {
        return true;
    }
    if r.len() + p.count_ones(..) < k {
        return false;
    }
    let pivot = p
        .ones()
        .chain(x.ones())
        .max_by_key(|&u| adjacency[u].intersection(&p).count())
        .expect("P is nonempty here");
    let mut candidates = p.clone();
    candidates.difference_with(&adjacency[pivot]);
    for v in candidates.ones() {
        let mut next_p = p.clone();
        next_p.intersect_with(&adjacency[v]);
        let mut next_x = x.clone();
        next_x.intersect_with(&adjacency[v]);
        r.push(v);
        if expand(adjacency, k, r, next_p, next_x) {
            return true;
        }
        r.pop();
        p.set(v, false);
        x.insert(v);
    }
    false
}
