use std::collections::BTreeMap;

use itertools::Itertools;
use serde::Serialize;

use super::ReductionError;
use crate::instance::{Labels, SetCoverInstance, SimpleGraph, WeightedSet};

/// Shape of the universe built by [`clique_to_setcover_small_universe`].
///
/// There is one block element per slot pair `(i, j)`, `i < j` (pairs in
/// lexicographic order), and one gadget per slot `i` and per two slot pairs
/// `p < q` containing `i`, each with `2·bits` cells `(ℓ, value)`. Elements
/// are laid out pair by pair: the block element of `q`, then the gadgets
/// whose second pair is `q`. A branch-and-bound over the lowest uncovered
/// element therefore meets each gadget right after both its pairs are
/// settled.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SmallUniverseLayout {
    pub k: usize,
    pub bits: usize,
    pub pairs: Vec<(usize, usize)>,
    /// `(slot, p, q)` for every gadget, in element order.
    pub gadgets: Vec<(usize, usize, usize)>,
    pub block_elements: Vec<usize>,
    pub gadget_starts: Vec<usize>,
}

impl SmallUniverseLayout {
    fn new(k: usize, n: usize) -> Self {
        let bits = usize::BITS as usize - (n - 1).leading_zeros() as usize;
        let pairs: Vec<(usize, usize)> = (0..k).tuple_combinations().collect();
        let touches = |p: usize, slot: usize| pairs[p].0 == slot || pairs[p].1 == slot;
        let mut gadgets = Vec::new();
        let mut block_elements = Vec::new();
        let mut gadget_starts = Vec::new();
        let mut next = 0;
        for q in 0..pairs.len() {
            block_elements.push(next);
            next += 1;
            for p in 0..q {
                for slot in 0..k {
                    if touches(p, slot) && touches(q, slot) {
                        gadgets.push((slot, p, q));
                        gadget_starts.push(next);
                        next += 2 * bits;
                    }
                }
            }
        }
        SmallUniverseLayout {
            k,
            bits,
            pairs,
            gadgets,
            block_elements,
            gadget_starts,
        }
    }

    /// `C(k,2) + k·C(k-1,2)·2⌈log₂ n⌉`.
    pub fn universe_size(&self) -> usize {
        self.pairs.len() + self.gadgets.len() * 2 * self.bits
    }

    pub fn gadget_cell(&self, gadget: usize, bit: usize, value: usize) -> usize {
        self.gadget_starts[gadget] + 2 * bit + value
    }

    fn element_label(&self, e: usize) -> String {
        if let Some(p) = self.block_elements.iter().position(|&b| b == e) {
            let (i, j) = self.pairs[p];
            return format!("block({i},{j})");
        }
        let g = self.gadget_starts.iter().rposition(|&s| s <= e).expect("element lies in a gadget");
        let (slot, p, q) = self.gadgets[g];
        let cell = e - self.gadget_starts[g];
        format!("gadget(slot={slot},{p},{q};bit={},value={})", cell / 2, cell % 2)
    }
}

/// Builds a SetCover instance with `OPT ≤ C(k,2)` iff `G` has a `k`-clique.
///
/// There is one set for every edge, orientation and slot pair: the set for
/// `u` in slot `i` and `v` in slot `j` covers the block element of `(i, j)`
/// and, for every gadget at slot `i` (or `j`) involving this pair, the cells
/// spelling the slot's vertex: `(ℓ, v_ℓ)` when the pair is the gadget's
/// first pair and `(ℓ, 1 - v_ℓ)` when it is the second. A gadget is fully
/// covered by its two pairs' sets iff they place the same vertex in the
/// shared slot.
pub fn clique_to_setcover_small_universe(
    graph: &SimpleGraph,
    k: usize,
) -> Result<(SetCoverInstance, SmallUniverseLayout), ReductionError> {
    if k < 2 {
        return Err(ReductionError::SmallK(k as u64));
    }
    let n = graph.vertex_count();
    if n < 2 {
        return Err(ReductionError::TooFewVertices(n));
    }
    let layout = SmallUniverseLayout::new(k, n);
    let mut sets = Vec::new();
    let mut set_labels = Vec::new();
    for &(u, v) in graph.edges() {
        for (x, y) in [(u, v), (v, u)] {
            for (p, &(i, j)) in layout.pairs.iter().enumerate() {
                let mut elements = vec![layout.block_elements[p]];
                for (g, &(slot, first, second)) in layout.gadgets.iter().enumerate() {
                    if first != p && second != p {
                        continue;
                    }
                    let vertex = if slot == i { x } else { y };
                    for bit in 0..layout.bits {
                        let value = (vertex >> bit) & 1;
                        let cell_value = if first == p { value } else { 1 - value };
                        elements.push(layout.gadget_cell(g, bit, cell_value));
                    }
                }
                set_labels.push(format!("{x}@{i},{y}@{j}"));
                sets.push(WeightedSet::new(sets.len() as u64, 1, elements));
            }
        }
    }
    let elements = (0..layout.universe_size()).map(|e| layout.element_label(e)).collect();
    let target = (k * (k - 1) / 2) as u64;
    let mut parameters = BTreeMap::new();
    parameters.insert("k".to_string(), k.to_string());
    parameters.insert("bits".to_string(), layout.bits.to_string());
    let instance = SetCoverInstance::new(layout.universe_size(), sets, Some(target))?
        .with_labels(Labels {
            sets: set_labels,
            elements,
        })?
        .with_provenance(graph.provenance().to_vec())
        .record_step("clique-to-setcover", parameters, graph.content_hash());
    Ok((instance, layout))
}
