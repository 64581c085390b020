//! Set systems, simple graphs and solutions.
//!
//! A [`SetCoverInstance`] is the bipartite set system `(S, U, E)` with a
//! weight function `w: S → ℕ⁺`. Elements are the dense indices
//! `0..universe_size`; sets carry an explicit [`SetId`] so that solutions stay
//! meaningful after serialization. Every instance is validated on
//! construction and immutable afterwards.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

/// Identifier of a set inside one instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SetId(pub u64);

impl fmt::Display for SetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InstanceError {
    #[error("set {set} contains element {element}, outside universe of size {universe_size}")]
    ElementOutOfRange {
        set: SetId,
        element: usize,
        universe_size: usize,
    },
    #[error("set {set} lists element {element} twice")]
    DuplicateElement { set: SetId, element: usize },
    #[error("set {0} has weight 0; weights must be positive")]
    ZeroWeight(SetId),
    #[error("set id {0} appears more than once")]
    DuplicateSetId(SetId),
    #[error("total weight of all sets overflows a 64-bit accumulator")]
    WeightOverflow,
    #[error("parameter k must be positive")]
    ZeroParameter,
    #[error("unknown set id {0}")]
    UnknownSetId(SetId),
    #[error("set id {0} chosen more than once")]
    DuplicateChoice(SetId),
    #[error("label table has {found} {what} labels but the instance has {expected}")]
    LabelCount {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("edge ({0}, {0}) is a self-loop")]
    SelfLoop(usize),
    #[error("edge ({u}, {v}) references a vertex outside 0..{vertex_count}")]
    VertexOutOfRange {
        u: usize,
        v: usize,
        vertex_count: usize,
    },
    #[error("edge ({0}, {1}) listed more than once")]
    DuplicateEdge(usize, usize),
}

/// One member of the set family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedSet {
    pub id: SetId,
    pub weight: u64,
    pub elements: Vec<usize>,
}

impl WeightedSet {
    pub fn new(id: u64, weight: u64, elements: Vec<usize>) -> Self {
        WeightedSet {
            id: SetId(id),
            weight,
            elements,
        }
    }
}

/// Human-readable names for sets and elements. Never read by algorithms.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Labels {
    pub sets: Vec<String>,
    pub elements: Vec<String>,
}

/// One reduction step that produced an instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProvenanceStep {
    pub reduction: String,
    pub parameters: BTreeMap<String, String>,
    pub input_hash: String,
    pub output_hash: String,
}

impl ProvenanceStep {
    pub fn parameter(&self, key: &str) -> Option<&str> {
        self.parameters.get(key).map(String::as_str)
    }
}

#[derive(Debug, Clone)]
pub struct SetCoverInstance {
    universe_size: usize,
    sets: Vec<WeightedSet>,
    parameter_k: Option<u64>,
    labels: Option<Labels>,
    provenance: Vec<ProvenanceStep>,
    index: HashMap<SetId, usize>,
}

impl PartialEq for SetCoverInstance {
    fn eq(&self, other: &Self) -> bool {
        self.universe_size == other.universe_size
            && self.sets == other.sets
            && self.parameter_k == other.parameter_k
            && self.labels == other.labels
            && self.provenance == other.provenance
    }
}

impl Eq for SetCoverInstance {}

impl SetCoverInstance {
    /// Validates and builds an instance. Element lists may arrive unsorted;
    /// they are stored sorted, and repeated elements are rejected.
    pub fn new(
        universe_size: usize,
        mut sets: Vec<WeightedSet>,
        parameter_k: Option<u64>,
    ) -> Result<Self, InstanceError> {
        if parameter_k == Some(0) {
            return Err(InstanceError::ZeroParameter);
        }
        let mut index = HashMap::with_capacity(sets.len());
        let mut total: u64 = 0;
        for (position, set) in sets.iter_mut().enumerate() {
            if set.weight == 0 {
                return Err(InstanceError::ZeroWeight(set.id));
            }
            total = total
                .checked_add(set.weight)
                .ok_or(InstanceError::WeightOverflow)?;
            if index.insert(set.id, position).is_some() {
                return Err(InstanceError::DuplicateSetId(set.id));
            }
            set.elements.sort_unstable();
            for pair in set.elements.windows(2) {
                if pair[0] == pair[1] {
                    return Err(InstanceError::DuplicateElement {
                        set: set.id,
                        element: pair[0],
                    });
                }
            }
            if let Some(&last) = set.elements.last() {
                if last >= universe_size {
                    return Err(InstanceError::ElementOutOfRange {
                        set: set.id,
                        element: last,
                        universe_size,
                    });
                }
            }
        }
        Ok(SetCoverInstance {
            universe_size,
            sets,
            parameter_k,
            labels: None,
            provenance: Vec::new(),
            index,
        })
    }

    /// Unit-weight instance with set ids `0..sets.len()`.
    pub fn unweighted(
        universe_size: usize,
        sets: Vec<Vec<usize>>,
        parameter_k: Option<u64>,
    ) -> Result<Self, InstanceError> {
        let sets = sets
            .into_iter()
            .enumerate()
            .map(|(i, elements)| WeightedSet::new(i as u64, 1, elements))
            .collect();
        Self::new(universe_size, sets, parameter_k)
    }

    pub fn with_labels(mut self, labels: Labels) -> Result<Self, InstanceError> {
        if labels.sets.len() != self.sets.len() {
            return Err(InstanceError::LabelCount {
                what: "set",
                expected: self.sets.len(),
                found: labels.sets.len(),
            });
        }
        if labels.elements.len() != self.universe_size {
            return Err(InstanceError::LabelCount {
                what: "element",
                expected: self.universe_size,
                found: labels.elements.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn with_provenance(mut self, steps: Vec<ProvenanceStep>) -> Self {
        self.provenance = steps;
        self
    }

    /// Appends a provenance step recording `input_hash → self`.
    pub fn record_step(
        mut self,
        reduction: &str,
        parameters: BTreeMap<String, String>,
        input_hash: String,
    ) -> Self {
        let output_hash = self.content_hash();
        self.provenance.push(ProvenanceStep {
            reduction: reduction.to_string(),
            parameters,
            input_hash,
            output_hash,
        });
        self
    }

    pub fn universe_size(&self) -> usize {
        self.universe_size
    }

    pub fn sets(&self) -> &[WeightedSet] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn parameter_k(&self) -> Option<u64> {
        self.parameter_k
    }

    pub fn labels(&self) -> Option<&Labels> {
        self.labels.as_ref()
    }

    pub fn provenance(&self) -> &[ProvenanceStep] {
        &self.provenance
    }

    pub fn index_of(&self, id: SetId) -> Option<usize> {
        self.index.get(&id).copied()
    }

    pub fn set(&self, id: SetId) -> Option<&WeightedSet> {
        self.index_of(id).map(|i| &self.sets[i])
    }

    /// The distinct weights in increasing order.
    pub fn distinct_weights(&self) -> BTreeSet<u64> {
        self.sets.iter().map(|s| s.weight).collect()
    }

    /// Number of distinct weights, the instance's χ. An instance without
    /// sets counts as unweighted (χ = 1).
    pub fn chi(&self) -> usize {
        self.distinct_weights().len().max(1)
    }

    pub fn is_unweighted(&self) -> bool {
        self.sets.iter().all(|s| s.weight == 1)
    }

    /// Elements that no set contains.
    pub fn uncoverable_elements(&self) -> Vec<usize> {
        let mut seen = FixedBitSet::with_capacity(self.universe_size);
        for set in &self.sets {
            for &e in &set.elements {
                seen.insert(e);
            }
        }
        seen.zeroes().collect()
    }

    pub fn incidence_count(&self) -> usize {
        self.sets.iter().map(|s| s.elements.len()).sum()
    }

    /// Builds a validated [`Solution`] from chosen ids.
    pub fn solution<I>(&self, ids: I) -> Result<Solution, InstanceError>
    where
        I: IntoIterator<Item = SetId>,
    {
        let mut seen = HashSet::new();
        let mut chosen = Vec::new();
        let mut total_weight = 0u64;
        for id in ids {
            let set = self.set(id).ok_or(InstanceError::UnknownSetId(id))?;
            if !seen.insert(id) {
                return Err(InstanceError::DuplicateChoice(id));
            }
            total_weight += set.weight;
            chosen.push(id);
        }
        Ok(Solution {
            chosen,
            total_weight,
        })
    }

    /// Solution from positional indices into [`Self::sets`].
    pub fn solution_from_indices<I>(&self, indices: I) -> Solution
    where
        I: IntoIterator<Item = usize>,
    {
        let mut chosen: Vec<usize> = indices.into_iter().collect();
        chosen.sort_unstable();
        chosen.dedup();
        let total_weight = chosen.iter().map(|&i| self.sets[i].weight).sum();
        Solution {
            chosen: chosen.into_iter().map(|i| self.sets[i].id).collect(),
            total_weight,
        }
    }

    /// The solution choosing every set.
    pub fn all_sets(&self) -> Solution {
        self.solution_from_indices(0..self.sets.len())
    }

    /// SHA-256 over a canonical byte encoding of universe, sets and
    /// parameter. Labels and provenance are excluded.
    pub fn content_hash(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(b"setcover/v1");
        hasher.update((self.universe_size as u64).to_le_bytes());
        hasher.update(encode_parameter(self.parameter_k));
        hasher.update((self.sets.len() as u64).to_le_bytes());
        for set in &self.sets {
            hasher.update(set.id.0.to_le_bytes());
            hasher.update(set.weight.to_le_bytes());
            hasher.update((set.elements.len() as u64).to_le_bytes());
            for &e in &set.elements {
                hasher.update((e as u64).to_le_bytes());
            }
        }
        hex::encode(hasher.finalize())
    }
}

fn encode_parameter(k: Option<u64>) -> [u8; 9] {
    let mut out = [0u8; 9];
    if let Some(k) = k {
        out[0] = 1;
        out[1..].copy_from_slice(&k.to_le_bytes());
    }
    out
}

/// A duplicate-free choice of sets with its total weight.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Solution {
    chosen: Vec<SetId>,
    total_weight: u64,
}

impl Solution {
    pub fn chosen(&self) -> &[SetId] {
        &self.chosen
    }

    pub fn total_weight(&self) -> u64 {
        self.total_weight
    }

    pub fn len(&self) -> usize {
        self.chosen.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chosen.is_empty()
    }
}

/// Outcome of [`verify_cover`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverCheck {
    pub covered: bool,
    pub total_weight: u64,
    pub uncovered_elements: Vec<usize>,
}

/// Checks whether `solution` covers the universe of `instance`. The total
/// weight is recomputed from the instance, not trusted from the solution.
pub fn verify_cover(
    instance: &SetCoverInstance,
    solution: &Solution,
) -> Result<CoverCheck, InstanceError> {
    let mut covered = FixedBitSet::with_capacity(instance.universe_size());
    let mut total_weight = 0u64;
    for &id in solution.chosen() {
        let set = instance.set(id).ok_or(InstanceError::UnknownSetId(id))?;
        total_weight += set.weight;
        for &e in &set.elements {
            covered.insert(e);
        }
    }
    let uncovered_elements: Vec<usize> = covered.zeroes().collect();
    Ok(CoverCheck {
        covered: uncovered_elements.is_empty(),
        total_weight,
        uncovered_elements,
    })
}

/// An undirected graph without loops or parallel edges. Edges are stored
/// normalized as `(u, v)` with `u < v`, sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    parameter_k: Option<u64>,
    provenance: Vec<ProvenanceStep>,
}

impl SimpleGraph {
    pub fn new(
        vertex_count: usize,
        edges: Vec<(usize, usize)>,
        parameter_k: Option<u64>,
    ) -> Result<Self, InstanceError> {
        if parameter_k == Some(0) {
            return Err(InstanceError::ZeroParameter);
        }
        let mut normalized = Vec::with_capacity(edges.len());
        for (u, v) in edges {
            if u == v {
                return Err(InstanceError::SelfLoop(u));
            }
            if u >= vertex_count || v >= vertex_count {
                return Err(InstanceError::VertexOutOfRange { u, v, vertex_count });
            }
            normalized.push((u.min(v), u.max(v)));
        }
        normalized.sort_unstable();
        for pair in normalized.windows(2) {
            if pair[0] == pair[1] {
                return Err(InstanceError::DuplicateEdge(pair[0].0, pair[0].1));
            }
        }
        Ok(SimpleGraph {
            vertex_count,
            edges: normalized,
            parameter_k,
            provenance: Vec::new(),
        })
    }

    /// Complete graph on `n` vertices.
    pub fn complete(n: usize) -> Self {
        let edges = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        SimpleGraph::new(n, edges, None).expect("complete graph is simple")
    }

    /// Path `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Self {
        let edges = (1..n).map(|v| (v - 1, v)).collect();
        SimpleGraph::new(n, edges, None).expect("path is simple")
    }

    pub fn with_provenance(mut self, steps: Vec<ProvenanceStep>) -> Self {
        self.provenance = steps;
        self
    }

    pub fn record_step(
        mut self,
        reduction: &str,
        parameters: BTreeMap<String, String>,
        input_hash: String,
    ) -> Self {
        let output_hash = self.content_hash();
        self.provenance.push(ProvenanceStep {
            reduction: reduction.to_string(),
            parameters,
            input_hash,
            output_hash,
        });
        self
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn parameter_k(&self) -> Option<u64> {
        self.parameter_k
    }

    pub fn provenance(&self) -> &[ProvenanceStep] {
        &self.provenance
    }

    /// One adjacency bitset per vertex.
    pub fn adjacency(&self) -> Vec<FixedBitSet> {
        let mut rows = vec![FixedBitSet::with_capacity(self.vertex_count); self.vertex_count];
        for &(u, v) in &self.edges {
            rows[u].insert(v);
            rows[v].insert(u);
        }
        rows
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.binary_search(&(u.min(v), u.max(v))).is_ok()
    }

    /// Whether `vertices` are pairwise distinct and pairwise adjacent.
    pub fn is_clique(&self, vertices: &[usize]) -> bool {
        vertices.iter().enumerate().all(|(i, &u)| {
            vertices[i + 1..]
                .iter()
                .all(|&v| u != v && self.has_edge(u, v))
        })
    }

    /// Number of triangles, counted by intersecting adjacency rows.
    pub fn triangle_count(&self) -> usize {
        let rows = self.adjacency();
        self.edges
            .iter()
            .map(|&(u, v)| {
                rows[u]
                    .intersection(&rows[v])
                    .filter(|&w| w > v)
                    .count()
            })
            .sum()
    }

    pub fn content_hash(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(b"graph/v1");
        hasher.update((self.vertex_count as u64).to_le_bytes());
        hasher.update(encode_parameter(self.parameter_k));
        hasher.update((self.edges.len() as u64).to_le_bytes());
        for &(u, v) in &self.edges {
            hasher.update((u as u64).to_le_bytes());
            hasher.update((v as u64).to_le_bytes());
        }
        hex::encode(hasher.finalize())
    }
}
