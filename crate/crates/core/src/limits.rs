/// Hard caps on every exhaustive computation in the crate.
///
/// Nothing here samples or approximates: an operation that would exceed one
/// of these limits refuses with a budget error instead.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of codewords materialized or compared pairwise.
    pub max_codewords: u64,
    /// Maximum size `|Σ|^k` of a single B-part of a threshold graph.
    pub max_b_part: u64,
    /// Maximum universe size of a reduction output.
    pub max_universe: u64,
    /// Maximum number of set/element incidences of a reduction output.
    pub max_incidences: u64,
    /// Maximum number of elementary checks in an exhaustive property sweep.
    pub max_sweep: u64,
    /// Maximum number of vertices of a reduction output graph.
    pub max_vertices: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_codewords: 100_000,
            max_b_part: 1 << 20,
            max_universe: 5_000_000,
            max_incidences: 50_000_000,
            max_sweep: 200_000_000,
            max_vertices: 20_000,
        }
    }
}
