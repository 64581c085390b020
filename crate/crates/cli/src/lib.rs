//! Command-line driver for the `gapforge` reductions.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or precondition
//! error, 3 search budget exhausted.

pub mod commands;
pub mod file;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "gapforge", version, about = "Gap-producing SetCover reductions and their oracles")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a random SetCover instance or graph (ChaCha8 seeded by --seed).
    Gen(GenArgs),
    /// Apply a reduction to an instance file.
    Reduce {
        #[command(subcommand)]
        reduction: Reduction,
    },
    /// Check a threshold graph, a gap, or an instance against the oracles.
    Verify(VerifyArgs),
    /// Run one solver and print its report.
    Solve(SolveArgs),
    /// Compute the parameters of a pipeline preset.
    Preset(PresetArgs),
    /// Write a set system in another format.
    Export(ExportArgs),
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Generate a graph instead of a set system.
    #[arg(long)]
    pub graph: bool,
    #[arg(long, default_value_t = 8)]
    pub elements: usize,
    #[arg(long, default_value_t = 6)]
    pub sets: usize,
    #[arg(long, default_value_t = 8)]
    pub vertices: usize,
    /// Membership (or edge) probability.
    #[arg(long, default_value_t = 0.5)]
    pub density: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Comma-separated weights; each set draws one uniformly.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub weights: Vec<u64>,
    /// Parameter `k` stored in the file.
    #[arg(long)]
    pub k: Option<u64>,
    /// Add every element no set covers to a random set.
    #[arg(long)]
    pub ensure_cover: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Reed–Solomon code feeding a threshold graph.
#[derive(Debug, Clone, Args)]
pub struct GraphArgs {
    /// Block length.
    #[arg(long)]
    pub m: usize,
    /// Number of A-parts.
    #[arg(long)]
    pub k: usize,
    /// Prime alphabet size; defaults to the least prime `>= m` whose
    /// `r`-th power is at least the number of sets (when known).
    #[arg(long)]
    pub p: Option<u32>,
    /// Message length.
    #[arg(long, default_value_t = 2)]
    pub r: usize,
    #[arg(long, default_value = "1/2")]
    pub epsilon: String,
}

#[derive(Debug, Subcommand)]
pub enum Reduction {
    /// Compose an unweighted instance with an RS threshold graph.
    Compose {
        #[arg(long)]
        input: PathBuf,
        /// Tuple arity.
        #[arg(long)]
        c: usize,
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replace weights {1, w} by slot replication.
    RemoveWeights {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// k-Clique to SetCover with a small universe.
    CliqueToSetcover {
        #[arg(long)]
        input: PathBuf,
        /// Clique size; defaults to the graph file's `k`.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// k-SetCover to k'-Clique.
    SetcoverToClique {
        #[arg(long)]
        input: PathBuf,
        /// Cover size; defaults to the instance file's `k`.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyMode {
    /// Covering and threshold properties of an RS threshold graph.
    ThresholdGraph,
    /// Completeness or soundness of ORIGINAL composed into REDUCED.
    Gap,
    /// Cross-check the solvers on one instance.
    Oracle,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub mode: VerifyMode,
    /// Input files: none for threshold-graph, ORIGINAL REDUCED for gap, one
    /// file for oracle.
    pub files: Vec<PathBuf>,
    /// Block length (threshold-graph mode).
    #[arg(long)]
    pub m: Option<usize>,
    /// Number of A-parts (threshold-graph mode).
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub p: Option<u32>,
    #[arg(long, default_value_t = 2)]
    pub r: usize,
    #[arg(long, default_value = "1/2")]
    pub epsilon: String,
    /// Remove an edge, as `a_part:codeword:b_part:b_index`.
    #[arg(long = "delete-edge")]
    pub delete_edges: Vec<String>,
    /// Remove a B-vertex, as `part:index`.
    #[arg(long = "delete-b")]
    pub delete_b: Vec<String>,
    /// Largest |X| in the threshold sweep; defaults to floor(h).
    #[arg(long)]
    pub sweep_max: Option<usize>,
    #[arg(long)]
    pub no_sweep: bool,
    #[command(flatten)]
    pub budget: BudgetArgs,
}

#[derive(Debug, Clone, Args)]
pub struct BudgetArgs {
    /// Wall-time limit of each search.
    #[arg(long, env = "GAPFORGE_BUDGET_MS", default_value_t = 300_000)]
    pub budget_ms: u64,
    /// Search nodes per run.
    #[arg(long, default_value_t = 200_000_000)]
    pub max_nodes: u64,
    /// Largest weight bound to certify.
    #[arg(long, default_value_t = u64::MAX)]
    pub max_weight: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Exact,
    Greedy,
    BlockGreedy,
    Clique,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub file: PathBuf,
    #[arg(long, value_enum, default_value = "exact")]
    pub algo: Algo,
    /// `k` for block-greedy and clique; defaults to the file's `k`.
    #[arg(long)]
    pub k: Option<usize>,
    /// `T` for block-greedy.
    #[arg(long)]
    pub t: Option<usize>,
    #[command(flatten)]
    pub budget: BudgetArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Theorem {
    W2,
    W1,
    Derand,
}

#[derive(Debug, Args)]
pub struct PresetArgs {
    #[arg(long, value_enum)]
    pub theorem: Theorem,
    /// Instance size, e.g. `1000000`, `10^6` or `2^256`.
    #[arg(long)]
    pub n: String,
    #[arg(long)]
    pub k: u64,
    /// Gap constant of the `w2` pipeline.
    #[arg(long, default_value_t = 2)]
    pub c0: u64,
    /// Lower bound on `log n / log log n` for the `w1` pipeline.
    #[arg(long, default_value_t = gapforge::reductions::DEFAULT_W1_FLOOR)]
    pub floor: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExportFormat {
    Dimacs,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    pub file: PathBuf,
    #[arg(long, value_enum, default_value = "dimacs")]
    pub format: ExportFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
