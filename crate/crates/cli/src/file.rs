//! The JSON instance format and atomic file output.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use gapforge::{Labels, ProvenanceStep, SetCoverInstance, SimpleGraph, WeightedSet};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetCoverFile {
    pub universe_size: usize,
    pub sets: Vec<WeightedSet>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Labels>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub provenance: Vec<ProvenanceStep>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    pub vertex_count: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub provenance: Vec<ProvenanceStep>,
}

/// On-disk document; `kind` selects the variant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum InstanceFile {
    Setcover(SetCoverFile),
    Graph(GraphFile),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    SetCover(SetCoverInstance),
    Graph(SimpleGraph),
}

impl Instance {
    pub fn set_cover(self) -> Result<SetCoverInstance> {
        match self {
            Instance::SetCover(inst) => Ok(inst),
            Instance::Graph(_) => bail!("expected a setcover instance, found a graph"),
        }
    }

    pub fn graph(self) -> Result<SimpleGraph> {
        match self {
            Instance::Graph(g) => Ok(g),
            Instance::SetCover(_) => bail!("expected a graph, found a setcover instance"),
        }
    }

    pub fn content_hash(&self) -> String {
        match self {
            Instance::SetCover(inst) => inst.content_hash(),
            Instance::Graph(g) => g.content_hash(),
        }
    }
}

fn check_provenance(steps: &[ProvenanceStep], hash: &str) -> Result<()> {
    if let Some(last) = steps.last() {
        if last.output_hash != hash {
            bail!(
                "provenance hash mismatch: last step `{}` recorded {}, content hashes to {hash}",
                last.reduction,
                last.output_hash
            );
        }
    }
    Ok(())
}

impl InstanceFile {
    /// Validates the document and checks its recorded output hash.
    pub fn into_instance(self) -> Result<Instance> {
        match self {
            InstanceFile::Setcover(f) => {
                let mut inst = SetCoverInstance::new(f.universe_size, f.sets, f.k)?;
                if let Some(labels) = f.labels {
                    inst = inst.with_labels(labels)?;
                }
                check_provenance(&f.provenance, &inst.content_hash())?;
                Ok(Instance::SetCover(inst.with_provenance(f.provenance)))
            }
            InstanceFile::Graph(f) => {
                let edges = f.edges.into_iter().map(|[u, v]| (u, v)).collect();
                let g = SimpleGraph::new(f.vertex_count, edges, f.k)?;
                check_provenance(&f.provenance, &g.content_hash())?;
                Ok(Instance::Graph(g.with_provenance(f.provenance)))
            }
        }
    }
}

impl From<&SetCoverInstance> for InstanceFile {
    fn from(inst: &SetCoverInstance) -> Self {
        InstanceFile::Setcover(SetCoverFile {
            universe_size: inst.universe_size(),
            sets: inst.sets().to_vec(),
            k: inst.parameter_k(),
            labels: inst.labels().cloned(),
            provenance: inst.provenance().to_vec(),
        })
    }
}

impl From<&SimpleGraph> for InstanceFile {
    fn from(g: &SimpleGraph) -> Self {
        InstanceFile::Graph(GraphFile {
            vertex_count: g.vertex_count(),
            edges: g.edges().iter().map(|&(u, v)| [u, v]).collect(),
            k: g.parameter_k(),
            provenance: g.provenance().to_vec(),
        })
    }
}

impl From<&Instance> for InstanceFile {
    fn from(inst: &Instance) -> Self {
        match inst {
            Instance::SetCover(s) => s.into(),
            Instance::Graph(g) => g.into(),
        }
    }
}

pub fn parse(text: &str) -> Result<Instance> {
    let file: InstanceFile = serde_json::from_str(text).context("malformed instance file")?;
    file.into_instance()
}

pub fn to_json(inst: &Instance) -> String {
    let mut text = serde_json::to_string_pretty(&InstanceFile::from(inst)).expect("instances serialize");
    text.push('\n');
    text
}

pub fn load(path: &Path) -> Result<Instance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse(&text).with_context(|| format!("loading {}", path.display()))
}

/// Writes `text` to `path` through a temporary file in the same directory,
/// or to stdout when `path` is `None`.
pub fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
        Some(path) => {
            let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
            let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("creating a file in {}", dir.display()))?;
            tmp.write_all(text.as_bytes())?;
            tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
        }
    }
    Ok(())
}

/// One line per set: `weight e_1 … e_r 0` with 1-based elements, after a
/// `p setcover |U| |S|` header.
pub fn to_dimacs(inst: &SetCoverInstance) -> String {
    let mut out = format!("c gapforge set system\np setcover {} {}\n", inst.universe_size(), inst.len());
    for set in inst.sets() {
        out.push_str(&set.weight.to_string());
        for &e in &set.elements {
            out.push(' ');
            out.push_str(&(e + 1).to_string());
        }
        out.push_str(" 0\n");
    }
    out
}
