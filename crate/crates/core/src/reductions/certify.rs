use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::compose::Composed;
use super::presets::soundness_floor;
use super::ReductionError;
use crate::instance::{verify_cover, SetCoverInstance, Solution};
use crate::math::{format_rational, Rational};
use crate::solvers::{certify_no_cover_at_most, exact_weighted_opt, BoundCertificate, ExactReport, SolverBudget};
use crate::threshold::ThresholdGraph;

/// The two weights separating yes- from no-instances of a composition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GapThresholds {
    pub m: usize,
    pub k: usize,
    pub c: usize,
    pub h_squared: String,
    pub epsilon: String,
    /// `2m`.
    pub completeness: u64,
    /// `⌊min{mh/k, (1-ε)mc}⌋`: no-instances have no cover of this weight.
    pub soundness: u64,
}

fn big(q: &Rational) -> BigRational {
    BigRational::new(BigInt::from(*q.numer()), BigInt::from(*q.denom()))
}

impl GapThresholds {
    pub fn new(graph: &ThresholdGraph, c: usize) -> Self {
        let p = graph.params();
        let soundness = soundness_floor(&BigUint::from(p.m), p.k as u64, &big(&p.h_squared), &big(&p.epsilon), c as u64);
        GapThresholds {
            m: p.m,
            k: p.k,
            c,
            h_squared: format_rational(&p.h_squared),
            epsilon: format_rational(&p.epsilon),
            completeness: 2 * p.m as u64,
            soundness: soundness.to_u64().unwrap_or(u64::MAX),
        }
    }

    pub fn is_gap(&self) -> bool {
        self.soundness >= self.completeness
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompletenessCheck {
    pub source_cover: Solution,
    pub witness: Solution,
    pub witness_weight: u64,
    pub covers: bool,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SoundnessCheck {
    pub bound: u64,
    pub certificate: BoundCertificate,
    pub passed: bool,
}

/// JSON-ready outcome of [`certify_gap`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GapReport {
    pub original_hash: String,
    pub reduced_hash: String,
    pub provenance_ok: bool,
    pub thresholds: GapThresholds,
    pub original_opt: ExactReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub completeness: Option<CompletenessCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub soundness: Option<SoundnessCheck>,
    /// Checks that ran out of budget or could not start.
    pub unverified: Vec<String>,
    pub passed: bool,
    pub wall_time_ms: u128,
}

/// Checks whichever side applies to `original`: for `OPT ≤ k` the assembled
/// `2m`-weight witness must cover the composed instance, otherwise a
/// weight-bounded search must refute every cover of weight `≤` the soundness
/// threshold. The composed instance must record `original` as its input.
pub fn certify_gap(
    original: &SetCoverInstance,
    reduced: &Composed,
    graph: &ThresholdGraph,
    budget: &SolverBudget,
) -> Result<GapReport, ReductionError> {
    let start = Instant::now();
    let thresholds = GapThresholds::new(graph, reduced.layout.c);
    let original_hash = original.content_hash();
    let provenance_ok = reduced
        .instance
        .provenance()
        .last()
        .is_some_and(|step| step.reduction == "compose" && step.input_hash == original_hash);
    let original_opt = exact_weighted_opt(original, budget);
    let mut unverified = Vec::new();
    let mut completeness = None;
    let mut soundness = None;
    match original_opt.optimum() {
        Some(opt) if opt <= thresholds.k as u64 => {
            let cover = match &original_opt.outcome {
                crate::solvers::ExactOutcome::Optimal { witness, .. } => witness.clone(),
                _ => unreachable!("optimum() is Some"),
            };
            let witness = reduced.completeness_witness(original, graph, &cover)?;
            let check = verify_cover(&reduced.instance, &witness)?;
            let witness_weight = witness.total_weight();
            completeness = Some(CompletenessCheck {
                source_cover: cover,
                witness,
                witness_weight,
                covers: check.covered,
                passed: check.covered && witness_weight == thresholds.completeness,
            });
        }
        Some(_) => {
            let certificate = certify_no_cover_at_most(&reduced.instance, thresholds.soundness, budget);
            if let BoundCertificate::Exhausted { nodes } = certificate {
                unverified.push(format!("soundness search stopped after {nodes} nodes"));
            }
            soundness = Some(SoundnessCheck {
                bound: thresholds.soundness,
                passed: certificate.certified(),
                certificate,
            });
        }
        None => unverified.push("OPT of the original instance".to_string()),
    }
    if !provenance_ok {
        unverified.push("provenance: the composed instance was not built from this input".to_string());
    }
    let passed = provenance_ok
        && unverified.is_empty()
        && completeness.as_ref().is_none_or(|c| c.passed)
        && soundness.as_ref().is_none_or(|s| s.passed);
    Ok(GapReport {
        original_hash,
        reduced_hash: reduced.instance.content_hash(),
        provenance_ok,
        thresholds,
        original_opt,
        completeness,
        soundness,
        unverified,
        passed,
        wall_time_ms: start.elapsed().as_millis(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ecc::{enumerate_codebook, CodeSpec};
    use crate::limits::Limits;
    use crate::reductions::compose;
    use crate::threshold::build_threshold_graph;

    fn graph() -> ThresholdGraph {
        let limits = Limits::default();
        let book = enumerate_codebook(&CodeSpec::reed_solomon(5, 2, 4).unwrap(), &limits).unwrap();
        build_threshold_graph(book, 2, Rational::new(1, 2), &limits).unwrap()
    }

    #[test]
    fn thresholds_for_the_desk_graph() {
        let t = GapThresholds::new(&graph(), 2);
        assert_eq!(t.completeness, 8);
        // min{4·√2/2, 4} = 2.83
        assert_eq!(t.soundness, 2);
        assert_eq!(t.h_squared, "2");
        assert!(!t.is_gap());
    }

    #[test]
    fn yes_instance_passes_completeness() {
        let g = graph();
        let gamma = SetCoverInstance::unweighted(3, vec![vec![0, 1], vec![2], vec![0], vec![1]], Some(2)).unwrap();
        let composed = compose(&gamma, &g, 2, &Limits::default()).unwrap();
        let report = certify_gap(&gamma, &composed, &g, &SolverBudget::default()).unwrap();
        assert!(report.provenance_ok);
        let c = report.completeness.as_ref().unwrap();
        assert_eq!(c.witness_weight, 8);
        assert!(c.covers);
        assert!(report.passed);
        assert!(report.soundness.is_none());
    }

    #[test]
    fn no_instance_passes_soundness() {
        let g = graph();
        let gamma = SetCoverInstance::unweighted(3, vec![vec![0], vec![1], vec![2], vec![0]], Some(2)).unwrap();
        let composed = compose(&gamma, &g, 2, &Limits::default()).unwrap();
        let report = certify_gap(&gamma, &composed, &g, &SolverBudget::default()).unwrap();
        let s = report.soundness.as_ref().unwrap();
        assert_eq!(s.bound, 2);
        assert!(s.passed, "{:?}", s.certificate);
        assert!(report.passed);
    }

    #[test]
    fn mismatched_input_fails_provenance() {
        let g = graph();
        let gamma = SetCoverInstance::unweighted(3, vec![vec![0, 1], vec![2], vec![0], vec![1]], Some(2)).unwrap();
        let other = SetCoverInstance::unweighted(3, vec![vec![0, 1, 2], vec![2], vec![0], vec![1]], Some(2)).unwrap();
        let composed = compose(&gamma, &g, 2, &Limits::default()).unwrap();
        let report = certify_gap(&other, &composed, &g, &SolverBudget::default()).unwrap();
        assert!(!report.provenance_ok);
        assert!(!report.passed);
    }
}
