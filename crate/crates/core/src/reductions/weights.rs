use std::collections::BTreeMap;

use super::ReductionError;
use crate::instance::{SetCoverInstance, WeightedSet};
use crate::limits::Limits;

/// Turns an instance with weights `{1, ω}` into an unweighted one with the
/// same optimum, by slot replication: the universe becomes `U × [ω]`, a
/// weight-1 set covers its elements in every slot, and a weight-ω set
/// becomes `ω` copies, copy `j` covering its elements in slot `j` only.
///
/// Element `(u, j)` has index `u·ω + j`. Output sets are numbered in input
/// order, a heavy set contributing its copies consecutively. An instance
/// whose only weight is `ω ≥ 2` is treated as having no light sets; a
/// unit-weight instance passes through unchanged.
pub fn remove_weights(gamma: &SetCoverInstance, limits: &Limits) -> Result<SetCoverInstance, ReductionError> {
    let weights: Vec<u64> = gamma.distinct_weights().into_iter().collect();
    let omega = match weights.as_slice() {
        [] | [1] => 1,
        [w] => *w,
        [1, w] => *w,
        _ => return Err(ReductionError::UnsupportedWeights(weights)),
    };
    let mut parameters = BTreeMap::new();
    parameters.insert("omega".to_string(), omega.to_string());
    if omega == 1 {
        return Ok(gamma
            .clone()
            .record_step("remove-weights", parameters, gamma.content_hash()));
    }
    let universe = gamma.universe_size() as u128 * omega as u128;
    if universe > limits.max_universe as u128 {
        return Err(ReductionError::Budget {
            what: "slot-replicated universe |U|·ω",
            count: universe,
            limit: limits.max_universe,
        });
    }
    let omega_usize = omega as usize;
    let mut sets = Vec::new();
    let mut incidences = 0u128;
    for set in gamma.sets() {
        if set.weight == 1 {
            let elements = set
                .elements
                .iter()
                .flat_map(|&u| (0..omega_usize).map(move |j| u * omega_usize + j))
                .collect::<Vec<_>>();
            incidences += elements.len() as u128;
            sets.push(WeightedSet::new(sets.len() as u64, 1, elements));
        } else {
            for j in 0..omega_usize {
                let elements = set.elements.iter().map(|&u| u * omega_usize + j).collect::<Vec<_>>();
                incidences += elements.len() as u128;
                sets.push(WeightedSet::new(sets.len() as u64, 1, elements));
            }
        }
        if incidences > limits.max_incidences as u128 {
            return Err(ReductionError::Budget {
                what: "slot-replicated incidences",
                count: incidences,
                limit: limits.max_incidences,
            });
        }
    }
    Ok(SetCoverInstance::new(universe as usize, sets, gamma.parameter_k())?
        .with_provenance(gamma.provenance().to_vec())
        .record_step("remove-weights", parameters, gamma.content_hash()))
}
