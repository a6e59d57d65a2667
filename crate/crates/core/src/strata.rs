//! Counts of equation components of the loci of curves with a given cyclic
//! automorphism group, by distinct surviving types.

use serde::{Deserialize, Serialize};

use crate::types::{table, CyclicType, View};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumReport {
    pub d: u32,
    pub m: u64,
    pub component_types: Vec<CyclicType>,
    /// distinct types of exact order m; a lower bound for the number of
    /// equation components
    pub count: usize,
    pub es_irreducible_candidate: bool,
    pub annotation: Option<String>,
}

/// Deduplicated types of order exactly m whose families pass the reducibility
/// and degree filters, over every divisor of every case bound.
pub fn equation_components(d: u32, m: u64) -> StratumReport {
    let mut types: Vec<CyclicType> = table(d, View::Complete, true)
        .into_iter()
        .filter(|f| f.ctype.m == m)
        .map(|f| f.ctype)
        .collect();
    types.sort();
    types.dedup();
    let annotation = (m == d as u64 && types.len() > 1).then(|| {
        format!(
            "the type {m},(1,2) family has coordinate symmetries beyond the cyclic group; \
             its members may lie in a larger stratum, so the count is not certified sharp"
        )
    });
    StratumReport {
        d,
        m,
        count: types.len(),
        es_irreducible_candidate: types.len() == 1,
        component_types: types,
        annotation,
    }
}
