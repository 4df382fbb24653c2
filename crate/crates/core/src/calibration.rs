//! Search over vertex interaction tables.
//!
//! The case-to-value assignment for the four mixed vertex patterns cannot be
//! derived from the slice model alone, so every one of the `3^4` candidate
//! tables is run against split consistency on a small probe corpus plus the
//! builtin relation instances. A table survives only if all checks pass.

use rayon::prelude::*;

use crate::corpus;
use crate::diagram::Diagram;
use crate::engine::Engine;
use crate::labelling::InteractionTable;
use crate::relations::{builtin_instances, check_relation};

/// Splits `(n, m)` compared against `P_{n+m}` for every probe diagram.
pub const PROBE_SPLITS: [(u32, u32); 3] = [(1, 1), (1, 2), (2, 1)];

/// Circles of both orientations, curl closures of both chiralities and the
/// closed bigon.
pub fn probe_corpus() -> Vec<Diagram> {
    [
        "circle_ccw",
        "circle_cw",
        "single_vertex",
        "curl_ccw",
        "curl_cw",
        "bigon",
    ]
    .iter()
    .map(|n| corpus::get(n).expect("probe diagram"))
    .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateResult {
    pub table: InteractionTable,
    pub split_failures: usize,
    pub relation_failures: usize,
}

impl CandidateResult {
    pub fn accepted(&self) -> bool {
        self.split_failures == 0 && self.relation_failures == 0
    }
}

#[derive(Clone, Debug)]
pub struct CalibrationReport {
    pub candidates: Vec<CandidateResult>,
}

impl CalibrationReport {
    pub fn survivors(&self) -> Vec<InteractionTable> {
        self.candidates
            .iter()
            .filter(|c| c.accepted())
            .map(|c| c.table)
            .collect()
    }

    pub fn accepts(&self, table: &InteractionTable) -> bool {
        self.candidates
            .iter()
            .any(|c| c.table == *table && c.accepted())
    }

    /// The surviving table with the expected {0, 0, +1, -1} antisymmetric
    /// shape, if exactly one exists.
    pub fn selected(&self) -> Option<InteractionTable> {
        let shaped: Vec<_> = self
            .survivors()
            .into_iter()
            .filter(|t| t.has_expected_shape())
            .collect();
        match shaped.as_slice() {
            [only] => Some(*only),
            _ => None,
        }
    }
}

/// Runs every check for one table; `n_max` bounds the relation suite.
pub fn evaluate_table(table: InteractionTable, probe: &[Diagram], n_max: u32) -> CandidateResult {
    let engine = Engine::new(table);
    let split_failures = probe
        .iter()
        .flat_map(|d| PROBE_SPLITS.iter().map(move |&(n, m)| (d, n, m)))
        .filter(|&(d, n, m)| engine.eval_p_split(d, n, m) != engine.eval_p(d, n + m))
        .count();
    let instances = builtin_instances();
    let relation_failures = (1..=n_max)
        .flat_map(|n| instances.iter().map(move |i| (i, n)))
        .filter(|&(i, n)| !check_relation(&engine, i, n).passed)
        .count();
    CandidateResult {
        table,
        split_failures,
        relation_failures,
    }
}

pub fn calibrate(n_max: u32) -> CalibrationReport {
    let probe = probe_corpus();
    let candidates = InteractionTable::all_candidates()
        .into_par_iter()
        .map(|t| evaluate_table(t, &probe, n_max))
        .collect();
    CalibrationReport { candidates }
}
