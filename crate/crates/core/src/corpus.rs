//! Committed closed diagrams used by the tests, the calibration search and
//! the CLI (`moykr corpus`). The `.web` sources live in `corpus/`.

use crate::diagram::Diagram;

pub struct CorpusEntry {
    pub name: &'static str,
    pub source: &'static str,
}

impl CorpusEntry {
    pub fn diagram(&self) -> Diagram {
        Diagram::parse(self.source).unwrap_or_else(|e| panic!("corpus entry {}: {e}", self.name))
    }
}

macro_rules! entries {
    ($($name:literal),* $(,)?) => {
        &[$(CorpusEntry { name: $name, source: include_str!(concat!("../corpus/", $name, ".web")) }),*]
    };
}

pub const ENTRIES: &[CorpusEntry] = entries![
    "circle_ccw",
    "circle_cw",
    "single_vertex",
    "curl_ccw",
    "curl_cw",
    "bigon",
    "bigon_nested",
    "square_a",
    "square_b",
    "bigon_and_circle",
    "hecke_121_trace",
    "hecke_212_mixed",
];

pub fn get(name: &str) -> Option<Diagram> {
    ENTRIES
        .iter()
        .find(|e| e.name == name)
        .map(CorpusEntry::diagram)
}

/// Every committed diagram, with its name.
pub fn all() -> Vec<(&'static str, Diagram)> {
    ENTRIES.iter().map(|e| (e.name, e.diagram())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_entries_parse() {
        let all = all();
        assert_eq!(all.len(), ENTRIES.len());
        assert!(all.iter().all(|(_, d)| d.num_vertices() <= 3));
    }

    #[test]
    fn expected_rotation_numbers() {
        let r = |n: &str| get(n).unwrap().rotation();
        assert_eq!(r("circle_ccw"), 1);
        assert_eq!(r("circle_cw"), -1);
        assert_eq!(r("single_vertex"), 0);
        assert_eq!(r("curl_ccw"), 2);
        assert_eq!(r("curl_cw"), -2);
        assert_eq!(r("bigon"), 0);
        assert_eq!(r("square_a"), -2);
        assert_eq!(r("square_b"), 1);
        assert_eq!(r("bigon_and_circle"), -1);
        assert_eq!(r("hecke_121_trace"), -3);
        assert_eq!(r("hecke_212_mixed"), -1);
    }
}
