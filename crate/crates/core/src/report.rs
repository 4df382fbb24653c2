//! JSON report schema shared by every CLI subcommand.
//!
//! Struct fields are declared in alphabetical order and numeric-keyed maps
//! serialize in ascending numeric order, so the output is key-sorted and
//! byte-stable for fixed inputs.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::diagram::{Diagram, RotationNumber};
use crate::engine::{ChainRecord, HomologyTable, Summand};
use crate::laurent::LaurentPoly;
use crate::relations::RelationCheck;

/// An exact integer written as a bare JSON number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigNum(pub BigInt);

impl Serialize for BigNum {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let num: serde_json::Number = self
            .0
            .to_string()
            .parse()
            .map_err(serde::ser::Error::custom)?;
        num.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BigNum {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let num = serde_json::Number::deserialize(deserializer)?;
        num.to_string()
            .parse()
            .map(BigNum)
            .map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramSummary {
    pub circles: usize,
    pub components: usize,
    pub edges: usize,
    pub vertices: usize,
}

impl From<&Diagram> for DiagramSummary {
    fn from(d: &Diagram) -> Self {
        Self {
            circles: d.circles().count(),
            components: d.num_components(),
            edges: d.num_edges(),
            vertices: d.num_vertices(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabellingJson {
    pub bracket: i64,
    pub labels: BTreeMap<usize, u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummandJson {
    pub labels: BTreeMap<usize, u8>,
    pub left: LaurentPoly,
    pub left_parity: u8,
    pub right: LaurentPoly,
    pub right_parity: u8,
    pub sigma: i64,
}

impl From<&Summand> for SummandJson {
    fn from(s: &Summand) -> Self {
        Self {
            labels: s.labelling.as_map(),
            left: s.left_poly.clone(),
            left_parity: s.left_parity,
            right: s.right_poly.clone(),
            right_parity: s.right_parity,
            sigma: s.sigma,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainJson {
    pub betas: Vec<i64>,
    pub delta: i64,
    pub labellings: Vec<BTreeMap<usize, u8>>,
    pub rotations: Vec<i64>,
}

impl From<&ChainRecord> for ChainJson {
    fn from(c: &ChainRecord) -> Self {
        Self {
            betas: c.steps.iter().map(|s| s.beta).collect(),
            delta: c.delta,
            labellings: c.labellings.iter().map(|f| f.as_map()).collect(),
            rotations: c.steps.iter().map(|s| s.rotation).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyJson {
    /// Degree -> dimension, as a polynomial map with nonnegative coefficients.
    pub dims: LaurentPoly,
    pub parity: u8,
    pub total: BigNum,
}

impl From<&HomologyTable> for HomologyJson {
    fn from(h: &HomologyTable) -> Self {
        Self {
            dims: h.poincare_polynomial(),
            parity: h.parity,
            total: BigNum(h.total_dimension().into()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationJson {
    pub closure: String,
    pub lhs: LaurentPoly,
    pub n: u32,
    pub passed: bool,
    pub relation: u8,
    pub rhs: LaurentPoly,
}

impl From<&RelationCheck> for RelationJson {
    fn from(r: &RelationCheck) -> Self {
        Self {
            closure: r.closure.clone(),
            lhs: r.lhs.clone(),
            n: r.n,
            passed: r.passed,
            relation: r.relation,
            rhs: r.rhs.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CalibrationJson {
    pub accepted: Vec<String>,
    pub candidates: usize,
    pub selected: Option<String>,
}

/// Top-level report; absent sections are omitted.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub calibration: Option<CalibrationJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chains: Option<Vec<ChainJson>>,
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagram: Option<DiagramSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub homology: Option<HomologyJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input_digest: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labellings: Option<Vec<LabellingJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polynomial: Option<LaurentPoly>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relations: Option<Vec<RelationJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotation: Option<RotationNumber>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub summands: Option<Vec<SummandJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Self {
            command: command.into(),
            ..Self::default()
        }
    }
}

/// Hex SHA-256 of the input bytes.
pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_keys_are_sorted() {
        let mut r = Report::new("eval --n 3");
        r.n = Some(3);
        r.polynomial = Some(LaurentPoly::quantum_int(3));
        r.input_digest = Some(digest(b""));
        let s = serde_json::to_string(&r).unwrap();
        let cmd = s.find("\"command\"").unwrap();
        let dig = s.find("\"input_digest\"").unwrap();
        let n = s.find("\"n\"").unwrap();
        let poly = s.find("\"polynomial\"").unwrap();
        assert!(cmd < dig && dig < n && n < poly);
        assert!(s.contains(r#""polynomial":{"-2":1,"0":1,"2":1}"#));
        let back: Report = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn digest_is_sha256() {
        assert_eq!(
            digest(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
