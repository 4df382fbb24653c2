//! The composition product: `P_n` by recursion on `n`, split sums for any
//! `n + m`, summand decompositions, nested chains with their degree shifts,
//! and graded-dimension tables.

use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint};
use parking_lot::RwLock;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{Diagram, DiagramKey};
use crate::labelling::{
    bracket, enumerate_l, enumerate_labellings, sigma, InteractionTable, Label, Labelling,
};
use crate::laurent::LaurentPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("degree-shift formulas disagree on a chain: {first} vs {second}")]
    DeltaMismatch { first: i64, second: i64 },
    #[error("negative coefficient {coeff} at q^{degree}")]
    NegativeCoefficient { degree: i64, coeff: BigInt },
}

/// One term `q^σ · P_n(Γ_{f,1}) · P_m(Γ_{f,2})` of a split.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summand {
    pub labelling: Labelling,
    pub sigma: i64,
    pub left_poly: LaurentPoly,
    pub right_poly: LaurentPoly,
    pub left_parity: u8,
    pub right_parity: u8,
}

impl Summand {
    pub fn contribution(&self) -> LaurentPoly {
        (&self.left_poly * &self.right_poly).shift(self.sigma)
    }
}

/// One level of a chain: `β(Δ_i, Δ_{i+1})` and `r(Δ_{i+1})`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainStep {
    pub beta: i64,
    pub rotation: i64,
}

/// A nested sequence `Δ_1 ⊇ … ⊇ Δ_{n-1}` ending in a union of circles. Each
/// entry of `labellings` is the labelling of the previous graph selecting
/// the next one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainRecord {
    pub labellings: Vec<Labelling>,
    pub steps: Vec<ChainStep>,
    pub delta: i64,
}

/// Degree shift from the per-level terms `β + (n-i)·r(Δ_{i+1}) − (n-1-i)·r(Δ_i)`.
pub fn delta_stepwise(n: u32, base_rotation: i64, steps: &[ChainStep]) -> i64 {
    let n = n as i64;
    let mut prev = base_rotation;
    let mut total = 0;
    for (i, s) in steps.iter().enumerate() {
        let i = i as i64;
        total += s.beta + (n - i) * s.rotation - (n - 1 - i) * prev;
        prev = s.rotation;
    }
    total
}

/// Degree shift from the telescoped form `Σ(β + 2·r(Δ_{i+1})) − (n-1)·r(Γ)`.
pub fn delta_telescoped(n: u32, base_rotation: i64, steps: &[ChainStep]) -> i64 {
    let sum: i64 = steps.iter().map(|s| s.beta + 2 * s.rotation).sum();
    sum - (n as i64 - 1) * base_rotation
}

/// Graded dimensions `dim KR_n^i` and the single parity they live in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyTable {
    pub dims: BTreeMap<i64, BigUint>,
    pub parity: u8,
}

impl HomologyTable {
    pub fn total_dimension(&self) -> BigUint {
        self.dims.values().sum()
    }

    pub fn poincare_polynomial(&self) -> LaurentPoly {
        LaurentPoly::from_terms(self.dims.iter().map(|(d, c)| (*d, BigInt::from(c.clone()))))
    }
}

pub fn parity_of(r: i64) -> u8 {
    r.rem_euclid(2) as u8
}

struct Memo {
    cap: Option<usize>,
    map: RwLock<HashMap<(DiagramKey, u32), LaurentPoly>>,
}

impl Memo {
    fn get(&self, key: &(DiagramKey, u32)) -> Option<LaurentPoly> {
        self.map.read().get(key).cloned()
    }

    fn insert(&self, key: (DiagramKey, u32), value: LaurentPoly) -> LaurentPoly {
        let mut map = self.map.write();
        if self.cap.is_some_and(|cap| map.len() >= cap) {
            map.clear();
        }
        map.entry(key).or_insert(value).clone()
    }
}

/// Evaluator bound to one interaction table, with a shared memo of
/// `P_n(Δ)` keyed on `(canonical_key, n)`.
pub struct Engine {
    table: InteractionTable,
    circle_fast_path: bool,
    memo: Memo,
}

impl Default for Engine {
    fn default() -> Self {
        Self::new(InteractionTable::shipped())
    }
}

impl Engine {
    pub fn new(table: InteractionTable) -> Self {
        Self {
            table,
            circle_fast_path: true,
            memo: Memo {
                cap: None,
                map: RwLock::new(HashMap::new()),
            },
        }
    }

    /// Bounds the number of memo entries; the memo is emptied when full.
    pub fn with_memo_cap(mut self, cap: usize) -> Self {
        self.memo.cap = Some(cap.max(1));
        self
    }

    /// Disables the `[n]^k` shortcut for unions of `k` circles.
    pub fn without_circle_fast_path(mut self) -> Self {
        self.circle_fast_path = false;
        self
    }

    pub fn table(&self) -> &InteractionTable {
        &self.table
    }

    pub fn memo_len(&self) -> usize {
        self.memo.map.read().len()
    }

    /// `P_n(d)`: `P_1` is 1 on unions of circles and 0 otherwise; for `n ≥ 2`
    /// peel off one level with the `m = 1` composition product
    /// `P_n = Σ_{f ∈ L} q^{σ_{1,n-1}} P_{n-1}(Γ_{f,1})`.
    pub fn eval_p(&self, d: &Diagram, n: u32) -> LaurentPoly {
        assert!(n >= 1, "P_n needs n >= 1");
        if d.is_union_of_circles() {
            if n == 1 {
                return LaurentPoly::one();
            }
            if self.circle_fast_path {
                return LaurentPoly::quantum_int(n as i64).pow(d.num_edges() as u32);
            }
        } else if n == 1 {
            return LaurentPoly::zero();
        }
        let key = (d.canonical_key(), n);
        if let Some(hit) = self.memo.get(&key) {
            return hit;
        }
        let value = enumerate_l(d)
            .iter()
            .map(|f| {
                let s = sigma(d, f, 1, n - 1, &self.table);
                self.eval_p(&d.restrict(f, Label::One), n - 1).shift(s)
            })
            .sum();
        self.memo.insert(key, value)
    }

    /// The full split `Σ_f q^{σ_{m,n}} P_n(Γ_{f,1}) P_m(Γ_{f,2})`, which must
    /// equal `P_{n+m}(d)`.
    pub fn eval_p_split(&self, d: &Diagram, n: u32, m: u32) -> LaurentPoly {
        self.decompose(d, n, m)
            .iter()
            .map(Summand::contribution)
            .sum()
    }

    /// Nonzero summands of the `(n, m)` split, in enumeration order.
    pub fn decompose(&self, d: &Diagram, n: u32, m: u32) -> Vec<Summand> {
        assert!(n >= 1 && m >= 1, "split needs n, m >= 1");
        enumerate_labellings(d, None)
            .into_iter()
            .filter_map(|f| {
                let left = d.restrict(&f, Label::One);
                let right = d.restrict(&f, Label::Two);
                let left_poly = self.eval_p(&left, n);
                if left_poly.is_zero() {
                    return None;
                }
                let right_poly = self.eval_p(&right, m);
                if right_poly.is_zero() {
                    return None;
                }
                Some(Summand {
                    sigma: sigma(d, &f, m, n, &self.table),
                    left_parity: parity_of(left.rotation()),
                    right_parity: parity_of(right.rotation()),
                    labelling: f,
                    left_poly,
                    right_poly,
                })
            })
            .collect()
    }

    /// Chains `Δ_1 ∈ S(Γ), …, Δ_{n-1} ∈ S(Δ_{n-2})` with `Δ_{n-1}` a union of
    /// circles, depth first in enumeration order. Both forms of the degree
    /// shift are computed for every chain and must agree.
    pub fn chains(&self, d: &Diagram, n: u32) -> Result<Vec<ChainRecord>, EngineError> {
        assert!(n >= 2, "chains need n >= 2");
        let mut out = Vec::new();
        let mut labellings = Vec::new();
        let mut steps = Vec::new();
        self.chain_dfs(d, n, d.rotation(), &mut labellings, &mut steps, &mut out)?;
        Ok(out)
    }

    fn chain_dfs(
        &self,
        current: &Diagram,
        n: u32,
        base_rotation: i64,
        labellings: &mut Vec<Labelling>,
        steps: &mut Vec<ChainStep>,
        out: &mut Vec<ChainRecord>,
    ) -> Result<(), EngineError> {
        let depth = steps.len() as u32;
        if depth == n - 1 {
            if !current.is_union_of_circles() {
                return Ok(());
            }
            let first = delta_stepwise(n, base_rotation, steps);
            let second = delta_telescoped(n, base_rotation, steps);
            if first != second {
                return Err(EngineError::DeltaMismatch { first, second });
            }
            out.push(ChainRecord {
                labellings: labellings.clone(),
                steps: steps.clone(),
                delta: first,
            });
            return Ok(());
        }
        for f in enumerate_l(current) {
            let next = current.restrict(&f, Label::One);
            steps.push(ChainStep {
                beta: bracket(current, &f, &self.table),
                rotation: next.rotation(),
            });
            labellings.push(f);
            self.chain_dfs(&next, n, base_rotation, labellings, steps, out)?;
            labellings.pop();
            steps.pop();
        }
        Ok(())
    }

    /// Coefficients of `P_n(d)` read as graded dimensions, in parity `r(d) mod 2`.
    pub fn homology_table(&self, d: &Diagram, n: u32) -> Result<HomologyTable, EngineError> {
        let p = self.eval_p(d, n);
        let mut dims = BTreeMap::new();
        for (degree, c) in p.terms() {
            let dim = c
                .to_biguint()
                .ok_or_else(|| EngineError::NegativeCoefficient {
                    degree,
                    coeff: c.clone(),
                })?;
            dims.insert(degree, dim);
        }
        Ok(HomologyTable {
            dims,
            parity: parity_of(d.rotation()),
        })
    }
}
