//! Closed instances of the five defining graph relations of `P_n`, checked
//! exactly through the engine.
//!
//! Local relations are tested under explicit closures. Slice words for the
//! pictures, bottom to top (`^` up, `v` down, `X` a vertex):
//!
//! ```text
//! (1) circle = [n]                    cup 0 ±; cap 0
//!
//! (2) curl = [n-1] · strand
//!       ^   ^                          single_vertex: loop on each side,
//!       X---+ (loop)                   either one read as the curl
//!       ^   ^                          curl_ccw / curl_cw: loop nested inside
//!                                      the closed-around through strand
//!
//! (3) bigon = [2] · vertex             two stacked vertices on one pair
//!       X                              vs one vertex, same closure
//!       X
//!
//! (4) antiparallel square              v_left on (L up, b up) with b cupped
//!     ^       v                        up from the right; v_right on
//!     X ----> X                        (R_in turned up, t) capping back down
//!     X <---- X                        = horizontal turnbacks
//!     ^       v                          + [n-2] · vertical strands
//!
//! (5) three upward strands, b1 = vertex on (1,2), b2 on (2,3):
//!       b1 b2 b1 + b2 = b2 b1 b2 + b1
//! ```

use std::fmt;

use crate::corpus;
use crate::diagram::Diagram;
use crate::engine::Engine;
use crate::laurent::LaurentPoly;

/// The coefficient `[per_n·n + offset]_q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuantumCoeff {
    pub per_n: i64,
    pub offset: i64,
}

impl QuantumCoeff {
    pub const ONE: Self = Self {
        per_n: 0,
        offset: 1,
    };

    pub const fn constant(k: i64) -> Self {
        Self {
            per_n: 0,
            offset: k,
        }
    }

    pub const fn n_plus(offset: i64) -> Self {
        Self { per_n: 1, offset }
    }

    pub fn eval(&self, n: u32) -> LaurentPoly {
        LaurentPoly::quantum_int(self.per_n * n as i64 + self.offset)
    }
}

impl fmt::Display for QuantumCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.per_n, self.offset) {
            (0, k) => write!(f, "[{k}]"),
            (1, 0) => write!(f, "[n]"),
            (1, k) if k > 0 => write!(f, "[n+{k}]"),
            (1, k) => write!(f, "[n{k}]"),
            (a, k) => write!(f, "[{a}n{k:+}]"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Term {
    pub coeff: QuantumCoeff,
    pub diagram: Diagram,
}

#[derive(Clone, Debug)]
pub struct RelationInstance {
    /// Relation number, 1 through 5.
    pub relation: u8,
    pub closure: String,
    pub lhs: Vec<Term>,
    pub rhs: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationCheck {
    pub relation: u8,
    pub closure: String,
    pub n: u32,
    pub lhs: LaurentPoly,
    pub rhs: LaurentPoly,
    pub passed: bool,
}

impl RelationCheck {
    /// `lhs - rhs`; zero exactly when the check passed.
    pub fn difference(&self) -> LaurentPoly {
        &self.lhs - &self.rhs
    }
}

impl fmt::Display for RelationCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(
            f,
            "{status} relation ({}) {} n={}",
            self.relation, self.closure, self.n
        )?;
        if !self.passed {
            write!(f, ": lhs - rhs = {}", self.difference())?;
        }
        Ok(())
    }
}

fn d(word: &str) -> Diagram {
    Diagram::parse(word).unwrap_or_else(|e| panic!("builtin relation word: {e}"))
}

fn c(name: &str) -> Diagram {
    corpus::get(name).unwrap_or_else(|| panic!("missing corpus entry {name}"))
}

fn term(coeff: QuantumCoeff, diagram: Diagram) -> Term {
    Term { coeff, diagram }
}

fn inst(relation: u8, closure: &str, lhs: Vec<Term>, rhs: Vec<Term>) -> RelationInstance {
    RelationInstance {
        relation,
        closure: closure.to_string(),
        lhs,
        rhs,
    }
}

/// Ways of closing a three-strand upward tangle: `(prefix, offset, suffix)`
/// where `offset` is the position of strand 1 inside the closure.
const THREE_STRAND_CLOSURES: [(&str, &str, usize, &str); 4] = [
    (
        "all-right",
        "cup 0 -\ncup 1 -\ncup 2 -",
        0,
        "cap 2\ncap 1\ncap 0",
    ),
    (
        "all-left",
        "cup 0 +\ncup 1 +\ncup 2 +",
        3,
        "cap 2\ncap 1\ncap 0",
    ),
    (
        "one-left",
        "cup 0 +\ncup 2 -\ncup 3 -",
        1,
        "cap 3\ncap 2\ncap 0",
    ),
    (
        "two-left",
        "cup 0 +\ncup 1 +\ncup 4 -",
        2,
        "cap 4\ncap 1\ncap 0",
    ),
];

/// Closure of a product of `b1` (`0`) and `b2` (`1`) generators.
fn three_strand(gens: &[usize], prefix: &str, offset: usize, suffix: &str) -> Diagram {
    let mut text = String::from(prefix);
    for g in gens {
        text.push_str(&format!("\nvertex {}", offset + g));
    }
    text.push('\n');
    text.push_str(suffix);
    d(&text)
}

/// At least two closed instances of every relation.
pub fn builtin_instances() -> Vec<RelationInstance> {
    use QuantumCoeff as Q;
    let one = Q::ONE;
    let mut out = vec![
        inst(
            1,
            "ccw",
            vec![term(one, c("circle_ccw"))],
            vec![term(Q::n_plus(0), Diagram::empty())],
        ),
        inst(
            1,
            "cw",
            vec![term(one, c("circle_cw"))],
            vec![term(Q::n_plus(0), Diagram::empty())],
        ),
        inst(
            2,
            "left-loop",
            vec![term(one, c("single_vertex"))],
            vec![term(Q::n_plus(-1), c("circle_cw"))],
        ),
        inst(
            2,
            "right-loop",
            vec![term(one, c("single_vertex"))],
            vec![term(Q::n_plus(-1), c("circle_ccw"))],
        ),
        inst(
            2,
            "nested-ccw",
            vec![term(one, c("curl_ccw"))],
            vec![term(Q::n_plus(-1), c("circle_ccw"))],
        ),
        inst(
            2,
            "nested-cw",
            vec![term(one, c("curl_cw"))],
            vec![term(Q::n_plus(-1), c("circle_cw"))],
        ),
        inst(
            3,
            "side-closed",
            vec![term(one, c("bigon"))],
            vec![term(Q::constant(2), c("single_vertex"))],
        ),
        inst(
            3,
            "nested-ccw",
            vec![term(one, c("bigon_nested"))],
            vec![term(Q::constant(2), c("curl_ccw"))],
        ),
        inst(
            3,
            "nested-cw",
            vec![term(
                one,
                d("cup 0 -\ncup 1 -\nvertex 0\nvertex 0\ncap 1\ncap 0"),
            )],
            vec![term(Q::constant(2), c("curl_cw"))],
        ),
        inst(
            4,
            "cap-cup",
            vec![term(one, c("square_a"))],
            vec![
                term(one, d("cup 0 -\ncap 0\ncup 0 -\ncap 0")),
                term(Q::n_plus(-2), d("cup 0 -\ncap 0")),
            ],
        ),
        inst(
            4,
            "side-closed",
            vec![term(one, c("square_b"))],
            vec![
                term(one, d("cup 0 +\ncup 2 +\ncap 1\ncup 1 -\ncap 0\ncap 0")),
                term(Q::n_plus(-2), d("cup 0 +\ncup 2 +\ncap 0\ncap 0")),
            ],
        ),
    ];
    for (name, prefix, offset, suffix) in THREE_STRAND_CLOSURES {
        let w = |gens: &[usize]| three_strand(gens, prefix, offset, suffix);
        out.push(inst(
            5,
            name,
            vec![term(one, w(&[0, 1, 0])), term(one, w(&[1]))],
            vec![term(one, w(&[1, 0, 1])), term(one, w(&[0]))],
        ));
    }
    out
}

/// The same instance with a disjoint clockwise circle added to every diagram.
pub fn with_disjoint_circle(inst: &RelationInstance) -> RelationInstance {
    let circle = c("circle_cw");
    let add = |terms: &[Term]| {
        terms
            .iter()
            .map(|t| term(t.coeff, t.diagram.disjoint_union(&circle)))
            .collect()
    };
    RelationInstance {
        relation: inst.relation,
        closure: format!("{}+circle", inst.closure),
        lhs: add(&inst.lhs),
        rhs: add(&inst.rhs),
    }
}

fn side(engine: &Engine, terms: &[Term], n: u32) -> LaurentPoly {
    terms
        .iter()
        .map(|t| &t.coeff.eval(n) * &engine.eval_p(&t.diagram, n))
        .sum()
}

/// Evaluates both sides at `n` and compares them exactly.
pub fn check_relation(engine: &Engine, inst: &RelationInstance, n: u32) -> RelationCheck {
    let lhs = side(engine, &inst.lhs, n);
    let rhs = side(engine, &inst.rhs, n);
    RelationCheck {
        relation: inst.relation,
        closure: inst.closure.clone(),
        n,
        passed: lhs == rhs,
        lhs,
        rhs,
    }
}

/// Every builtin instance for `n = 1..=n_max`, in a fixed order.
pub fn check_all(engine: &Engine, n_max: u32) -> Vec<RelationCheck> {
    let instances = builtin_instances();
    (1..=n_max)
        .flat_map(|n| instances.iter().map(move |i| (i, n)))
        .map(|(i, n)| check_relation(engine, i, n))
        .collect()
}
