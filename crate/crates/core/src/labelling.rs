//! Conservation-law labellings, the vertex interaction table and the
//! exponent `σ_{m,n}` that weights each composition-product summand.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{Diagram, EdgeId, VertexSlots};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Label {
    One,
    Two,
}

impl Label {
    pub fn swapped(self) -> Self {
        match self {
            Label::One => Label::Two,
            Label::Two => Label::One,
        }
    }

    pub fn as_u8(self) -> u8 {
        match self {
            Label::One => 1,
            Label::Two => 2,
        }
    }
}

impl From<Label> for u8 {
    fn from(l: Label) -> u8 {
        l.as_u8()
    }
}

impl TryFrom<u8> for Label {
    type Error = String;

    fn try_from(v: u8) -> Result<Self, String> {
        match v {
            1 => Ok(Label::One),
            2 => Ok(Label::Two),
            other => Err(format!("label must be 1 or 2, got {other}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabellingError {
    #[error("labelling has {got} entries but the diagram has {expected} edges")]
    WrongLength { expected: usize, got: usize },
    #[error("conservation law fails at vertex {vertex}")]
    NotConserved { vertex: usize },
}

/// An assignment edge id -> {1, 2} satisfying the conservation law.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Labelling {
    labels: Vec<Label>,
}

impl Labelling {
    /// Checks the conservation law at every vertex of `d`.
    pub fn new(d: &Diagram, labels: Vec<Label>) -> Result<Self, LabellingError> {
        if labels.len() != d.num_edges() {
            return Err(LabellingError::WrongLength {
                expected: d.num_edges(),
                got: labels.len(),
            });
        }
        for (vertex, v) in d.vertices().iter().enumerate() {
            if !conserved(v, |e| labels[e]) {
                return Err(LabellingError::NotConserved { vertex });
            }
        }
        Ok(Self { labels })
    }

    pub fn uniform(d: &Diagram, label: Label) -> Self {
        Self {
            labels: vec![label; d.num_edges()],
        }
    }

    pub fn label(&self, e: EdgeId) -> Label {
        self.labels[e]
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// The label exchange 1 <-> 2.
    pub fn swapped(&self) -> Self {
        Self {
            labels: self.labels.iter().map(|l| l.swapped()).collect(),
        }
    }

    pub fn pattern_at(&self, v: &VertexSlots) -> VertexPattern {
        VertexPattern::of(v, |e| self.labels[e])
    }

    pub fn as_map(&self) -> BTreeMap<EdgeId, u8> {
        self.labels
            .iter()
            .enumerate()
            .map(|(e, l)| (e, l.as_u8()))
            .collect()
    }
}

/// `e0=1 e1=2 ...`
impl fmt::Display for Labelling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (e, l) in self.labels.iter().enumerate() {
            if e > 0 {
                write!(f, " ")?;
            }
            write!(f, "e{e}={}", l.as_u8())?;
        }
        Ok(())
    }
}

fn conserved(v: &VertexSlots, label: impl Fn(EdgeId) -> Label) -> bool {
    let ones =
        |a: EdgeId, b: EdgeId| (label(a) == Label::One) as u8 + (label(b) == Label::One) as u8;
    ones(v.in_left, v.in_right) == ones(v.out_left, v.out_right)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    fn flipped(self) -> Self {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// Which incident slots carry label 1 at a vertex. Under the conservation
/// law exactly six patterns occur.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexPattern {
    AllOne,
    AllTwo,
    Mixed { in_one: Side, out_one: Side },
}

impl VertexPattern {
    pub const ALL: [VertexPattern; 6] = [
        VertexPattern::AllOne,
        VertexPattern::AllTwo,
        VertexPattern::Mixed {
            in_one: Side::Left,
            out_one: Side::Left,
        },
        VertexPattern::Mixed {
            in_one: Side::Left,
            out_one: Side::Right,
        },
        VertexPattern::Mixed {
            in_one: Side::Right,
            out_one: Side::Left,
        },
        VertexPattern::Mixed {
            in_one: Side::Right,
            out_one: Side::Right,
        },
    ];

    fn of(v: &VertexSlots, label: impl Fn(EdgeId) -> Label) -> Self {
        use Label::*;
        match (
            label(v.in_left),
            label(v.in_right),
            label(v.out_left),
            label(v.out_right),
        ) {
            (One, One, One, One) => VertexPattern::AllOne,
            (Two, Two, Two, Two) => VertexPattern::AllTwo,
            (il, ir, ol, or) if il != ir && ol != or => VertexPattern::Mixed {
                in_one: if il == One { Side::Left } else { Side::Right },
                out_one: if ol == One { Side::Left } else { Side::Right },
            },
            _ => panic!("pattern requested for a non-conserving labelling"),
        }
    }

    /// Image under the label exchange 1 <-> 2.
    pub fn swapped(self) -> Self {
        match self {
            VertexPattern::AllOne => VertexPattern::AllTwo,
            VertexPattern::AllTwo => VertexPattern::AllOne,
            VertexPattern::Mixed { in_one, out_one } => VertexPattern::Mixed {
                in_one: in_one.flipped(),
                out_one: out_one.flipped(),
            },
        }
    }
}

/// Vertex weights `⟨v|Γ|f⟩` for the four mixed patterns; uniform patterns
/// always weigh 0.
///
/// The shipped table gives -1 when the label-1 strand enters and leaves on
/// the left, +1 when it enters and leaves on the right, and 0 when the two
/// labels cross at the vertex. See [`crate::calibration`] for the search
/// that singles it out.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InteractionTable {
    pub left_left: i64,
    pub left_right: i64,
    pub right_left: i64,
    pub right_right: i64,
}

impl Default for InteractionTable {
    fn default() -> Self {
        Self::shipped()
    }
}

impl InteractionTable {
    pub const fn shipped() -> Self {
        Self {
            left_left: -1,
            left_right: 0,
            right_left: 0,
            right_right: 1,
        }
    }

    pub const fn from_mixed(
        left_left: i64,
        left_right: i64,
        right_left: i64,
        right_right: i64,
    ) -> Self {
        Self {
            left_left,
            left_right,
            right_left,
            right_right,
        }
    }

    pub fn negated(&self) -> Self {
        Self::from_mixed(
            -self.left_left,
            -self.left_right,
            -self.right_left,
            -self.right_right,
        )
    }

    /// All `3^4` assignments of {-1, 0, 1} to the mixed patterns, in a fixed order.
    pub fn all_candidates() -> Vec<Self> {
        let vals = [-1i64, 0, 1];
        let mut out = Vec::with_capacity(81);
        for a in vals {
            for b in vals {
                for c in vals {
                    for d in vals {
                        out.push(Self::from_mixed(a, b, c, d));
                    }
                }
            }
        }
        out
    }

    pub fn value(&self, p: VertexPattern) -> i64 {
        match p {
            VertexPattern::AllOne | VertexPattern::AllTwo => 0,
            VertexPattern::Mixed {
                in_one: Side::Left,
                out_one: Side::Left,
            } => self.left_left,
            VertexPattern::Mixed {
                in_one: Side::Left,
                out_one: Side::Right,
            } => self.left_right,
            VertexPattern::Mixed {
                in_one: Side::Right,
                out_one: Side::Left,
            } => self.right_left,
            VertexPattern::Mixed {
                in_one: Side::Right,
                out_one: Side::Right,
            } => self.right_right,
        }
    }

    /// Mixed values form the multiset {0, 0, +1, -1} and flip sign under
    /// the label exchange.
    pub fn has_expected_shape(&self) -> bool {
        let mut mixed = [
            self.left_left,
            self.left_right,
            self.right_left,
            self.right_right,
        ];
        mixed.sort_unstable();
        let antisymmetric = VertexPattern::ALL
            .iter()
            .all(|&p| self.value(p.swapped()) == -self.value(p));
        mixed == [-1, 0, 0, 1] && antisymmetric
    }
}

impl fmt::Display for InteractionTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "LL={:+} LR={:+} RL={:+} RR={:+}",
            self.left_left, self.left_right, self.right_left, self.right_right
        )
    }
}

/// Fixed labels on a subset of edges; restricts enumeration to partial sums.
pub type EdgeConstraint = BTreeMap<EdgeId, Label>;

/// All conservation-law labellings of `d` that agree with `filter`.
///
/// Edges are assigned in id order with label 1 tried before 2, so the output
/// is lexicographic. Each vertex keeps its inward/outward label-1 counts
/// reachable; a branch dies as soon as they can no longer balance.
pub fn enumerate_labellings(d: &Diagram, filter: Option<&EdgeConstraint>) -> Vec<Labelling> {
    let n = d.num_edges();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (vi, v) in d.vertices().iter().enumerate() {
        for e in v.slots() {
            if !incident[e].contains(&vi) {
                incident[e].push(vi);
            }
        }
    }
    let mut search = Search {
        d,
        incident: &incident,
        filter,
        partial: vec![None; n],
        out: Vec::new(),
    };
    search.descend(0);
    search.out
}

struct Search<'a> {
    d: &'a Diagram,
    incident: &'a [Vec<usize>],
    filter: Option<&'a EdgeConstraint>,
    partial: Vec<Option<Label>>,
    out: Vec<Labelling>,
}

impl Search<'_> {
    fn descend(&mut self, e: EdgeId) {
        if e == self.partial.len() {
            let labels = self
                .partial
                .iter()
                .map(|l| l.expect("all edges assigned"))
                .collect();
            self.out.push(Labelling { labels });
            return;
        }
        for label in [Label::One, Label::Two] {
            if self
                .filter
                .and_then(|f| f.get(&e))
                .is_some_and(|&fixed| fixed != label)
            {
                continue;
            }
            self.partial[e] = Some(label);
            if self.incident[e]
                .iter()
                .all(|&vi| self.feasible(&self.d.vertices()[vi]))
            {
                self.descend(e + 1);
            }
        }
        self.partial[e] = None;
    }

    /// Whether the label-1 counts on the two sides of `v` can still agree.
    fn feasible(&self, v: &VertexSlots) -> bool {
        let range = |a: EdgeId, b: EdgeId| {
            let mut lo = 0;
            let mut hi = 0;
            for e in [a, b] {
                match self.partial[e] {
                    Some(Label::One) => {
                        lo += 1;
                        hi += 1;
                    }
                    Some(Label::Two) => {}
                    None => hi += 1,
                }
            }
            (lo, hi)
        };
        let (in_lo, in_hi) = range(v.in_left, v.in_right);
        let (out_lo, out_hi) = range(v.out_left, v.out_right);
        in_lo <= out_hi && out_lo <= in_hi
    }
}

/// Labellings whose label-2 part is a union of circles (no all-2 vertex).
pub fn enumerate_l(d: &Diagram) -> Vec<Labelling> {
    enumerate_labellings(d, None)
        .into_iter()
        .filter(|f| {
            d.vertices()
                .iter()
                .all(|v| f.pattern_at(v) != VertexPattern::AllTwo)
        })
        .collect()
}

/// `⟨Γ|f⟩`, the sum of vertex interactions.
pub fn bracket(d: &Diagram, f: &Labelling, table: &InteractionTable) -> i64 {
    d.vertices()
        .iter()
        .map(|v| table.value(f.pattern_at(v)))
        .sum()
}

/// `σ_{m,n}(Γ,f) = ⟨Γ|f⟩ + m·r(Γ_{f,1}) − n·r(Γ_{f,2})`.
pub fn sigma(d: &Diagram, f: &Labelling, m: u32, n: u32, table: &InteractionTable) -> i64 {
    bracket(d, f, table) + m as i64 * d.labelled_rotation(f, Label::One)
        - n as i64 * d.labelled_rotation(f, Label::Two)
}

#[cfg(test)]
mod tests {
    use super::*;

    const BIGON: &str = "cup 0 +\ncup 2 -\nvertex 1\nvertex 1\ncap 2\ncap 0";

    fn bigon() -> Diagram {
        Diagram::parse(BIGON).unwrap()
    }

    fn labels(v: &[u8]) -> Vec<Label> {
        v.iter().map(|&x| Label::try_from(x).unwrap()).collect()
    }

    /// Independent brute force: every assignment of {1,2}, kept when each
    /// vertex has as many inward as outward 1s.
    fn brute_force(d: &Diagram) -> Vec<Vec<Label>> {
        let n = d.num_edges();
        let mut out = Vec::new();
        for mask in 0u32..(1 << n) {
            // edge 0 is the most significant choice so the order matches
            let ls: Vec<Label> = (0..n)
                .map(|e| {
                    if mask >> (n - 1 - e) & 1 == 0 {
                        Label::One
                    } else {
                        Label::Two
                    }
                })
                .collect();
            let ok = d.vertices().iter().all(|v| {
                let c = |e: EdgeId| (ls[e] == Label::One) as i32;
                c(v.in_left) + c(v.in_right) == c(v.out_left) + c(v.out_right)
            });
            if ok {
                out.push(ls);
            }
        }
        out
    }

    #[test]
    fn circle_has_two_labellings() {
        let d = Diagram::parse("cup 0 +\ncap 0").unwrap();
        assert_eq!(enumerate_labellings(&d, None).len(), 2);
        assert_eq!(enumerate_l(&d).len(), 2);
    }

    #[test]
    fn bigon_labellings_match_brute_force() {
        let d = bigon();
        let got: Vec<Vec<Label>> = enumerate_labellings(&d, None)
            .into_iter()
            .map(|f| f.labels)
            .collect();
        assert_eq!(got.len(), 6);
        assert_eq!(got, brute_force(&d));
        assert_eq!(enumerate_l(&d).len(), 5);
    }

    #[test]
    fn filtered_partial_sum() {
        let d = bigon();
        // A = edge 0, e1 = edge 2, e2 = edge 3
        let filter: EdgeConstraint = [(0, Label::One), (2, Label::One), (3, Label::Two)].into();
        let got = enumerate_labellings(&d, Some(&filter));
        assert_eq!(got.len(), 1);
        assert_eq!(got[0].labels(), labels(&[1, 2, 1, 2]).as_slice());
    }

    #[test]
    fn empty_diagram_has_the_empty_labelling() {
        let d = Diagram::empty();
        let l = enumerate_l(&d);
        assert_eq!(l.len(), 1);
        assert!(l[0].is_empty());
    }

    #[test]
    fn new_rejects_bad_labellings() {
        let d = bigon();
        assert_eq!(
            Labelling::new(&d, labels(&[1, 1, 1])),
            Err(LabellingError::WrongLength {
                expected: 4,
                got: 3
            })
        );
        assert_eq!(
            Labelling::new(&d, labels(&[1, 1, 1, 2])),
            Err(LabellingError::NotConserved { vertex: 0 })
        );
        assert!(Labelling::new(&d, labels(&[2, 1, 1, 2])).is_ok());
    }

    #[test]
    fn shipped_table_shape() {
        let t = InteractionTable::shipped();
        assert!(t.has_expected_shape());
        assert!(t.negated().has_expected_shape());
        assert!(!InteractionTable::from_mixed(1, 1, 0, 0).has_expected_shape());
        assert_eq!(InteractionTable::all_candidates().len(), 81);
        let shaped = InteractionTable::all_candidates()
            .into_iter()
            .filter(|t| t.has_expected_shape())
            .count();
        assert_eq!(shaped, 4);
    }

    #[test]
    fn bracket_examples() {
        let d = bigon();
        let t = InteractionTable::shipped();
        assert_eq!(bracket(&d, &Labelling::uniform(&d, Label::One), &t), 0);
        let circle = Diagram::parse("cup 0 -\ncap 0").unwrap();
        for f in enumerate_labellings(&circle, None) {
            assert_eq!(bracket(&circle, &f, &t), 0);
        }
        let mut mixed: Vec<i64> = enumerate_labellings(&d, None)
            .iter()
            .filter(|f| f.labels().contains(&Label::One) && f.labels().contains(&Label::Two))
            .map(|f| bracket(&d, f, &t))
            .collect();
        mixed.sort();
        assert_eq!(mixed, vec![-2, 0, 0, 2]);
    }

    #[test]
    fn sigma_examples() {
        let t = InteractionTable::shipped();
        let ccw = Diagram::parse("cup 0 +\ncap 0").unwrap();
        for (m, n) in [(1, 1), (1, 2), (3, 2)] {
            assert_eq!(
                sigma(&ccw, &Labelling::uniform(&ccw, Label::One), m, n, &t),
                m as i64
            );
            assert_eq!(
                sigma(&ccw, &Labelling::uniform(&ccw, Label::Two), m, n, &t),
                -(n as i64)
            );
        }
        let d = bigon();
        let mut s: Vec<i64> = enumerate_labellings(&d, None)
            .iter()
            .filter(|f| f.labels().contains(&Label::One) && f.labels().contains(&Label::Two))
            .map(|f| sigma(&d, f, 1, 2, &t))
            .collect();
        s.sort();
        assert_eq!(s, vec![-3, -1, 1, 3]);
    }

    #[test]
    fn swap_is_an_involution_negating_brackets() {
        let d = bigon();
        let t = InteractionTable::shipped();
        let all = enumerate_labellings(&d, None);
        for f in &all {
            let g = f.swapped();
            assert!(all.contains(&g));
            assert_eq!(g.swapped(), *f);
            assert_eq!(bracket(&d, &g, &t), -bracket(&d, f, &t));
        }
    }
}
