//! Slice-word (Morse) presentations of closed regular planar graphs.
//!
//! A diagram is read bottom to top as a word of slices acting on a horizontal
//! cross-section of oriented strand endpoints:
//!
//! ```text
//! cup <pos> +    inserts (down, up) at pos, pos+1   (counterclockwise turn)
//! cup <pos> -    inserts (up, down) at pos, pos+1   (clockwise turn)
//! cap <pos>      closes pos, pos+1, which must be oppositely oriented
//! vertex <pos>   4-valent vertex on pos, pos+1, both oriented up
//! ```
//!
//! Everything else (edges, circle components, vertex incidences, Seifert
//! circles, rotation numbers) is derived once at construction time.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::labelling::{Label, Labelling};

/// Direction of a strand endpoint in a cross-section.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    Up,
    Down,
}

/// `Plus` creates the pair (down, up), `Minus` the pair (up, down).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CupSign {
    Plus,
    Minus,
}

impl CupSign {
    pub fn pattern(self) -> (Orientation, Orientation) {
        match self {
            CupSign::Plus => (Orientation::Down, Orientation::Up),
            CupSign::Minus => (Orientation::Up, Orientation::Down),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slice {
    Cup { pos: usize, sign: CupSign },
    Cap { pos: usize },
    Vertex { pos: usize },
}

impl fmt::Display for Slice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slice::Cup {
                pos,
                sign: CupSign::Plus,
            } => write!(f, "cup {pos} +"),
            Slice::Cup {
                pos,
                sign: CupSign::Minus,
            } => write!(f, "cup {pos} -"),
            Slice::Cap { pos } => write!(f, "cap {pos}"),
            Slice::Vertex { pos } => write!(f, "vertex {pos}"),
        }
    }
}

pub type EdgeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: position {pos} out of range for cross-section of width {width}")]
    PositionOutOfRange {
        line: usize,
        pos: usize,
        width: usize,
    },
    #[error("line {line}: cap at {pos} joins two strands with the same orientation")]
    CapNotOpposite { line: usize, pos: usize },
    #[error("line {line}: vertex at {pos} requires two upward strands")]
    VertexNotUpward { line: usize, pos: usize },
    #[error("diagram is not closed: {open} strand endpoints remain after the last slice")]
    NotClosed { open: usize },
}

impl DiagramError {
    pub fn line(&self) -> Option<usize> {
        match self {
            DiagramError::Syntax { line, .. }
            | DiagramError::PositionOutOfRange { line, .. }
            | DiagramError::CapNotOpposite { line, .. }
            | DiagramError::VertexNotUpward { line, .. } => Some(*line),
            DiagramError::NotClosed { .. } => None,
        }
    }
}

/// The four incident edge slots of a vertex. `in_*` are the strands entering
/// from below at positions `pos`/`pos+1`, `out_*` leave above.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct VertexSlots {
    pub slice: usize,
    pub in_left: EdgeId,
    pub in_right: EdgeId,
    pub out_left: EdgeId,
    pub out_right: EdgeId,
}

impl VertexSlots {
    pub fn slots(&self) -> [EdgeId; 4] {
        [self.in_left, self.in_right, self.out_left, self.out_right]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: EdgeId,
    /// `true` for a vertex-free closed component.
    pub is_circle: bool,
    /// Sum of extremum turns on this edge in half-turn units (+1 per
    /// counterclockwise extremum, -1 per clockwise one).
    pub half_turns: i64,
    pub component: usize,
}

/// Rotation data from the oriented smoothing of every vertex.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct RotationNumber {
    /// Sign of each Seifert circle, ordered by first appearance in the word.
    pub circles: Vec<i64>,
    /// Sum of Seifert-circle signs per connected component.
    pub components: Vec<i64>,
    pub total: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum SliceEdge {
    Cup(EdgeId),
    Cap(EdgeId),
    Vertex(usize),
}

/// A validated closed slice word together with its derived structure.
#[derive(Clone, Debug)]
pub struct Diagram {
    word: Vec<Slice>,
    edges: Vec<Edge>,
    vertices: Vec<VertexSlots>,
    slice_edges: Vec<SliceEdge>,
    rotation: RotationNumber,
    num_components: usize,
}

impl PartialEq for Diagram {
    fn eq(&self, other: &Self) -> bool {
        self.word == other.word
    }
}

impl Eq for Diagram {}

/// Memoization key: a compact, deterministic encoding of the slice word.
/// Isotopic but different words get different keys.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiagramKey(Box<[u32]>);

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new() -> Self {
        Self { parent: Vec::new() }
    }

    fn make(&mut self) -> usize {
        self.parent.push(self.parent.len());
        self.parent.len() - 1
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        // keep the smaller root so class representatives are stable
        if ra < rb {
            self.parent[rb] = ra;
        } else if rb < ra {
            self.parent[ra] = rb;
        }
    }

    /// Dense class ids in order of each class's smallest member.
    fn dense_classes(&mut self) -> (Vec<usize>, usize) {
        let n = self.parent.len();
        let mut root_id = vec![usize::MAX; n];
        let mut next = 0;
        let class = (0..n)
            .map(|x| {
                let r = self.find(x);
                if root_id[r] == usize::MAX {
                    root_id[r] = next;
                    next += 1;
                }
                root_id[r]
            })
            .collect();
        (class, next)
    }
}

impl Diagram {
    pub fn empty() -> Self {
        Self::from_slices(Vec::new()).expect("empty word is closed")
    }

    /// Validates a slice word; error line numbers are 1-based slice indices.
    pub fn from_slices(word: Vec<Slice>) -> Result<Self, DiagramError> {
        let lines: Vec<usize> = (1..=word.len()).collect();
        Self::build(word, &lines)
    }

    /// Parses the text format (one slice per line, `#` comments).
    pub fn parse(text: &str) -> Result<Self, DiagramError> {
        let mut word = Vec::new();
        let mut lines = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            word.push(parse_slice(content, line)?);
            lines.push(line);
        }
        Self::build(word, &lines)
    }

    fn build(word: Vec<Slice>, lines: &[usize]) -> Result<Self, DiagramError> {
        use Orientation::*;

        let mut cs: Vec<(usize, Orientation)> = Vec::new();
        let mut edge_sets = DisjointSets::new();
        let mut seifert_sets = DisjointSets::new();
        let mut comp_sets = DisjointSets::new();
        let mut seg_turn: Vec<i64> = Vec::new();
        let mut vertex_segs: Vec<(usize, [usize; 4])> = Vec::new();
        let mut slice_segs: Vec<SliceEdge> = Vec::with_capacity(word.len());

        macro_rules! new_seg {
            ($turn:expr) => {{
                edge_sets.make();
                seifert_sets.make();
                comp_sets.make();
                seg_turn.push($turn);
                seg_turn.len() - 1
            }};
        }

        for (i, slice) in word.iter().enumerate() {
            let line = lines[i];
            let width = cs.len();
            match *slice {
                Slice::Cup { pos, sign } => {
                    if pos > width {
                        return Err(DiagramError::PositionOutOfRange { line, pos, width });
                    }
                    let turn = if sign == CupSign::Plus { 1 } else { -1 };
                    let s = new_seg!(turn);
                    let (a, b) = sign.pattern();
                    cs.splice(pos..pos, [(s, a), (s, b)]);
                    slice_segs.push(SliceEdge::Cup(s));
                }
                Slice::Cap { pos } => {
                    if pos + 1 >= width {
                        return Err(DiagramError::PositionOutOfRange { line, pos, width });
                    }
                    let (sa, oa) = cs[pos];
                    let (sb, ob) = cs[pos + 1];
                    if oa == ob {
                        return Err(DiagramError::CapNotOpposite { line, pos });
                    }
                    seg_turn[sa] += if (oa, ob) == (Down, Up) { 1 } else { -1 };
                    edge_sets.union(sa, sb);
                    seifert_sets.union(sa, sb);
                    comp_sets.union(sa, sb);
                    cs.drain(pos..pos + 2);
                    slice_segs.push(SliceEdge::Cap(sa));
                }
                Slice::Vertex { pos } => {
                    if pos + 1 >= width {
                        return Err(DiagramError::PositionOutOfRange { line, pos, width });
                    }
                    let (a, oa) = cs[pos];
                    let (b, ob) = cs[pos + 1];
                    if oa != Up || ob != Up {
                        return Err(DiagramError::VertexNotUpward { line, pos });
                    }
                    let c = new_seg!(0);
                    let d = new_seg!(0);
                    // oriented smoothing: in-left continues as out-left
                    seifert_sets.union(a, c);
                    seifert_sets.union(b, d);
                    for s in [b, c, d] {
                        comp_sets.union(a, s);
                    }
                    cs[pos] = (c, Up);
                    cs[pos + 1] = (d, Up);
                    slice_segs.push(SliceEdge::Vertex(vertex_segs.len()));
                    vertex_segs.push((i, [a, b, c, d]));
                }
            }
        }
        if !cs.is_empty() {
            return Err(DiagramError::NotClosed { open: cs.len() });
        }

        let (edge_of, num_edges) = edge_sets.dense_classes();
        let (seifert_of, num_seifert) = seifert_sets.dense_classes();
        let (comp_of, num_components) = comp_sets.dense_classes();

        let mut edges: Vec<Edge> = (0..num_edges)
            .map(|id| Edge {
                id,
                is_circle: true,
                half_turns: 0,
                component: 0,
            })
            .collect();
        for (seg, &e) in edge_of.iter().enumerate() {
            edges[e].half_turns += seg_turn[seg];
            edges[e].component = comp_of[seg];
        }
        let vertices: Vec<VertexSlots> = vertex_segs
            .iter()
            .map(|&(slice, [a, b, c, d])| VertexSlots {
                slice,
                in_left: edge_of[a],
                in_right: edge_of[b],
                out_left: edge_of[c],
                out_right: edge_of[d],
            })
            .collect();
        for v in &vertices {
            for e in v.slots() {
                edges[e].is_circle = false;
            }
        }

        let mut circle_turns = vec![0i64; num_seifert];
        let mut circle_comp = vec![0usize; num_seifert];
        for (seg, &c) in seifert_of.iter().enumerate() {
            circle_turns[c] += seg_turn[seg];
            circle_comp[c] = comp_of[seg];
        }
        let circles: Vec<i64> = circle_turns
            .iter()
            .map(|t| {
                debug_assert!(t % 2 == 0, "closed curve with odd half-turn count");
                t / 2
            })
            .collect();
        let mut components = vec![0i64; num_components];
        for (c, sign) in circles.iter().enumerate() {
            components[circle_comp[c]] += sign;
        }
        let total = circles.iter().sum();

        let slice_edges = slice_segs
            .into_iter()
            .map(|s| match s {
                SliceEdge::Cup(seg) => SliceEdge::Cup(edge_of[seg]),
                SliceEdge::Cap(seg) => SliceEdge::Cap(edge_of[seg]),
                v @ SliceEdge::Vertex(_) => v,
            })
            .collect();

        Ok(Self {
            word,
            edges,
            vertices,
            slice_edges,
            rotation: RotationNumber {
                circles,
                components,
                total,
            },
            num_components,
        })
    }

    pub fn word(&self) -> &[Slice] {
        &self.word
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[VertexSlots] {
        &self.vertices
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_components(&self) -> usize {
        self.num_components
    }

    /// Ids of the vertex-free closed components.
    pub fn circles(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges.iter().filter(|e| e.is_circle).map(|e| e.id)
    }

    pub fn is_union_of_circles(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn rotation_number(&self) -> &RotationNumber {
        &self.rotation
    }

    /// Total rotation number `r`.
    pub fn rotation(&self) -> i64 {
        self.rotation.total
    }

    /// Rotation number of the subgraph spanned by the edges carrying `label`,
    /// read directly off per-edge extremum counts. Agrees with
    /// `restrict(f, label).rotation()` because restriction keeps every
    /// extremum of a surviving edge and smoothing adds none.
    pub fn labelled_rotation(&self, f: &Labelling, label: Label) -> i64 {
        let half: i64 = self
            .edges
            .iter()
            .filter(|e| f.label(e.id) == label)
            .map(|e| e.half_turns)
            .sum();
        half / 2
    }

    /// `Γ_{f,keep}`: erase the edges labelled otherwise and smooth the
    /// resulting 2-valent vertices.
    ///
    /// # Panics
    /// If `f` was built for a different diagram.
    pub fn restrict(&self, f: &Labelling, keep: Label) -> Diagram {
        assert_eq!(
            f.len(),
            self.edges.len(),
            "labelling belongs to another diagram"
        );
        self.restrict_by(|e| f.label(e) == keep)
    }

    fn restrict_by(&self, keep: impl Fn(EdgeId) -> bool) -> Diagram {
        let mut cs: Vec<EdgeId> = Vec::new();
        let mut out = Vec::new();
        let kept_before =
            |cs: &[EdgeId], pos: usize| cs[..pos].iter().filter(|&&e| keep(e)).count();
        for (slice, tag) in self.word.iter().zip(&self.slice_edges) {
            match (*slice, *tag) {
                (Slice::Cup { pos, sign }, SliceEdge::Cup(e)) => {
                    if keep(e) {
                        out.push(Slice::Cup {
                            pos: kept_before(&cs, pos),
                            sign,
                        });
                    }
                    cs.splice(pos..pos, [e, e]);
                }
                (Slice::Cap { pos }, SliceEdge::Cap(e)) => {
                    if keep(e) {
                        out.push(Slice::Cap {
                            pos: kept_before(&cs, pos),
                        });
                    }
                    cs.drain(pos..pos + 2);
                }
                (Slice::Vertex { pos }, SliceEdge::Vertex(vi)) => {
                    let v = &self.vertices[vi];
                    let kept = v.slots().iter().filter(|&&e| keep(e)).count();
                    match kept {
                        4 => out.push(Slice::Vertex {
                            pos: kept_before(&cs, pos),
                        }),
                        // 2: one kept strand passes straight through; 0: gone
                        0 | 2 => {}
                        _ => panic!("labelling violates the conservation law at vertex {vi}"),
                    }
                    cs[pos] = v.out_left;
                    cs[pos + 1] = v.out_right;
                }
                _ => unreachable!("slice/edge tags out of sync"),
            }
        }
        Diagram::from_slices(out).expect("restriction of a closed diagram is closed")
    }

    /// Places `other` beside `self` (its word runs after ours at the same
    /// positions; the cross-section is empty between them).
    pub fn disjoint_union(&self, other: &Diagram) -> Diagram {
        let mut word = self.word.clone();
        word.extend_from_slice(&other.word);
        Diagram::from_slices(word).expect("union of closed diagrams is closed")
    }

    pub fn canonical_key(&self) -> DiagramKey {
        let code = self
            .word
            .iter()
            .map(|s| {
                let (tag, pos) = match *s {
                    Slice::Cup {
                        pos,
                        sign: CupSign::Plus,
                    } => (0u32, pos),
                    Slice::Cup {
                        pos,
                        sign: CupSign::Minus,
                    } => (1, pos),
                    Slice::Cap { pos } => (2, pos),
                    Slice::Vertex { pos } => (3, pos),
                };
                (pos as u32) << 2 | tag
            })
            .collect();
        DiagramKey(code)
    }
}

fn parse_slice(content: &str, line: usize) -> Result<Slice, DiagramError> {
    let syntax = |message: String| DiagramError::Syntax { line, message };
    let tokens: Vec<&str> = content.split_whitespace().collect();
    let pos = |tok: Option<&&str>| -> Result<usize, DiagramError> {
        let tok = tok.ok_or_else(|| syntax("missing position".into()))?;
        tok.parse()
            .map_err(|_| syntax(format!("invalid position `{tok}`")))
    };
    let expect_len = |n: usize| {
        if tokens.len() == n {
            Ok(())
        } else {
            Err(syntax(format!(
                "`{}` takes {} argument(s)",
                tokens[0],
                n - 1
            )))
        }
    };
    match tokens[0] {
        "cup" => {
            expect_len(3)?;
            let sign = match tokens[2] {
                "+" => CupSign::Plus,
                "-" => CupSign::Minus,
                other => return Err(syntax(format!("invalid cup sign `{other}`"))),
            };
            Ok(Slice::Cup {
                pos: pos(tokens.get(1))?,
                sign,
            })
        }
        "cap" => {
            expect_len(2)?;
            Ok(Slice::Cap {
                pos: pos(tokens.get(1))?,
            })
        }
        "vertex" => {
            expect_len(2)?;
            Ok(Slice::Vertex {
                pos: pos(tokens.get(1))?,
            })
        }
        other => Err(syntax(format!("unknown slice `{other}`"))),
    }
}

impl FromStr for Diagram {
    type Err = DiagramError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Diagram::parse(s)
    }
}

/// The text format, one slice per line.
impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.word {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}
