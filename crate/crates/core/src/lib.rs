//! Exact evaluation of the Kauffman–Vogel polynomial `P_n` of oriented
//! 4-valent planar graphs through the composition product, together with the
//! Khovanov–Rozansky graded dimensions it categorifies.
//!
//! Graphs are given as slice words ([`diagram`]); `P_n` is computed by
//! peeling one strand colour at a time ([`engine`]), with labellings and
//! vertex weights in [`labelling`]. [`relations`] holds closed instances of
//! the defining graph relations used as a verification corpus.

pub mod calibration;
pub mod cli;
pub mod corpus;
pub mod diagram;
pub mod engine;
pub mod labelling;
pub mod laurent;
pub mod relations;
pub mod report;

pub use diagram::{Diagram, DiagramError, RotationNumber, Slice};
pub use engine::{ChainRecord, Engine, EngineError, HomologyTable, Summand};
pub use labelling::{InteractionTable, Label, Labelling, VertexPattern};
pub use laurent::LaurentPoly;
