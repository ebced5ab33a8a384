//! Integral modules of 2-cycles on graphs.
//!
//! A 2-cycle is an integer bilinear form on edge pairs that vanishes on
//! adjacent pairs and kills vertex coboundaries on either side. This crate
//! builds the lattice of all 2-cycles, the submodules spanned by
//! Kuratowski, quad and linkage generators, homology oracles, and a
//! crossing-number functional on generic drawings.

pub mod catalog;
pub mod crossing;
pub mod forms;
pub mod graph;
pub mod homology;
pub mod modules;
pub mod patterns;
pub mod verify;

pub use graph::{EdgeVector, Graph, GraphDoc, Separation};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("edge {edge} has endpoint {vertex} outside 0..{n}")]
    VertexOutOfRange {
        edge: usize,
        vertex: usize,
        n: usize,
    },
    #[error("edge {edge} is a loop at vertex {vertex}")]
    Loop { edge: usize, vertex: usize },
    #[error("no vertex {vertex} (graph has {n})")]
    NoSuchVertex { vertex: usize, n: usize },
    #[error("no edge {edge} (graph has {m})")]
    NoSuchEdge { edge: usize, m: usize },
    #[error("bad vertex label key {0:?}")]
    BadLabel(String),
    #[error("cannot parse graph: {0}")]
    Parse(String),
}
