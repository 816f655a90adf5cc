//! Reweighted spectral gaps for directed graphs and hypergraphs.
//!
//! The library certifies expansion of a directed graph by maximizing the
//! second eigenvalue of a symmetrized normalized Laplacian over the polytope
//! of Eulerian reweightings (with vertex or edge capacity constraints), and
//! extracts sparse cuts from the optimizer via random projection, a squaring
//! map into an l1 program, and dual-guided threshold rounding. A companion
//! Markov-chain module connects the vertex-capacitated gap to fastest mixing.
//!
//! Everything is exact or tolerance-certified at small scale: circulations
//! are solved on scaled integers, eigensolves are dense, and all quantities
//! of interest have exhaustive brute-force oracles for n <= 24.

pub mod flow;
pub mod graph;
pub mod instances;
pub mod io;
pub mod mixing;
pub mod rounding;
pub mod selftest;
pub mod spectral;

mod eig;
mod rng;

pub use graph::{Cut, CutMode, DirectedGraph, Hypergraph, VertexWeights};
pub use spectral::{Embedding, Mode, SolveOptions, SpectralBracket};

use thiserror::Error;

/// Crate-wide error type. Variants map onto the CLI exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid cut: {0}")]
    InvalidCut(String),
    #[error("degenerate cut: {0}")]
    DegenerateCut(String),
    #[error("instance too large: {0}")]
    SizeLimit(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("reducible chain: {0}")]
    ReducibleChain(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
