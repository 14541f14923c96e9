//! Exact machinery for sparse 3-uniform hypergraphs: (s,k)-configuration
//! detection, k-maximal sparsification, shadow-counting bounds, and exact
//! desk-scale computation of the extremal functions f and g.
//!
//! An (s,k)-configuration is a set of k edges spanning at most s vertices.
//! Everything here is exact: detectors never miss a witness, bounds are
//! checked in integer arithmetic, and search results carry certificates.

pub mod configs;
pub mod extremal;
pub mod hypercore;
pub mod naive;
pub(crate) mod rng;
pub mod shadowbound;
pub mod sparsifier;

pub use hypercore::{Edge, EdgeIndexSet, Hypergraph, VertexSet, MAX_VERTICES};

use configs::Configuration;
use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("hypergraph supports at most {max} vertices, got n = {n}")]
    TooManyVertices { n: usize, max: usize },

    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("edge must have three distinct vertices, got {0:?}")]
    RepeatedVertex([usize; 3]),

    #[error("duplicate edge {0:?} without the multi flag")]
    DuplicateEdge([usize; 3]),

    #[error("edge index {index} out of range for m = {m}")]
    InvalidEdgeIndex { index: usize, m: usize },

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("seed is not a valid (l+1,l)-configuration for l in [2,k-1]: {0}")]
    InvalidSeed(String),

    #[error("hypergraph is not ({s},{k})-free; witness edges {witness:?}")]
    NotFree {
        s: usize,
        k: usize,
        witness: Configuration,
    },

    #[error("configuration is not {k}-maximal; extends to {extension:?}")]
    NotKMaximal { k: usize, extension: Configuration },

    #[error("structural check failed (this indicates a bug): {0}")]
    StructuralViolation(String),

    #[error("certified bound violated (this indicates a bug): {0}")]
    BoundViolation(String),

    #[error("search budget exhausted")]
    BudgetExhausted,

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Binomial coefficient n choose 2.
pub(crate) fn choose2(n: usize) -> u64 {
    (n as u64) * (n as u64).saturating_sub(1) / 2
}

/// Binomial coefficient n choose 3.
pub(crate) fn choose3(n: usize) -> u64 {
    let n = n as u64;
    if n < 3 {
        0
    } else {
        n * (n - 1) * (n - 2) / 6
    }
}
