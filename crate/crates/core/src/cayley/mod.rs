//! Cayley graphs of `SL₃(ℤ/nℤ)` and their Laplacian spectral gaps.

mod graph;
mod group;
mod mtx;
mod spectral;

pub use graph::{build_cayley, build_cayley_with_limit, CayleyGraph, GeneratorSet, RegularGraph, DEFAULT_MAX_VERTICES};
pub use group::{closure, elementary_generators, enumerate_group, group_order, GroupElements, ModMatrix};
pub use mtx::{read_matrix_market, write_matrix_market, SymmetricSparse};
pub use spectral::{
    dense_lambda2, dense_spectrum, gap_sweep, spectral_gap, GapRow, SpectralGapResult, SpectralOptions,
    DENSE_LIMIT, GAP_CSV_HEADER,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CayleyError {
    #[error("modulus {0} is outside the supported range 2..=100000")]
    Modulus(u32),
    #[error("matrix has determinant {det} mod {modulus}, expected 1")]
    NotUnimodular { modulus: u32, det: u32 },
    #[error("SL3(Z/{modulus}Z) has {order} elements, above the vertex limit {limit}")]
    SizeLimit { modulus: u32, order: u128, limit: usize },
    #[error("generators reach a subgroup of order {reached}, but SL3(Z/{modulus}Z) has order {order}")]
    NonGenerating { modulus: u32, reached: usize, order: u128 },
    #[error("generator multiset is not closed under inverses")]
    NotInverseClosed,
    #[error("generator set is empty")]
    NoGenerators,
    #[error("generator has modulus {got}, expected {expected}")]
    GeneratorModulus { expected: u32, got: u32 },
    #[error("matrix is not a group element")]
    NotInGroup,
    #[error("graph has no vertices or no edges")]
    EmptyGraph,
    #[error("invalid adjacency: {0}")]
    Adjacency(String),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("invalid eigensolver options")]
    SolverOptions,
    #[error("thread pool: {0}")]
    Threads(String),
    #[error("eigensolver did not converge after {iterations} Laplacian applications (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("dense eigensolve limited to {limit} vertices, graph has {vertices}")]
    DenseLimit { vertices: usize, limit: usize },
    #[error("Matrix Market: {0}")]
    MatrixMarket(String),
    #[error("I/O: {0}")]
    Io(String),
}
