//! Random walks on graphs: exact small-scale computation and seeded Monte Carlo.
//!
//! - [`graph`]: weighted multigraphs, generators, Cartesian products
//! - [`exact`]: transition kernels, hitting/cover times, spectra, mixing
//! - [`electrical`]: effective resistance, flows, cover-time bounds
//! - [`walk`]: walk simulation and estimators
//! - [`config_model`]: configuration-model graphs and niceness checks
//! - [`product`]: local observations and block decompositions
//! - [`weighting`]: degree-based edge weighting schemes
//! - [`conductance`]: exact and sweep conductance

pub mod conductance;
pub mod config_model;
pub mod electrical;
pub mod error;
pub mod exact;
pub mod graph;
pub mod linalg;
pub mod par;
pub mod product;
pub mod rng;
pub mod walk;
pub mod weighting;

pub use error::{Error, Result};
pub use exact::TransitionKernel;
pub use graph::{cartesian_product, Edge, Graph, GraphFamily};
pub use par::Executor;
pub use weighting::Scheme;

/// Tolerances shared by every module.
pub mod tol {
    /// Invariants of constructed objects (row sums, probabilities).
    pub const CONSTRUCTION: f64 = 1e-12;
    /// Relative accuracy expected from a direct linear solve.
    pub const SOLVE: f64 = 1e-8;
    /// Agreement between two independent computations of one quantity.
    pub const CROSS_ORACLE: f64 = 1e-4;
}

/// `h(n) = 1 + 1/2 + ... + 1/n`, with `h(0) = 0`.
pub fn harmonic(n: usize) -> f64 {
    (1..=n).rev().map(|k| 1.0 / k as f64).sum()
}
