//! Arrhenius-parameterized continuous-time Markov chains on disordered
//! energy landscapes over regular graphs.
//!
//! The crate is `no_std` (it needs `alloc`). It covers:
//!
//! - [`graph`]: complete, hypercube, cycle, circulant and edge-swap random
//!   regular graphs.
//! - [`landscape`]: Gaussian wells, barriers and forces, plus the random
//!   energy model coupling and separable barriers.
//! - [`dynamics`]: log-space rate matrices, exit rates, the barrier
//!   functional `A_i` and stationary distributions.
//! - [`stats`]: variances, Pearson correlation, log-sum-exp and the
//!   local–global correlation report.
//! - [`bounds`]: finite-n lower bounds on the expected correlation and the
//!   moment checks behind them.
//! - [`trajectory`]: exact event simulation and the local/global estimators.
//! - [`seed`]: deterministic seed derivation for Monte Carlo trials.
//!
//! Random draws take any [`rand::Rng`]; the std companion crate fixes the
//! generator family.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bounds;
pub mod dynamics;
mod error;
pub mod graph;
pub mod landscape;
pub mod seed;
pub mod stats;
pub mod trajectory;

pub use error::{Error, Result};
pub use graph::{Graph, GraphDiagnostics};
pub use landscape::{Landscape, LandscapeKind, LandscapeMeta, SeparableSpec};
pub use dynamics::{RateMatrix, SolveMethod, SolverOptions, StateProfile, StationaryResult};
pub use stats::RhoReport;
