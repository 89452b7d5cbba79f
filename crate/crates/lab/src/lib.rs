//! Experiment harness for `arrhenius-core`: sweep configuration, seeded
//! parallel Monte Carlo, bound verification and file formats.
//!
//! Every trial is keyed by `derive_seed(master_seed, hash(point label),
//! trial)` and drawn from ChaCha8, so sweep output is byte-identical for a
//! given configuration whatever the worker count.

pub mod config;
pub mod experiments;
pub mod io;

pub use config::{ConfigError, GraphSpec, GridPoint, Mode, SolverChoice, SweepConfig};
pub use experiments::{run_sweep, run_trial, verify_bounds, SweepResult, TrialRecord};
