//! Algorithms for benchmarking hyperparameter optimizers on real, tabular and
//! surrogate instances: search spaces, test functions, regression models,
//! single- and multi-objective optimizers and the evaluation statistics.
//!
//! Everything here is `no_std` + `alloc` and deterministic given a seed.
#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]
extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod instance;
pub mod math;
pub mod mo;
pub mod models;
pub mod nelder_mead;
pub mod optimizer;
pub mod protocol;
pub mod rng;
pub mod so;
pub mod space;
pub mod testfuncs;
pub mod trajectory;

pub use instance::{Direction, Instance, InstanceError, Mode, ObjectiveVector};
pub use optimizer::{run_optimizer, OptimizerId, RunError, RunOutput, RunSettings};
pub use protocol::{budget_for, budget_for_dim, REPLICATIONS};
pub use space::{Configuration, ParamDef, SearchSpace, SpaceError, Value};
pub use testfuncs::SyntheticFunction;
pub use trajectory::{EvalRecord, Trajectory};
