//! Single-objective optimizers.

pub mod bo;
pub mod ei;
pub mod hyperband;
pub mod random_search;

pub use bo::{run_bo, AcqOptimizer, BoConfig, SurrogateKind};
pub use ei::expected_improvement;
pub use hyperband::{run_hyperband, schedule, Bracket};
pub use random_search::run_random_search;
