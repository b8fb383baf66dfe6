//! Evaluation statistics: normalized regret, ranks, consensus rankings,
//! Friedman and Nemenyi tests, ECDFs and hypervolume traces.

pub mod consensus;
pub mod ecdf;
pub mod hv;
pub mod ranks;
pub mod regret;
pub mod stats;

pub use consensus::{kemeny_consensus, kendall_distance, ConsensusError, ConsensusResult};
pub use ecdf::Ecdf;
pub use hv::{hv_trajectory, HvContext, HvTrace};
pub use ranks::{anytime_scores, budget_fractions, mean_ranks, order_by_rank, RankMatrix};
pub use regret::{normalized_regret, run_values, RegretCurve, RegretError};
pub use stats::{friedman_test, nemenyi_cd, FriedmanResult, StatsError};
