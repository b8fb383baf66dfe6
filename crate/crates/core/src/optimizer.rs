//! Optimizer identifiers and a uniform entry point.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use thiserror::Error;

use crate::instance::{Instance, InstanceError};
use crate::mo::{self, MoConfig, ParetoArchive};
use crate::so::{self, AcqOptimizer, BoConfig, SurrogateKind};
use crate::space::Configuration;
use crate::trajectory::Trajectory;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RunError {
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error("budget {budget} too small, need at least {needed}")]
    BudgetTooSmall { budget: f64, needed: f64 },
    #[error("{0}")]
    Unsupported(&'static str),
    #[error("optimizer needs {needed} targets, instance has {got}")]
    TargetCount { needed: &'static str, got: usize },
}

/// Evaluates `config` and appends it. Returns `false` without evaluating
/// when its cost would overrun the budget.
pub(crate) fn evaluate_into(instance: &Instance, traj: &mut Trajectory, config: Configuration) -> Result<bool, RunError> {
    let space = instance.space();
    if !traj.fits(space.cost_of(&config)) {
        return Ok(false);
    }
    let out = instance.evaluate(&config)?;
    let full = space.is_full_fidelity(&config);
    Ok(traj.push(config, out, full))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OptimizerId {
    RandomSearch,
    Bo(SurrogateKind, AcqOptimizer),
    Hyperband,
    RandomMo,
    RandomX4,
    ParEgo,
    Mego,
    Ehvi,
    Mies,
}

impl OptimizerId {
    pub fn all() -> Vec<OptimizerId> {
        let mut ids = alloc::vec![OptimizerId::RandomSearch];
        for s in [SurrogateKind::Gp, SurrogateKind::Rf, SurrogateKind::Nn] {
            for a in [AcqOptimizer::Random, AcqOptimizer::NelderMead, AcqOptimizer::Exhaustive] {
                ids.push(OptimizerId::Bo(s, a));
            }
        }
        ids.extend([
            OptimizerId::Hyperband,
            OptimizerId::RandomMo,
            OptimizerId::RandomX4,
            OptimizerId::ParEgo,
            OptimizerId::Mego,
            OptimizerId::Ehvi,
            OptimizerId::Mies,
        ]);
        ids
    }

    pub fn is_multi_objective(self) -> bool {
        matches!(
            self,
            OptimizerId::RandomMo | OptimizerId::RandomX4 | OptimizerId::ParEgo | OptimizerId::Mego | OptimizerId::Ehvi | OptimizerId::Mies
        )
    }

    /// Factor applied to the protocol budget for this optimizer.
    pub fn budget_multiplier(self) -> usize {
        if self == OptimizerId::RandomX4 { 4 } else { 1 }
    }
}

impl fmt::Display for OptimizerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OptimizerId::RandomSearch => f.write_str("rs"),
            OptimizerId::Bo(s, a) => {
                let s = match s {
                    SurrogateKind::Gp => "gp",
                    SurrogateKind::Rf => "rf",
                    SurrogateKind::Nn => "nn",
                };
                let a = match a {
                    AcqOptimizer::Random => "rs",
                    AcqOptimizer::NelderMead => "nm",
                    AcqOptimizer::Exhaustive => "ex",
                };
                write!(f, "bo-{s}-{a}")
            }
            OptimizerId::Hyperband => f.write_str("hb"),
            OptimizerId::RandomMo => f.write_str("rs-mo"),
            OptimizerId::RandomX4 => f.write_str("rs-x4"),
            OptimizerId::ParEgo => f.write_str("parego"),
            OptimizerId::Mego => f.write_str("mego"),
            OptimizerId::Ehvi => f.write_str("ehvi"),
            OptimizerId::Mies => f.write_str("mies"),
        }
    }
}

impl FromStr for OptimizerId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        OptimizerId::all()
            .into_iter()
            .find(|id| alloc::format!("{id}") == s)
            .ok_or_else(|| alloc::format!("unknown optimizer `{s}`"))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunOutput {
    pub trajectory: Trajectory,
    /// Nondominated full-fidelity evaluations, for multi-objective runs.
    pub archive: Option<ParetoArchive>,
}

/// Settings shared by every optimizer run; defaults follow the protocol.
#[derive(Clone, Debug)]
pub struct RunSettings {
    pub hyperband_eta: usize,
    pub bo: Option<BoConfig>,
    pub mo: MoConfig,
}

impl Default for RunSettings {
    fn default() -> Self {
        Self { hyperband_eta: 3, bo: None, mo: MoConfig::default() }
    }
}

/// Runs `id` on `instance` with the protocol `budget` (multiplied for the
/// quadrupled random baseline).
pub fn run_optimizer(
    id: OptimizerId,
    instance: &Instance,
    budget: f64,
    seed: u64,
    settings: &RunSettings,
) -> Result<RunOutput, RunError> {
    if !id.is_multi_objective() && id != OptimizerId::RandomSearch && instance.targets() != 1 {
        return Err(RunError::TargetCount { needed: "exactly 1", got: instance.targets() });
    }
    if id.is_multi_objective() {
        mo::require_mo(instance)?;
    }
    let budget = budget * id.budget_multiplier() as f64;
    let trajectory = match id {
        OptimizerId::RandomSearch | OptimizerId::RandomMo | OptimizerId::RandomX4 => {
            so::run_random_search(instance, budget, seed)?
        }
        OptimizerId::Bo(s, a) => {
            let cfg = match &settings.bo {
                Some(c) => BoConfig { surrogate: s, acq: a, ..c.clone() },
                None => BoConfig::new(s, a),
            };
            so::run_bo(instance, &cfg, budget, seed)?
        }
        OptimizerId::Hyperband => so::run_hyperband(instance, settings.hyperband_eta, budget, seed)?,
        OptimizerId::ParEgo => mo::run_parego(instance, &settings.mo, budget, seed)?,
        OptimizerId::Mego => mo::run_mego(instance, &settings.mo, budget, seed)?,
        OptimizerId::Ehvi => mo::run_ehvi(instance, &settings.mo, budget, seed)?,
        OptimizerId::Mies => mo::run_mies(instance, budget, seed)?,
    };
    let archive = (instance.targets() >= 2).then(|| ParetoArchive::from_trajectory(&trajectory));
    Ok(RunOutput { trajectory, archive })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for id in OptimizerId::all() {
            let s = alloc::format!("{id}");
            assert_eq!(s.parse::<OptimizerId>().unwrap(), id);
        }
        assert!("bo-xx-rs".parse::<OptimizerId>().is_err());
        assert_eq!(OptimizerId::all().len(), 17);
    }
}
