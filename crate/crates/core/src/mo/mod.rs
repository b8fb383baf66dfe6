//! Multi-objective optimizers and their building blocks.

pub mod ehvi;
pub mod hypervolume;
pub mod mego;
pub mod mies;
pub mod parego;
pub mod pareto;

pub use ehvi::{ehvi_estimate, run_ehvi};
pub use hypervolume::{contributions, hv_improvement, hypervolume, HvError};
pub use mego::{choose_from_front, run_mego};
pub use mies::run_mies;
pub use parego::{run_parego, simplex_weights, tchebycheff};
pub use pareto::{dominates, nondominated_indices, nondominated_sort, ParetoArchive};

use alloc::vec::Vec;

use crate::instance::Instance;
use crate::models::encoding::Encoder;
use crate::models::rf::RfConfig;
use crate::models::Matrix;
use crate::optimizer::{evaluate_into, RunError};
use crate::rng::Stream;
use crate::trajectory::Trajectory;

#[derive(Clone, Debug)]
pub struct MoConfig {
    pub init_per_dim: usize,
    /// Random candidates scored by the acquisition per iteration.
    pub probes: usize,
    /// Posterior draws per EHVI estimate.
    pub ehvi_draws: usize,
    /// Augmentation weight of the ParEGO scalarization.
    pub rho: f64,
    pub rf: RfConfig,
}

impl Default for MoConfig {
    fn default() -> Self {
        Self { init_per_dim: 5, probes: 10_000, ehvi_draws: 100, rho: 0.05, rf: RfConfig::default() }
    }
}

pub(crate) fn require_mo(instance: &Instance) -> Result<(), RunError> {
    match instance.targets() {
        m if m >= 2 => Ok(()),
        got => Err(RunError::TargetCount { needed: "at least 2", got }),
    }
}

/// Full-fidelity observations: encoded inputs, minimized objectives and
/// their per-objective observed range.
pub(crate) struct Observations {
    pub x: Matrix,
    pub y: Vec<Vec<f64>>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Observations {
    pub fn collect(instance: &Instance, encoder: &Encoder, traj: &Trajectory) -> Self {
        let m = instance.targets();
        let mut rows = Vec::new();
        let mut y = Vec::new();
        for r in traj.records().iter().filter(|r| r.full_fidelity) {
            rows.push(encoder.encode(instance.space(), &r.config).expect("recorded configs are valid"));
            y.push(traj.oriented(r));
        }
        let lower = (0..m).map(|j| y.iter().map(|v: &Vec<f64>| v[j]).fold(f64::INFINITY, f64::min)).collect();
        let upper = (0..m).map(|j| y.iter().map(|v: &Vec<f64>| v[j]).fold(f64::NEG_INFINITY, f64::max)).collect();
        Self { x: Matrix::from_rows(&rows), y, lower, upper }
    }

    pub fn scale(&self, j: usize) -> f64 {
        let r = self.upper[j] - self.lower[j];
        if r > 0.0 { r } else { 1.0 }
    }

    /// Objectives mapped so the observed range of each becomes `[0, 1]`.
    pub fn normalized(&self) -> Vec<Vec<f64>> {
        self.y
            .iter()
            .map(|v| v.iter().enumerate().map(|(j, y)| (y - self.lower[j]) / self.scale(j)).collect())
            .collect()
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.y.iter().map(|v| v[j]).collect()
    }
}

/// Evaluates `n` uniform full-fidelity configurations; `false` once the
/// budget is exhausted.
pub(crate) fn initial_design(
    instance: &Instance,
    traj: &mut Trajectory,
    rng: &mut Stream,
    n: usize,
) -> Result<bool, RunError> {
    for _ in 0..n {
        let c = instance.space().sample_full_fidelity(rng);
        if !evaluate_into(instance, traj, c)? {
            return Ok(false);
        }
    }
    Ok(true)
}
