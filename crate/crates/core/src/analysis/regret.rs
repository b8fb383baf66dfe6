use alloc::vec::Vec;

use thiserror::Error;

use crate::trajectory::Trajectory;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RegretError {
    #[error("all observed values are equal; regret is undefined")]
    Degenerate,
    #[error("no full-fidelity observations")]
    Empty,
}

/// Stepwise regret after each evaluation: `(cumulative_budget, regret)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RegretCurve {
    pub points: Vec<(f64, f64)>,
}

impl RegretCurve {
    /// Regret after the last evaluation finished within `budget`; 1 before
    /// any.
    pub fn at(&self, budget: f64) -> f64 {
        let k = self.points.partition_point(|(b, _)| *b <= budget);
        if k == 0 { 1.0 } else { self.points[k - 1].1 }
    }

    pub fn last(&self) -> f64 {
        self.points.last().map_or(1.0, |p| p.1)
    }
}

/// `(cumulative_budget, minimized value)` per evaluation of `target`, with
/// `None` for partial-fidelity evaluations.
pub fn run_values(traj: &Trajectory, target: usize) -> Vec<(f64, Option<f64>)> {
    let dir = traj.directions()[target];
    traj.records()
        .iter()
        .map(|r| (r.cumulative_budget, r.full_fidelity.then(|| dir.orient(r.values[target]))))
        .collect()
}

/// Regret curves of all runs on one instance, normalized by the best and
/// worst value seen across every run: `(incumbent - best) / (worst - best)`.
/// Only observed values enter; a run has regret 1 until its first.
pub fn normalized_regret(runs: &[Vec<(f64, Option<f64>)>]) -> Result<Vec<RegretCurve>, RegretError> {
    let mut best = f64::INFINITY;
    let mut worst = f64::NEG_INFINITY;
    for v in runs.iter().flatten().filter_map(|p| p.1) {
        best = best.min(v);
        worst = worst.max(v);
    }
    if best > worst {
        return Err(RegretError::Empty);
    }
    if !(worst > best) {
        return Err(RegretError::Degenerate);
    }
    let range = worst - best;
    Ok(runs
        .iter()
        .map(|run| {
            let mut inc = f64::INFINITY;
            let points = run
                .iter()
                .map(|(b, v)| {
                    if let Some(v) = v {
                        inc = inc.min(*v);
                    }
                    (*b, if inc.is_finite() { (inc - best) / range } else { 1.0 })
                })
                .collect();
            RegretCurve { points }
        })
        .collect())
}
