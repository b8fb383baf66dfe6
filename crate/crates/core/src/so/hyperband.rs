//! Hyperband: successive-halving brackets cycled until the budget runs out.

use alloc::vec::Vec;

use crate::instance::Instance;
use crate::math::{ceil, pow};
use crate::optimizer::{evaluate_into, RunError};
use crate::rng::stream;
use crate::space::Configuration;
use crate::trajectory::Trajectory;

#[derive(Clone, Debug, PartialEq)]
pub struct Bracket {
    pub s: usize,
    /// `(configurations, fidelity)` per rung.
    pub rungs: Vec<(usize, f64)>,
}

/// Brackets `s = s_max, ..., 0` with `s_max = floor(log_eta(r_max / r_min))`.
/// Bracket `s` starts `ceil((s_max + 1) / (s + 1) * eta^s)` configurations
/// at `r_max * eta^-s`; rung `i` keeps `floor(n * eta^-i)` at `r * eta^i`.
pub fn schedule(r_min: f64, r_max: f64, eta: usize) -> Vec<Bracket> {
    assert!(eta >= 2 && r_min > 0.0 && r_max >= r_min);
    let e = eta as f64;
    let mut s_max = 0;
    while r_min * pow(e, (s_max + 1) as f64) <= r_max * (1.0 + 1e-12) {
        s_max += 1;
    }
    (0..=s_max)
        .rev()
        .map(|s| {
            let n = ceil((s_max + 1) as f64 / (s + 1) as f64 * pow(e, s as f64) - 1e-9) as usize;
            let r = r_max * pow(e, -(s as f64));
            let mut count = n;
            let rungs = (0..=s)
                .map(|i| {
                    let rung = (count, r * pow(e, i as f64));
                    count /= eta;
                    rung
                })
                .collect();
            Bracket { s, rungs }
        })
        .collect()
}

/// Hyperband on the instance's fidelity parameter. A rung is only started
/// if all of its evaluations fit into the remaining budget; otherwise the
/// run ends.
pub fn run_hyperband(instance: &Instance, eta: usize, budget: f64, seed: u64) -> Result<Trajectory, RunError> {
    let space = instance.space();
    let (r_min, r_max) = space
        .budget_param()
        .and_then(|p| p.domain.bounds())
        .ok_or(RunError::Unsupported("hyperband needs a fidelity parameter"))?;
    if eta < 2 {
        return Err(RunError::Unsupported("hyperband needs eta >= 2"));
    }
    let brackets = schedule(r_min, r_max, eta);
    let mut rng = stream(seed);
    let mut traj = Trajectory::new(budget, instance.directions());
    loop {
        for bracket in &brackets {
            let mut pool: Vec<Configuration> = Vec::new();
            for (i, &(n, r)) in bracket.rungs.iter().enumerate() {
                let z = instance.snap_fidelity(r);
                let configs: Vec<Configuration> = if i == 0 {
                    (0..n).map(|_| space.with_fidelity(&space.sample_one(&mut rng), z)).collect()
                } else {
                    pool.iter().take(n).map(|c| space.with_fidelity(c, z)).collect()
                };
                let unit = space.cost_of(&configs[0]);
                if !traj.fits(unit * n as f64) {
                    return Ok(traj);
                }
                let mut scored: Vec<(f64, Configuration)> = Vec::with_capacity(n);
                for c in configs {
                    let before = traj.len();
                    if !evaluate_into(instance, &mut traj, c.clone())? {
                        return Ok(traj);
                    }
                    let value = traj.oriented(&traj.records()[before])[0];
                    scored.push((if value.is_nan() { f64::INFINITY } else { value }, c));
                }
                scored.sort_by(|a, b| a.0.total_cmp(&b.0));
                pool = scored.into_iter().map(|(_, c)| c).collect();
            }
        }
    }
}
