//! ParEGO: EI on a random augmented-Tchebycheff scalarization per iteration.

use alloc::vec::Vec;

use rand_distr::{Distribution, Exp1};

use super::{initial_design, require_mo, MoConfig, Observations};
use crate::instance::Instance;
use crate::models::encoding::Encoder;
use crate::models::rf::fit_rf;
use crate::optimizer::{evaluate_into, RunError};
use crate::rng::{stream, Stream};
use crate::so::ei::expected_improvement;
use crate::trajectory::Trajectory;

/// `max_i w_i y_i + rho * sum_i w_i y_i`.
pub fn tchebycheff(weights: &[f64], y: &[f64], rho: f64) -> f64 {
    let mut max = f64::NEG_INFINITY;
    let mut sum = 0.0;
    for (w, v) in weights.iter().zip(y) {
        max = max.max(w * v);
        sum += w * v;
    }
    max + rho * sum
}

/// A uniform draw from the probability simplex.
pub fn simplex_weights(m: usize, rng: &mut Stream) -> Vec<f64> {
    let e: Vec<f64> = (0..m).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = e.iter().sum();
    e.iter().map(|v| v / total).collect()
}

pub fn run_parego(instance: &Instance, cfg: &MoConfig, budget: f64, seed: u64) -> Result<Trajectory, RunError> {
    require_mo(instance)?;
    let space = instance.space();
    let encoder = Encoder::without_budget(space);
    let mut rng = stream(seed);
    let mut traj = Trajectory::new(budget, instance.directions());
    if !initial_design(instance, &mut traj, &mut rng, cfg.init_per_dim * space.dim())? {
        return Ok(traj);
    }
    while traj.fits(1.0) {
        let obs = Observations::collect(instance, &encoder, &traj);
        let w = simplex_weights(instance.targets(), &mut rng);
        let s: Vec<f64> = obs.normalized().iter().map(|y| tchebycheff(&w, y, cfg.rho)).collect();
        let best = s.iter().copied().fold(f64::INFINITY, f64::min);
        let model = fit_rf(&obs.x, &s, &cfg.rf, &mut rng);
        let mut top: Option<(f64, crate::space::Configuration)> = None;
        for _ in 0..cfg.probes.max(1) {
            let c = space.sample_full_fidelity(&mut rng);
            let (m, sd) = model.predict(&encoder.encode(space, &c).expect("sampled configs are valid"));
            let v = expected_improvement(m, sd, best);
            if top.as_ref().is_none_or(|(b, _)| v > *b) {
                top = Some((v, c));
            }
        }
        let (_, c) = top.expect("at least one probe");
        if !evaluate_into(instance, &mut traj, c)? {
            break;
        }
    }
    Ok(traj)
}
