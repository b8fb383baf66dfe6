//! MEGO: per-objective EI, then a uniform pick among the candidates whose
//! EI vectors are Pareto optimal.

use alloc::vec::Vec;

use rand::Rng;

use super::pareto::nondominated_indices;
use super::{initial_design, require_mo, MoConfig, Observations};
use crate::instance::Instance;
use crate::models::encoding::Encoder;
use crate::models::rf::{fit_rf, RfModel};
use crate::optimizer::{evaluate_into, RunError};
use crate::rng::{stream, Stream};
use crate::so::ei::expected_improvement;
use crate::trajectory::Trajectory;

/// Uniform choice among the candidates with nondominated (maximized) EI
/// vectors.
pub fn choose_from_front(ei: &[Vec<f64>], rng: &mut Stream) -> usize {
    let negated: Vec<Vec<f64>> = ei.iter().map(|v| v.iter().map(|x| -x).collect()).collect();
    let front = nondominated_indices(&negated);
    front[rng.random_range(0..front.len())]
}

pub fn run_mego(instance: &Instance, cfg: &MoConfig, budget: f64, seed: u64) -> Result<Trajectory, RunError> {
    require_mo(instance)?;
    let space = instance.space();
    let encoder = Encoder::without_budget(space);
    let mut rng = stream(seed);
    let mut traj = Trajectory::new(budget, instance.directions());
    if !initial_design(instance, &mut traj, &mut rng, cfg.init_per_dim * space.dim())? {
        return Ok(traj);
    }
    let m = instance.targets();
    while traj.fits(1.0) {
        let obs = Observations::collect(instance, &encoder, &traj);
        let models: Vec<RfModel> = (0..m).map(|j| fit_rf(&obs.x, &obs.column(j), &cfg.rf, &mut rng)).collect();
        let mut candidates = Vec::with_capacity(cfg.probes);
        let mut ei = Vec::with_capacity(cfg.probes);
        for _ in 0..cfg.probes.max(1) {
            let c = space.sample_full_fidelity(&mut rng);
            let x = encoder.encode(space, &c).expect("sampled configs are valid");
            ei.push(
                models
                    .iter()
                    .enumerate()
                    .map(|(j, model)| {
                        let (mu, sd) = model.predict(&x);
                        expected_improvement(mu, sd, obs.lower[j])
                    })
                    .collect::<Vec<f64>>(),
            );
            candidates.push(c);
        }
        let pick = choose_from_front(&ei, &mut rng);
        if !evaluate_into(instance, &mut traj, candidates.swap_remove(pick))? {
            break;
        }
    }
    Ok(traj)
}
