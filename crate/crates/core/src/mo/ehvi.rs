//! EHVI: Monte Carlo expected hypervolume improvement under independent
//! normal posteriors per objective.

use alloc::vec;
use alloc::vec::Vec;

use rand_distr::{Distribution, StandardNormal};

use super::hypervolume::hv_improvement;
use super::pareto::nondominated_indices;
use super::{initial_design, require_mo, MoConfig, Observations};
use crate::instance::Instance;
use crate::models::encoding::Encoder;
use crate::models::rf::{fit_rf, RfModel};
use crate::optimizer::{evaluate_into, RunError};
use crate::rng::{stream, Stream};
use crate::space::Configuration;
use crate::trajectory::Trajectory;

/// Reference coordinate for normalized objectives.
pub const REFERENCE: f64 = 1.1;

/// Mean hypervolume improvement of `front` over `draws` samples of
/// `N(mean, sd^2)` per objective.
pub fn ehvi_estimate(
    front: &[Vec<f64>],
    mean: &[f64],
    sd: &[f64],
    reference: &[f64],
    draws: usize,
    rng: &mut Stream,
) -> f64 {
    let m = mean.len();
    let optimistic: Vec<f64> = mean.iter().zip(sd).map(|(mu, s)| mu - 4.0 * s).collect();
    let hopeless = hv_improvement(front, &optimistic, reference) == 0.0;
    let mut total = 0.0;
    let mut y = vec![0.0; m];
    for _ in 0..draws {
        for j in 0..m {
            let z: f64 = StandardNormal.sample(rng);
            y[j] = mean[j] + sd[j] * z;
        }
        // A draw no better than a dominated corner is itself dominated.
        if hopeless && y.iter().zip(&optimistic).all(|(a, b)| a >= b) {
            continue;
        }
        total += hv_improvement(front, &y, reference);
    }
    total / draws.max(1) as f64
}

pub fn run_ehvi(instance: &Instance, cfg: &MoConfig, budget: f64, seed: u64) -> Result<Trajectory, RunError> {
    require_mo(instance)?;
    let space = instance.space();
    let encoder = Encoder::without_budget(space);
    let mut rng = stream(seed);
    let mut traj = Trajectory::new(budget, instance.directions());
    if !initial_design(instance, &mut traj, &mut rng, cfg.init_per_dim * space.dim())? {
        return Ok(traj);
    }
    let m = instance.targets();
    let reference = vec![REFERENCE; m];
    while traj.fits(1.0) {
        let obs = Observations::collect(instance, &encoder, &traj);
        let normalized = obs.normalized();
        let front: Vec<Vec<f64>> = nondominated_indices(&normalized).into_iter().map(|i| normalized[i].clone()).collect();
        let models: Vec<RfModel> = (0..m).map(|j| fit_rf(&obs.x, &obs.column(j), &cfg.rf, &mut rng)).collect();
        let mut top: Option<(f64, Configuration)> = None;
        let mut mean = vec![0.0; m];
        let mut sd = vec![0.0; m];
        for _ in 0..cfg.probes.max(1) {
            let c = space.sample_full_fidelity(&mut rng);
            let x = encoder.encode(space, &c).expect("sampled configs are valid");
            for (j, model) in models.iter().enumerate() {
                let (mu, s) = model.predict(&x);
                mean[j] = (mu - obs.lower[j]) / obs.scale(j);
                sd[j] = s / obs.scale(j);
            }
            let v = ehvi_estimate(&front, &mean, &sd, &reference, cfg.ehvi_draws, &mut rng);
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

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dominated_point_mass_gains_nothing() {
        let front = vec![vec![0.2, 0.2]];
        let v = ehvi_estimate(&front, &[0.5, 0.5], &[0.0, 0.0], &[1.1, 1.1], 100, &mut stream(1));
        assert_eq!(v, 0.0);
    }

    #[test]
    fn point_mass_matches_deterministic_improvement() {
        let front = vec![vec![0.0, 0.5], vec![0.5, 0.0]];
        let v = ehvi_estimate(&front, &[0.25, 0.25], &[0.0, 0.0], &[1.1, 1.1], 50, &mut stream(2));
        assert!((v - hv_improvement(&front, &[0.25, 0.25], &[1.1, 1.1])).abs() < 1e-15);
    }

    #[test]
    fn estimate_is_nonnegative() {
        let mut rng = stream(3);
        let front = vec![vec![0.1, 0.6], vec![0.4, 0.3], vec![0.9, 0.0]];
        for k in 0..200 {
            let t = k as f64 / 200.0;
            let v = ehvi_estimate(&front, &[t, 1.0 - t], &[0.2, 0.1], &[1.1, 1.1], 20, &mut rng);
            assert!(v >= 0.0);
        }
    }
}
