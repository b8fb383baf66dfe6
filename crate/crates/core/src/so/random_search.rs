use crate::instance::Instance;
use crate::optimizer::{evaluate_into, RunError};
use crate::rng::stream;
use crate::trajectory::Trajectory;

/// Uniform full-fidelity sampling until the next evaluation would overrun
/// `budget`.
pub fn run_random_search(instance: &Instance, budget: f64, seed: u64) -> Result<Trajectory, RunError> {
    let mut rng = stream(seed);
    let mut traj = Trajectory::new(budget, instance.directions());
    while traj.fits(1.0) {
        let c = instance.space().sample_full_fidelity(&mut rng);
        if !evaluate_into(instance, &mut traj, c)? {
            break;
        }
    }
    Ok(traj)
}
