//! Bayesian optimization with expected improvement over a GP, random
//! forest or MLP-ensemble model of the full-fidelity observations.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use super::ei::expected_improvement;
use crate::instance::Instance;
use crate::models::encoding::Encoder;
use crate::models::gp::{fit_gp, GpConfig, GpModel};
use crate::models::mlp::{fit_mlp_ensemble, MlpConfig, MlpEnsemble};
use crate::models::rf::{fit_rf, RfConfig, RfModel};
use crate::models::Matrix;
use crate::nelder_mead::NelderMead;
use crate::optimizer::{evaluate_into, RunError};
use crate::rng::{stream, Stream};
use crate::space::Configuration;
use crate::trajectory::Trajectory;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SurrogateKind {
    Gp,
    Rf,
    Nn,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AcqOptimizer {
    /// Best of uniformly drawn probes.
    Random,
    /// Nelder-Mead on the encoded space from the best random probe.
    NelderMead,
    /// Every not yet evaluated full-fidelity row of a tabular instance.
    Exhaustive,
}

#[derive(Clone, Debug)]
pub struct BoConfig {
    pub surrogate: SurrogateKind,
    pub acq: AcqOptimizer,
    /// Initial design size per non-budget dimension.
    pub init_per_dim: usize,
    pub random_probes: usize,
    pub nm_probes: usize,
    pub nm_ftol: f64,
    pub nm_max_evals: usize,
    pub gp: GpConfig,
    pub rf: RfConfig,
    pub nn: MlpConfig,
}

impl BoConfig {
    pub fn new(surrogate: SurrogateKind, acq: AcqOptimizer) -> Self {
        Self {
            surrogate,
            acq,
            init_per_dim: 5,
            random_probes: 10_000,
            nm_probes: 100,
            nm_ftol: 1e-4,
            nm_max_evals: 500,
            gp: GpConfig::default(),
            rf: RfConfig::default(),
            nn: MlpConfig {
                hidden: vec![32, 32],
                members: 5,
                max_epochs: 100,
                batch_size: 16,
                learning_rate: 3e-3,
                validation_fraction: 0.0,
                min_samples: 2,
                clamp: false,
                ..MlpConfig::default()
            },
        }
    }
}

enum Model {
    Gp(GpModel),
    Rf(RfModel),
    Nn(MlpEnsemble),
}

impl Model {
    fn predict(&self, x: &[f64]) -> (f64, f64) {
        match self {
            Model::Gp(m) => m.predict(x),
            Model::Rf(m) => m.predict(x),
            Model::Nn(m) => {
                let preds: Vec<f64> = m.member_predictions(x).iter().map(|p| p[0]).collect();
                let n = preds.len() as f64;
                let mean = preds.iter().sum::<f64>() / n;
                let var = preds.iter().map(|p| (p - mean) * (p - mean)).sum::<f64>() / n;
                (mean, crate::math::sqrt(var))
            }
        }
    }
}

fn fit(cfg: &BoConfig, x: &Matrix, y: &[f64], rng: &mut Stream) -> Option<Model> {
    match cfg.surrogate {
        SurrogateKind::Gp => match fit_gp(x, y, &cfg.gp, rng) {
            Ok(m) => Some(Model::Gp(m)),
            Err(e) => {
                log::warn!("GP fit failed: {e}");
                None
            }
        },
        SurrogateKind::Rf => Some(Model::Rf(fit_rf(x, y, &cfg.rf, rng))),
        SurrogateKind::Nn => {
            let ym = Matrix::new(y.len(), 1, y.to_vec());
            match fit_mlp_ensemble(x, &ym, &cfg.nn, rng.random()) {
                Ok(m) => Some(Model::Nn(m)),
                Err(e) => {
                    log::warn!("MLP fit failed: {e}");
                    None
                }
            }
        }
    }
}

struct Proposer<'a> {
    instance: &'a Instance,
    encoder: Encoder,
    candidates: Option<Vec<(usize, Configuration)>>,
    used: Vec<bool>,
}

impl Proposer<'_> {
    fn encode(&self, c: &Configuration) -> Vec<f64> {
        self.encoder.encode(self.instance.space(), c).expect("proposals are valid")
    }

    fn mark(&mut self, c: &Configuration) {
        if let Some(row) = self.instance.row_of(c) {
            self.used[row] = true;
        }
    }

    fn propose(&self, cfg: &BoConfig, model: &Model, best: f64, rng: &mut Stream) -> Option<Configuration> {
        let space = self.instance.space();
        let ei = |x: &[f64]| {
            let (m, s) = model.predict(x);
            expected_improvement(m, s, best)
        };
        match cfg.acq {
            AcqOptimizer::Random => {
                let mut top: Option<(f64, Configuration)> = None;
                for _ in 0..cfg.random_probes.max(1) {
                    let c = space.sample_full_fidelity(rng);
                    let v = ei(&self.encode(&c));
                    if top.as_ref().is_none_or(|(b, _)| v > *b) {
                        top = Some((v, c));
                    }
                }
                top.map(|t| t.1)
            }
            AcqOptimizer::NelderMead => {
                let mut start: Option<(f64, Vec<f64>)> = None;
                for _ in 0..cfg.nm_probes.max(1) {
                    let x = self.encode(&space.sample_full_fidelity(rng));
                    let v = ei(&x);
                    if start.as_ref().is_none_or(|(b, _)| v > *b) {
                        start = Some((v, x));
                    }
                }
                let (_, x0) = start?;
                let w = self.encoder.width();
                let nm = NelderMead {
                    max_evals: cfg.nm_max_evals,
                    ftol: cfg.nm_ftol,
                    ..NelderMead::new(vec![0.0; w], vec![1.0; w])
                };
                let project = |x: &[f64]| self.encode(&self.encoder.decode(space, x));
                let m = nm.minimize(|x| -ei(&project(x)), &x0);
                Some(self.encoder.decode(space, &m.x))
            }
            AcqOptimizer::Exhaustive => {
                let mut top: Option<(f64, usize)> = None;
                for (k, (row, c)) in self.candidates.as_ref()?.iter().enumerate() {
                    if self.used[*row] {
                        continue;
                    }
                    let v = ei(&self.encode(c));
                    if top.is_none_or(|(b, _)| v > b) {
                        top = Some((v, k));
                    }
                }
                top.map(|(_, k)| self.candidates.as_ref().expect("checked")[k].1.clone())
            }
        }
    }
}

/// Runs BO at full fidelity: a uniform initial design of
/// `init_per_dim * D` points, then one EI-maximizing proposal per
/// iteration from a model refit on all observations.
pub fn run_bo(instance: &Instance, cfg: &BoConfig, budget: f64, seed: u64) -> Result<Trajectory, RunError> {
    let space = instance.space();
    let init = cfg.init_per_dim * space.dim();
    if !(budget > init as f64) {
        return Err(RunError::BudgetTooSmall { budget, needed: init as f64 + 1.0 });
    }
    let candidates = match cfg.acq {
        AcqOptimizer::Exhaustive => {
            Some(instance.candidates().ok_or(RunError::Unsupported("exhaustive acquisition needs a tabular instance"))?)
        }
        _ => None,
    };
    let rows = instance.tabular().map_or(0, |t| t.rows());
    let mut p = Proposer { instance, encoder: Encoder::without_budget(space), candidates, used: vec![false; rows] };
    let mut rng = stream(seed);
    let mut traj = Trajectory::new(budget, instance.directions());

    for _ in 0..init {
        let c = space.sample_full_fidelity(&mut rng);
        p.mark(&c);
        if !evaluate_into(instance, &mut traj, c)? {
            return Ok(traj);
        }
    }
    while traj.fits(1.0) {
        let obs: Vec<_> = traj.records().iter().filter(|r| r.full_fidelity).collect();
        let rows: Vec<Vec<f64>> = obs.iter().map(|r| p.encode(&r.config)).collect();
        let y: Vec<f64> = obs.iter().map(|r| traj.oriented(r)[0]).collect();
        let best = y.iter().copied().fold(f64::INFINITY, f64::min);
        let model = fit(cfg, &Matrix::from_rows(&rows), &y, &mut rng);
        let proposal = match &model {
            Some(m) => p.propose(cfg, m, best, &mut rng),
            None => None,
        };
        let c = match (proposal, &model) {
            (Some(c), _) => c,
            (None, Some(_)) if cfg.acq == AcqOptimizer::Exhaustive => break,
            _ => {
                traj.note_fallback();
                log::warn!("falling back to a random proposal at iteration {}", traj.len());
                space.sample_full_fidelity(&mut rng)
            }
        };
        p.mark(&c);
        if !evaluate_into(instance, &mut traj, c)? {
            break;
        }
    }
    Ok(traj)
}
