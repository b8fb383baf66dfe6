//! Fully connected tanh networks trained with Adam, and seeded ensembles of
//! them with Dirichlet mixture weights.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Exp1};
use thiserror::Error;

use super::scaler::{TargetScaler, Transform};
use super::Matrix;
use crate::math::sqrt;
use crate::rng::{child_seed, stream, Stream};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MlpError {
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("training loss became non-finite in member {member} at epoch {epoch}")]
    NonFinite { member: usize, epoch: usize },
    #[error("target matrix has {got} rows, inputs have {expected}")]
    Shape { expected: usize, got: usize },
}

#[derive(Clone, Debug)]
pub struct MlpConfig {
    pub hidden: Vec<usize>,
    pub members: usize,
    pub max_epochs: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    /// Epochs without validation improvement before stopping.
    pub patience: usize,
    /// Share of the data held out for early stopping; zero trains for
    /// `max_epochs` without validation.
    pub validation_fraction: f64,
    pub min_samples: usize,
    /// One transform per target; empty means identity for all.
    pub transforms: Vec<Transform>,
    pub clamp: bool,
}

impl Default for MlpConfig {
    fn default() -> Self {
        Self {
            hidden: vec![64, 64],
            members: 3,
            max_epochs: 100,
            batch_size: 32,
            learning_rate: 1e-3,
            patience: 10,
            validation_fraction: 0.25,
            min_samples: 50,
            transforms: Vec::new(),
            clamp: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PredictMode {
    /// Uniform average over members.
    Mean,
    /// Average under the ensemble's stored Dirichlet weights.
    Weighted,
}

/// A network `sizes[0] -> ... -> sizes[L]` with tanh hidden units and a
/// linear output layer. Parameters are stored flat, layer by layer, each
/// as a row-major `out x in` weight block followed by the biases.
#[derive(Clone, Debug, PartialEq)]
pub struct Mlp {
    sizes: Vec<usize>,
    params: Vec<f64>,
}

fn param_count(sizes: &[usize]) -> usize {
    sizes.windows(2).map(|w| w[0] * w[1] + w[1]).sum()
}

impl Mlp {
    /// Glorot-uniform weights, zero biases.
    pub fn new<R: Rng + ?Sized>(sizes: &[usize], rng: &mut R) -> Self {
        assert!(sizes.len() >= 2);
        let mut params = Vec::with_capacity(param_count(sizes));
        for w in sizes.windows(2) {
            let limit = sqrt(6.0 / (w[0] + w[1]) as f64);
            params.extend((0..w[0] * w[1]).map(|_| rng.random_range(-limit..limit)));
            params.extend(core::iter::repeat_n(0.0, w[1]));
        }
        Self { sizes: sizes.to_vec(), params }
    }

    pub fn from_params(sizes: &[usize], params: Vec<f64>) -> Option<Self> {
        (sizes.len() >= 2 && params.len() == param_count(sizes)).then(|| Self { sizes: sizes.to_vec(), params })
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    /// Activations of every layer for one input; the last is the output.
    fn activations(&self, x: &[f64]) -> Vec<Vec<f64>> {
        let last = self.sizes.len() - 2;
        let mut acts = vec![x.to_vec()];
        let mut off = 0;
        for (l, w) in self.sizes.windows(2).enumerate() {
            let (n_in, n_out) = (w[0], w[1]);
            let weights = &self.params[off..off + n_in * n_out];
            let bias = &self.params[off + n_in * n_out..off + n_in * n_out + n_out];
            let prev = &acts[l];
            let out: Vec<f64> = (0..n_out)
                .map(|o| {
                    let row = &weights[o * n_in..(o + 1) * n_in];
                    let z = bias[o] + row.iter().zip(prev).map(|(a, b)| a * b).sum::<f64>();
                    if l < last { libm::tanh(z) } else { z }
                })
                .collect();
            acts.push(out);
            off += n_in * n_out + n_out;
        }
        acts
    }

    pub fn forward(&self, x: &[f64]) -> Vec<f64> {
        self.activations(x).pop().unwrap_or_default()
    }

    /// Mean squared error over all rows and outputs, and its gradient with
    /// respect to the flat parameters.
    pub fn loss_and_grad(&self, x: &Matrix, y: &Matrix, rows: &[usize]) -> (f64, Vec<f64>) {
        let mut grad = vec![0.0; self.params.len()];
        let m = *self.sizes.last().unwrap_or(&1);
        let norm = 1.0 / (rows.len() * m) as f64;
        let layers = self.sizes.len() - 1;
        let mut offsets = Vec::with_capacity(layers);
        let mut off = 0;
        for w in self.sizes.windows(2) {
            offsets.push(off);
            off += w[0] * w[1] + w[1];
        }
        let mut loss = 0.0;
        for &r in rows {
            let acts = self.activations(x.row(r));
            let target = y.row(r);
            let mut delta: Vec<f64> = acts[layers]
                .iter()
                .zip(target)
                .map(|(a, t)| {
                    loss += (a - t) * (a - t);
                    2.0 * (a - t) * norm
                })
                .collect();
            for l in (0..layers).rev() {
                let (n_in, n_out) = (self.sizes[l], self.sizes[l + 1]);
                let o = offsets[l];
                let prev = &acts[l];
                for (j, d) in delta.iter().enumerate() {
                    let g = &mut grad[o + j * n_in..o + (j + 1) * n_in];
                    for (gi, a) in g.iter_mut().zip(prev) {
                        *gi += d * a;
                    }
                    grad[o + n_in * n_out + j] += d;
                }
                if l > 0 {
                    let weights = &self.params[o..o + n_in * n_out];
                    let mut back = vec![0.0; n_in];
                    for (j, d) in delta.iter().enumerate() {
                        for (b, w) in back.iter_mut().zip(&weights[j * n_in..(j + 1) * n_in]) {
                            *b += w * d;
                        }
                    }
                    for (b, a) in back.iter_mut().zip(prev) {
                        *b *= 1.0 - a * a;
                    }
                    delta = back;
                }
            }
        }
        (loss * norm, grad)
    }

    fn mse(&self, x: &Matrix, y: &Matrix, rows: &[usize]) -> f64 {
        let mut total = 0.0;
        for &r in rows {
            for (a, t) in self.forward(x.row(r)).iter().zip(y.row(r)) {
                total += (a - t) * (a - t);
            }
        }
        total / (rows.len() * y.cols) as f64
    }
}

struct Adam {
    m: Vec<f64>,
    v: Vec<f64>,
    t: i32,
    lr: f64,
}

impl Adam {
    fn new(n: usize, lr: f64) -> Self {
        Self { m: vec![0.0; n], v: vec![0.0; n], t: 0, lr }
    }

    fn step(&mut self, params: &mut [f64], grad: &[f64]) {
        const B1: f64 = 0.9;
        const B2: f64 = 0.999;
        self.t += 1;
        let c1 = 1.0 - libm::pow(B1, self.t as f64);
        let c2 = 1.0 - libm::pow(B2, self.t as f64);
        for i in 0..params.len() {
            self.m[i] = B1 * self.m[i] + (1.0 - B1) * grad[i];
            self.v[i] = B2 * self.v[i] + (1.0 - B2) * grad[i] * grad[i];
            params[i] -= self.lr * (self.m[i] / c1) / (sqrt(self.v[i] / c2) + 1e-8);
        }
    }
}

/// Splits `0..key.len()` into kept and held-out indices, stratified on
/// `key`: sorted keys are cut into blocks of `round(1 / fraction)` and one
/// random member of each full block is held out.
pub fn stratified_holdout<R: Rng + ?Sized>(key: &[f64], fraction: f64, rng: &mut R) -> (Vec<usize>, Vec<usize>) {
    let mut order: Vec<usize> = (0..key.len()).collect();
    if fraction <= 0.0 {
        return (order, Vec::new());
    }
    order.sort_by(|&a, &b| key[a].total_cmp(&key[b]).then(a.cmp(&b)));
    let block = (libm::round(1.0 / fraction) as usize).max(2);
    let mut keep = Vec::with_capacity(key.len());
    let mut hold = Vec::with_capacity(key.len() / block + 1);
    for chunk in order.chunks(block) {
        if chunk.len() == block {
            let pick = rng.random_range(0..block);
            for (i, &idx) in chunk.iter().enumerate() {
                if i == pick { hold.push(idx) } else { keep.push(idx) }
            }
        } else {
            keep.extend_from_slice(chunk);
        }
    }
    keep.sort_unstable();
    hold.sort_unstable();
    (keep, hold)
}

#[derive(Clone, Debug, PartialEq)]
pub struct MemberReport {
    pub epochs: usize,
    pub best_validation: Option<f64>,
}

fn train_member(
    x: &Matrix,
    y: &Matrix,
    train: &[usize],
    valid: &[usize],
    cfg: &MlpConfig,
    member: usize,
    rng: &mut Stream,
) -> Result<(Mlp, MemberReport), MlpError> {
    let mut sizes = vec![x.cols];
    sizes.extend(&cfg.hidden);
    sizes.push(y.cols);
    let mut net = Mlp::new(&sizes, rng);
    let mut adam = Adam::new(net.params.len(), cfg.learning_rate);
    let mut order = train.to_vec();
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut stale = 0;
    let mut epochs = 0;
    for epoch in 0..cfg.max_epochs {
        epochs = epoch + 1;
        order.shuffle(rng);
        for batch in order.chunks(cfg.batch_size.max(1)) {
            let (loss, grad) = net.loss_and_grad(x, y, batch);
            if !loss.is_finite() {
                return Err(MlpError::NonFinite { member, epoch });
            }
            adam.step(&mut net.params, &grad);
        }
        if !valid.is_empty() {
            let v = net.mse(x, y, valid);
            if !v.is_finite() {
                return Err(MlpError::NonFinite { member, epoch });
            }
            if best.as_ref().is_none_or(|(b, _)| v < *b) {
                best = Some((v, net.params.clone()));
                stale = 0;
            } else {
                stale += 1;
                if stale >= cfg.patience {
                    break;
                }
            }
        }
    }
    let best_validation = best.as_ref().map(|b| b.0);
    if let Some((_, params)) = best {
        net.params = params;
    }
    Ok((net, MemberReport { epochs, best_validation }))
}

#[derive(Clone, Debug)]
pub struct MlpEnsemble {
    members: Vec<Mlp>,
    alpha: Vec<f64>,
    scaler: TargetScaler,
    reports: Vec<MemberReport>,
}

/// Fits `cfg.members` networks on `x` against the raw targets `y`, each
/// from its own seed-derived initialization and batch order.
pub fn fit_mlp_ensemble(x: &Matrix, y: &Matrix, cfg: &MlpConfig, seed: u64) -> Result<MlpEnsemble, MlpError> {
    if y.rows != x.rows {
        return Err(MlpError::Shape { expected: x.rows, got: y.rows });
    }
    if x.rows < cfg.min_samples.max(2) {
        return Err(MlpError::TooFewSamples { needed: cfg.min_samples.max(2), got: x.rows });
    }
    let columns: Vec<Vec<f64>> = (0..y.cols).map(|j| y.column(j)).collect();
    let transforms =
        if cfg.transforms.is_empty() { vec![Transform::Identity; y.cols] } else { cfg.transforms.clone() };
    let scaler = TargetScaler::fit(&columns, &transforms, cfg.clamp);
    let scaled: Vec<f64> = (0..y.rows)
        .flat_map(|i| {
            let scaler = &scaler;
            y.row(i).iter().enumerate().map(move |(j, v)| scaler.scale(j, *v)).collect::<Vec<_>>()
        })
        .collect();
    let ys = Matrix::new(y.rows, y.cols, scaled);

    let key = ys.column(0);
    let (train, valid) = stratified_holdout(&key, cfg.validation_fraction, &mut stream(child_seed(seed, 0)));
    let mut members = Vec::with_capacity(cfg.members);
    let mut reports = Vec::with_capacity(cfg.members);
    for k in 0..cfg.members.max(1) {
        let mut rng = stream(child_seed(seed, k as u64 + 1));
        let (net, report) = train_member(x, &ys, &train, &valid, cfg, k, &mut rng)?;
        members.push(net);
        reports.push(report);
    }
    let k = members.len();
    Ok(MlpEnsemble { members, alpha: vec![1.0 / k as f64; k], scaler, reports })
}

impl MlpEnsemble {
    pub fn from_parts(members: Vec<Mlp>, alpha: Vec<f64>, scaler: TargetScaler) -> Option<Self> {
        let ok = !members.is_empty()
            && alpha.len() == members.len()
            && members.iter().all(|m| m.sizes == members[0].sizes)
            && *members[0].sizes.last()? == scaler.targets();
        ok.then(|| Self { reports: Vec::new(), members, alpha, scaler })
    }

    /// Replaces the mixture weights with a Dirichlet(1, ..., 1) draw.
    pub fn with_dirichlet_weights(mut self, seed: u64) -> Self {
        let mut rng = stream(seed);
        let draws: Vec<f64> = self.members.iter().map(|_| Exp1.sample(&mut rng)).collect();
        let total: f64 = draws.iter().sum();
        self.alpha = draws.iter().map(|d| d / total).collect();
        self
    }

    pub fn members(&self) -> &[Mlp] {
        &self.members
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn scaler(&self) -> &TargetScaler {
        &self.scaler
    }

    pub fn reports(&self) -> &[MemberReport] {
        &self.reports
    }

    pub fn predict(&self, x: &[f64], mode: PredictMode) -> Vec<f64> {
        let k = self.members.len() as f64;
        let mut acc = vec![0.0; self.scaler.targets()];
        for (net, a) in self.members.iter().zip(&self.alpha) {
            let w = match mode {
                PredictMode::Mean => 1.0 / k,
                PredictMode::Weighted => *a,
            };
            for (s, o) in acc.iter_mut().zip(net.forward(x)) {
                *s += w * o;
            }
        }
        acc.iter().enumerate().map(|(j, s)| self.scaler.unscale(j, *s)).collect()
    }

    /// Each member's unscaled prediction.
    pub fn member_predictions(&self, x: &[f64]) -> Vec<Vec<f64>> {
        self.members
            .iter()
            .map(|net| net.forward(x).iter().enumerate().map(|(j, s)| self.scaler.unscale(j, *s)).collect())
            .collect()
    }
}
