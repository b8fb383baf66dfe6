//! Gaussian process regression with a Matérn-3/2 ARD kernel.
//!
//! Targets are standardized before fitting. Kernel hyperparameters
//! (log lengthscales, log signal variance, log noise variance) maximize
//! the log marginal likelihood with multi-start Nelder-Mead.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use thiserror::Error;

use super::Matrix;
use crate::math::{exp, ln, sqrt, Cholesky};
use crate::nelder_mead::NelderMead;

const SQRT3: f64 = 1.732_050_807_568_877_2;
const LN_2PI: f64 = 1.837_877_066_409_345_5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GpError {
    #[error("need at least two observations, got {0}")]
    TooFewPoints(usize),
    #[error("covariance factorization failed even with jitter 1e-2")]
    Factorization,
    #[error("non-finite training data")]
    NonFinite,
}

#[derive(Clone, Debug)]
pub struct GpConfig {
    /// Random restarts in addition to the default starting point.
    pub restarts: usize,
    /// Likelihood evaluations per start: `evals_per_dim * (p + 2)`.
    pub evals_per_dim: usize,
    pub log_lengthscale: (f64, f64),
    pub log_signal_var: (f64, f64),
    pub log_noise_var: (f64, f64),
}

impl Default for GpConfig {
    fn default() -> Self {
        Self {
            restarts: 2,
            evals_per_dim: 40,
            log_lengthscale: (-5.0, 5.0),
            log_signal_var: (-4.6, 4.6),
            log_noise_var: (-13.8, 0.0),
        }
    }
}

#[derive(Clone, Debug)]
pub struct GpModel {
    x: Matrix,
    lengthscales: Vec<f64>,
    signal_var: f64,
    noise_var: f64,
    jitter: f64,
    y_mean: f64,
    y_scale: f64,
    alpha: Vec<f64>,
    chol: Cholesky,
    lml: f64,
    start_lml: Vec<f64>,
}

fn matern32(a: &[f64], b: &[f64], inv_ls: &[f64], signal_var: f64) -> f64 {
    let mut r2 = 0.0;
    for ((x, y), s) in a.iter().zip(b).zip(inv_ls) {
        let d = (x - y) * s;
        r2 += d * d;
    }
    let r = SQRT3 * sqrt(r2);
    signal_var * (1.0 + r) * exp(-r)
}

struct Factored {
    chol: Cholesky,
    alpha: Vec<f64>,
    jitter: f64,
    lml: f64,
}

fn factor(x: &Matrix, y: &[f64], theta: &[f64]) -> Option<Factored> {
    let p = x.cols;
    let n = x.rows;
    let inv_ls: Vec<f64> = theta[..p].iter().map(|l| exp(-l)).collect();
    let sv = exp(theta[p]);
    let nv = exp(theta[p + 1]);
    let mut k = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let v = matern32(x.row(i), x.row(j), &inv_ls, sv);
            k[i * n + j] = v;
            k[j * n + i] = v;
        }
    }
    let mut jitter = 1e-8;
    loop {
        let mut kj = k.clone();
        for i in 0..n {
            kj[i * n + i] += nv + jitter;
        }
        if let Some(chol) = Cholesky::factor(&kj, n) {
            let alpha = chol.solve(y);
            let fit: f64 = y.iter().zip(&alpha).map(|(a, b)| a * b).sum();
            let lml = -0.5 * fit - 0.5 * chol.log_det() - 0.5 * n as f64 * LN_2PI;
            return Some(Factored { chol, alpha, jitter, lml });
        }
        jitter *= 10.0;
        if jitter > 1e-2 * 1.000_001 {
            return None;
        }
    }
}

/// Log marginal likelihood of standardized targets `y` under log-scale
/// hyperparameters `theta = [ln l_1..ln l_p, ln signal_var, ln noise_var]`.
pub fn log_marginal_likelihood(x: &Matrix, y: &[f64], theta: &[f64]) -> Option<f64> {
    factor(x, y, theta).map(|f| f.lml)
}

fn standardize(y: &[f64]) -> (Vec<f64>, f64, f64) {
    let n = y.len() as f64;
    let mean = y.iter().sum::<f64>() / n;
    let var = y.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    let scale = if var > 0.0 { sqrt(var) } else { 1.0 };
    (y.iter().map(|v| (v - mean) / scale).collect(), mean, scale)
}

/// Starting points of the likelihood search: a fixed default followed by
/// `cfg.restarts` uniform draws inside the bounds.
pub fn starting_points<R: Rng + ?Sized>(p: usize, cfg: &GpConfig, rng: &mut R) -> Vec<Vec<f64>> {
    let mut starts = Vec::with_capacity(cfg.restarts + 1);
    let mut default = vec![ln(0.5); p];
    default.push(0.0);
    default.push(ln(1e-3));
    starts.push(default);
    for _ in 0..cfg.restarts {
        let mut t: Vec<f64> = (0..p)
            .map(|_| rng.random_range(cfg.log_lengthscale.0..cfg.log_lengthscale.1))
            .collect();
        t.push(rng.random_range(cfg.log_signal_var.0..cfg.log_signal_var.1));
        t.push(rng.random_range(cfg.log_noise_var.0..cfg.log_noise_var.1));
        starts.push(t);
    }
    starts
}

pub fn fit_gp<R: Rng + ?Sized>(x: &Matrix, y: &[f64], cfg: &GpConfig, rng: &mut R) -> Result<GpModel, GpError> {
    let n = x.rows;
    if n < 2 || y.len() != n {
        return Err(GpError::TooFewPoints(n));
    }
    if x.data.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(GpError::NonFinite);
    }
    let p = x.cols;
    let (ys, y_mean, y_scale) = standardize(y);

    let mut lower = vec![cfg.log_lengthscale.0; p];
    let mut upper = vec![cfg.log_lengthscale.1; p];
    lower.extend([cfg.log_signal_var.0, cfg.log_noise_var.0]);
    upper.extend([cfg.log_signal_var.1, cfg.log_noise_var.1]);
    let nm = NelderMead { max_evals: cfg.evals_per_dim * (p + 2), ftol: 1e-6, ..NelderMead::new(lower, upper) };

    let objective = |theta: &[f64]| log_marginal_likelihood(x, &ys, theta).map_or(f64::INFINITY, |l| -l);
    let starts = starting_points(p, cfg, rng);
    let mut start_lml = Vec::with_capacity(starts.len());
    let mut best: Option<(Vec<f64>, f64)> = None;
    for s in &starts {
        start_lml.push(log_marginal_likelihood(x, &ys, s).unwrap_or(f64::NEG_INFINITY));
        let m = nm.minimize(objective, s);
        if m.value.is_finite() && best.as_ref().is_none_or(|(_, v)| m.value < *v) {
            best = Some((m.x, m.value));
        }
    }
    let (theta, _) = best.ok_or(GpError::Factorization)?;
    let f = factor(x, &ys, &theta).ok_or(GpError::Factorization)?;
    Ok(GpModel {
        x: x.clone(),
        lengthscales: theta[..p].iter().map(|l| exp(*l)).collect(),
        signal_var: exp(theta[p]),
        noise_var: exp(theta[p + 1]),
        jitter: f.jitter,
        y_mean,
        y_scale,
        alpha: f.alpha,
        chol: f.chol,
        lml: f.lml,
        start_lml,
    })
}

impl GpModel {
    /// Posterior mean and standard deviation of the latent function.
    pub fn predict(&self, x: &[f64]) -> (f64, f64) {
        let inv_ls: Vec<f64> = self.lengthscales.iter().map(|l| 1.0 / l).collect();
        let kx: Vec<f64> = (0..self.x.rows)
            .map(|i| matern32(self.x.row(i), x, &inv_ls, self.signal_var))
            .collect();
        let mean: f64 = kx.iter().zip(&self.alpha).map(|(a, b)| a * b).sum();
        let v = self.chol.solve_lower(&kx);
        let var = (self.signal_var - v.iter().map(|a| a * a).sum::<f64>()).max(0.0);
        (self.y_mean + self.y_scale * mean, self.y_scale * sqrt(var))
    }

    pub fn log_marginal_likelihood(&self) -> f64 {
        self.lml
    }

    /// Likelihood at each starting point of the hyperparameter search.
    pub fn start_log_likelihoods(&self) -> &[f64] {
        &self.start_lml
    }

    /// Prior standard deviation of the latent function, in target units.
    pub fn prior_sd(&self) -> f64 {
        self.y_scale * sqrt(self.signal_var)
    }

    pub fn noise_var(&self) -> f64 {
        self.noise_var
    }

    pub fn lengthscales(&self) -> &[f64] {
        &self.lengthscales
    }

    pub fn jitter(&self) -> f64 {
        self.jitter
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    fn line(n: usize) -> (Matrix, Vec<f64>) {
        let xs: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
        (Matrix::new(n, 1, xs.clone()), xs)
    }

    #[test]
    fn interpolates_noise_free_data() {
        let (x, y) = line(5);
        let gp = fit_gp(&x, &y, &GpConfig::default(), &mut stream(1)).unwrap();
        for (i, yi) in y.iter().enumerate() {
            let (m, _) = gp.predict(x.row(i));
            assert!((m - yi).abs() <= 1e-3, "{m} vs {yi}");
        }
        assert!(gp.noise_var() < 1e-3, "{}", gp.noise_var());
    }

    #[test]
    fn reverts_to_prior_far_from_data() {
        let (x, y) = line(5);
        let gp = fit_gp(&x, &y, &GpConfig::default(), &mut stream(2)).unwrap();
        let (_, sd) = gp.predict(&[1e4]);
        assert!((sd - gp.prior_sd()).abs() <= 0.05 * gp.prior_sd());
    }

    #[test]
    fn duplicate_inputs_are_absorbed_by_noise() {
        let x = Matrix::new(2, 1, vec![0.3, 0.3]);
        let gp = fit_gp(&x, &[1.0, 2.0], &GpConfig::default(), &mut stream(3)).unwrap();
        let (m, sd) = gp.predict(&[0.3]);
        assert!(m.is_finite() && sd >= 0.0);
        assert!(gp.noise_var() > 1e-3);
    }

    #[test]
    fn likelihood_improves_on_every_start() {
        let mut rng = stream(7);
        let rows: Vec<Vec<f64>> = (0..12).map(|_| vec![rng.random::<f64>(), rng.random::<f64>()]).collect();
        let y: Vec<f64> = rows.iter().map(|r| (6.0 * r[0]).sin() + r[1] * r[1]).collect();
        let x = Matrix::from_rows(&rows);
        let gp = fit_gp(&x, &y, &GpConfig::default(), &mut rng).unwrap();
        assert_eq!(gp.start_log_likelihoods().len(), 3);
        for s in gp.start_log_likelihoods() {
            assert!(gp.log_marginal_likelihood() >= *s);
        }
    }

    #[test]
    fn too_few_points() {
        let x = Matrix::new(1, 1, vec![0.0]);
        assert_eq!(fit_gp(&x, &[0.0], &GpConfig::default(), &mut stream(0)).unwrap_err(), GpError::TooFewPoints(1));
    }

    #[test]
    fn posterior_variance_is_nonnegative() {
        let (x, y) = line(8);
        let gp = fit_gp(&x, &y, &GpConfig::default(), &mut stream(5)).unwrap();
        for i in 0..50 {
            let (_, sd) = gp.predict(&[i as f64 / 49.0]);
            assert!(sd >= 0.0);
        }
    }
}
