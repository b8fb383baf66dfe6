//! Spearman rank correlation.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::math::sqrt;

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum SpearmanError {
    #[error("sequences differ in length ({0} vs {1})")]
    Length(usize, usize),
    #[error("need at least two observations")]
    TooShort,
    #[error("rank variance is zero; correlation undefined")]
    ZeroVariance,
}

/// Fractional ranks starting at 1; ties share their average rank.
pub fn fractional_ranks(xs: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut ranks = vec![0.0; xs.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && xs[order[j + 1]] == xs[order[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = avg;
        }
        i = j + 1;
    }
    ranks
}

/// Pearson correlation of fractional ranks.
pub fn spearman_rho(pred: &[f64], truth: &[f64]) -> Result<f64, SpearmanError> {
    if pred.len() != truth.len() {
        return Err(SpearmanError::Length(pred.len(), truth.len()));
    }
    if pred.len() < 2 {
        return Err(SpearmanError::TooShort);
    }
    let a = fractional_ranks(pred);
    let b = fractional_ranks(truth);
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(&b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    if saa == 0.0 || sbb == 0.0 {
        return Err(SpearmanError::ZeroVariance);
    }
    Ok((sab / sqrt(saa * sbb)).clamp(-1.0, 1.0))
}
