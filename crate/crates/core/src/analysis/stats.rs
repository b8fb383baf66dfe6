use alloc::vec::Vec;

use thiserror::Error;

use crate::math::{chi2_sf, sqrt};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatsError {
    #[error("need at least 2 benchmarks and 2 optimizers")]
    TooSmall,
    #[error("rank rows have unequal lengths")]
    Ragged,
    #[error("no critical value tabulated for k = {0}")]
    Untabulated(usize),
    #[error("no table for alpha = {0}")]
    Alpha(f64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FriedmanResult {
    pub statistic: f64,
    pub p_value: f64,
    pub benchmarks: usize,
    pub optimizers: usize,
}

/// Friedman chi-square statistic of an `N x k` rank table, with its
/// p-value on `k - 1` degrees of freedom.
pub fn friedman_test(ranks: &[Vec<f64>]) -> Result<FriedmanResult, StatsError> {
    let n = ranks.len();
    let k = ranks.first().map_or(0, Vec::len);
    if n < 2 || k < 2 {
        return Err(StatsError::TooSmall);
    }
    if ranks.iter().any(|r| r.len() != k) {
        return Err(StatsError::Ragged);
    }
    let (nf, kf) = (n as f64, k as f64);
    let sum_sq: f64 = (0..k)
        .map(|j| {
            let mean = ranks.iter().map(|r| r[j]).sum::<f64>() / nf;
            mean * mean
        })
        .sum();
    let statistic = (12.0 * nf / (kf * (kf + 1.0)) * (sum_sq - kf * (kf + 1.0) * (kf + 1.0) / 4.0)).max(0.0);
    Ok(FriedmanResult { statistic, p_value: chi2_sf(statistic, kf - 1.0), benchmarks: n, optimizers: k })
}

/// Studentized range quantiles divided by sqrt(2), for k = 2..=10.
pub const NEMENYI_Q_05: [f64; 9] = [1.960, 2.343, 2.569, 2.728, 2.850, 2.949, 3.031, 3.102, 3.164];
pub const NEMENYI_Q_10: [f64; 9] = [1.645, 2.052, 2.291, 2.459, 2.589, 2.693, 2.780, 2.855, 2.920];

/// Nemenyi critical difference `q_alpha,k * sqrt(k (k + 1) / (6 N))`.
pub fn nemenyi_cd(k: usize, n: usize, alpha: f64) -> Result<f64, StatsError> {
    if k < 2 || n < 2 {
        return Err(StatsError::TooSmall);
    }
    let table = if alpha == 0.05 {
        &NEMENYI_Q_05
    } else if alpha == 0.10 {
        &NEMENYI_Q_10
    } else {
        return Err(StatsError::Alpha(alpha));
    };
    let q = table.get(k - 2).ok_or(StatsError::Untabulated(k))?;
    Ok(q * sqrt((k * (k + 1)) as f64 / (6.0 * n as f64)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn identical_rankings() {
        let r = friedman_test(&vec![vec![1.0, 2.0, 3.0]; 10]).unwrap();
        assert!((r.statistic - 20.0).abs() < 1e-12);
        assert!(r.p_value < 0.001);
    }

    #[test]
    fn complete_ties() {
        let r = friedman_test(&vec![vec![1.5, 1.5]; 6]).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert!((r.p_value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn critical_difference() {
        let cd = nemenyi_cd(2, 9, 0.05).unwrap();
        assert!((cd - 1.960 / 3.0).abs() < 1e-12);
        assert!(nemenyi_cd(7, 40, 0.05).unwrap() < nemenyi_cd(7, 20, 0.05).unwrap());
        let expected = 2.949 * (56.0f64 / 120.0).sqrt();
        assert!((nemenyi_cd(7, 20, 0.05).unwrap() - expected).abs() < 1e-12);
        assert_eq!(nemenyi_cd(11, 5, 0.05), Err(StatsError::Untabulated(11)));
    }
}
