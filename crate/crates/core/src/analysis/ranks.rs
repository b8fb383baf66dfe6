use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::regret::RegretCurve;
use crate::models::spearman::fractional_ranks;

/// Average ranks (1 = best) of optimizers per benchmark.
#[derive(Clone, Debug, PartialEq)]
pub struct RankMatrix {
    pub benchmarks: Vec<String>,
    pub optimizers: Vec<String>,
    /// `ranks[b][o]`.
    pub ranks: Vec<Vec<f64>>,
}

/// Budget fractions 10%, 15%, ..., 100% used for anytime comparisons.
pub fn budget_fractions() -> Vec<f64> {
    (2..=20).map(|k| k as f64 * 0.05).collect()
}

/// Ranks optimizers within each replication (lower score is better, ties
/// averaged) and averages over replications. `scores[rep][optimizer]`.
pub fn mean_ranks(scores: &[Vec<f64>]) -> Vec<f64> {
    let k = scores.first().map_or(0, Vec::len);
    let mut total = vec![0.0; k];
    for row in scores {
        for (t, r) in total.iter_mut().zip(fractional_ranks(row)) {
            *t += r;
        }
    }
    total.iter().map(|t| t / scores.len() as f64).collect()
}

/// Score rows for anytime ranking: one row per replication and budget
/// fraction, holding each optimizer's regret at that point.
/// `curves[optimizer][rep]`.
pub fn anytime_scores(curves: &[Vec<RegretCurve>], budget: f64) -> Vec<Vec<f64>> {
    let reps = curves.iter().map(Vec::len).min().unwrap_or(0);
    let mut rows = Vec::new();
    for rep in 0..reps {
        for f in budget_fractions() {
            // Guard against rounding just below the grid point.
            let b = budget * f * (1.0 + 1e-12);
            rows.push(curves.iter().map(|c| c[rep].at(b)).collect());
        }
    }
    rows
}

/// Optimizer ids sorted by rank, ties by id.
pub fn order_by_rank(optimizers: &[String], ranks: &[f64]) -> Vec<String> {
    let mut idx: Vec<usize> = (0..optimizers.len()).collect();
    idx.sort_by(|&a, &b| ranks[a].total_cmp(&ranks[b]).then(optimizers[a].cmp(&optimizers[b])));
    idx.into_iter().map(|i| optimizers[i].clone()).collect()
}
