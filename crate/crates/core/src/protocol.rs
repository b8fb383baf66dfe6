//! Evaluation-protocol constants and formulas.

use crate::math::{ceil, sqrt};
use crate::space::SearchSpace;

/// Default replications per optimizer and instance.
pub const REPLICATIONS: usize = 30;

/// Full-fidelity evaluations granted on a `dim`-dimensional space, not
/// counting the fidelity parameter: `ceil(20 + 40 sqrt(dim))`.
pub fn budget_for_dim(dim: usize) -> usize {
    ceil(20.0 + 40.0 * sqrt(dim as f64)) as usize
}

pub fn budget_for(space: &SearchSpace) -> usize {
    budget_for_dim(space.dim())
}

/// MIES population `mu = floor(budget / 6)` and offspring `lambda = floor(mu / 4)`.
pub fn mies_sizes(budget: usize) -> (usize, usize) {
    let mu = budget / 6;
    (mu, mu / 4)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budgets() {
        let dims = [2, 3, 5, 7, 8, 13, 14, 28, 33, 38];
        let expected = [77, 90, 110, 126, 134, 165, 170, 232, 250, 267];
        for (d, b) in dims.iter().zip(expected) {
            assert_eq!(budget_for_dim(*d), b);
        }
    }

    #[test]
    fn mies() {
        assert_eq!(mies_sizes(134), (22, 5));
        assert_eq!(mies_sizes(77), (12, 3));
    }
}
