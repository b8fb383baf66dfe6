use alloc::vec::Vec;

/// Empirical distribution function of a sample.
#[derive(Clone, Debug, PartialEq)]
pub struct Ecdf {
    sorted: Vec<f64>,
}

impl Ecdf {
    /// Panics on an empty sample.
    pub fn new(values: &[f64]) -> Self {
        assert!(!values.is_empty(), "ECDF of an empty sample");
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        Self { sorted }
    }

    /// Fraction of the sample `<= t`.
    pub fn eval(&self, t: f64) -> f64 {
        self.sorted.partition_point(|v| *v <= t) as f64 / self.sorted.len() as f64
    }

    pub fn curve(&self, grid: &[f64]) -> Vec<(f64, f64)> {
        grid.iter().map(|t| (*t, self.eval(*t))).collect()
    }

    /// The sample mapped onto `[0, 1]` by its own min and max.
    pub fn normalized(values: &[f64]) -> Self {
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let r = if hi > lo { hi - lo } else { 1.0 };
        Self::new(&values.iter().map(|v| (v - lo) / r).collect::<Vec<_>>())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        let e = Ecdf::new(&[3.0, 1.0, 2.0]);
        assert!((e.eval(2.0) - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(e.eval(0.5), 0.0);
        assert_eq!(e.eval(3.0), 1.0);
        let c = e.curve(&[0.0, 1.0, 1.5, 2.5, 9.0]);
        assert!(c.windows(2).all(|w| w[0].1 <= w[1].1));
    }
}
