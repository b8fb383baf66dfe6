//! Random forest regression from CART trees grown on bootstrap samples.

use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use super::Matrix;
use crate::math::{ceil, sqrt};

#[derive(Clone, Debug)]
pub struct RfConfig {
    pub trees: usize,
    /// Fraction of features considered per split, rounded up.
    pub mtry_fraction: f64,
    pub min_samples_split: usize,
    pub bootstrap: bool,
}

impl Default for RfConfig {
    fn default() -> Self {
        Self { trees: 50, mtry_fraction: 5.0 / 6.0, min_samples_split: 2, bootstrap: true }
    }
}

#[derive(Clone, Debug)]
enum Node {
    Leaf(f64),
    Split { feature: usize, threshold: f64, left: usize, right: usize },
}

#[derive(Clone, Debug)]
struct Tree {
    nodes: Vec<Node>,
}

impl Tree {
    fn predict(&self, x: &[f64]) -> f64 {
        let mut at = 0;
        loop {
            match self.nodes[at] {
                Node::Leaf(v) => return v,
                Node::Split { feature, threshold, left, right } => {
                    at = if x[feature] <= threshold { left } else { right };
                }
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct RfModel {
    trees: Vec<Tree>,
}

struct Builder<'a, R: Rng + ?Sized> {
    x: &'a Matrix,
    y: &'a [f64],
    mtry: usize,
    min_split: usize,
    rng: &'a mut R,
    nodes: Vec<Node>,
    features: Vec<usize>,
}

struct Best {
    feature: usize,
    threshold: f64,
    score: f64,
}

impl<R: Rng + ?Sized> Builder<'_, R> {
    fn mean(&self, idx: &[usize]) -> f64 {
        idx.iter().map(|&i| self.y[i]).sum::<f64>() / idx.len() as f64
    }

    /// Best variance-reduction split of `idx` on `feature`, scored by the
    /// sum over children of `(sum y)^2 / count` (larger is better).
    fn split_on(&self, idx: &mut [usize], feature: usize) -> Option<Best> {
        let x = self.x;
        idx.sort_by(|&a, &b| x.row(a)[feature].total_cmp(&x.row(b)[feature]));
        let total: f64 = idx.iter().map(|&i| self.y[i]).sum();
        let n = idx.len();
        let mut left = 0.0;
        let mut best: Option<Best> = None;
        for k in 0..n - 1 {
            left += self.y[idx[k]];
            let a = x.row(idx[k])[feature];
            let b = x.row(idx[k + 1])[feature];
            if a >= b {
                continue;
            }
            let nl = (k + 1) as f64;
            let nr = (n - k - 1) as f64;
            let right = total - left;
            let score = left * left / nl + right * right / nr;
            if best.as_ref().is_none_or(|s| score > s.score) {
                let mid = a + 0.5 * (b - a);
                let threshold = if mid < b { mid } else { a };
                best = Some(Best { feature, threshold, score });
            }
        }
        best
    }

    fn grow(&mut self, idx: &mut [usize]) -> usize {
        let slot = self.nodes.len();
        self.nodes.push(Node::Leaf(0.0));
        let value = self.mean(idx);
        let first = self.y[idx[0]];
        if idx.len() < self.min_split || idx.iter().all(|&i| self.y[i] == first) {
            self.nodes[slot] = Node::Leaf(value);
            return slot;
        }
        let mut features = core::mem::take(&mut self.features);
        features.shuffle(self.rng);
        let mut best: Option<Best> = None;
        for (tried, &f) in features.iter().enumerate() {
            if tried >= self.mtry && best.is_some() {
                break;
            }
            if let Some(s) = self.split_on(idx, f) {
                if best.as_ref().is_none_or(|b| s.score > b.score) {
                    best = Some(s);
                }
            }
        }
        self.features = features;
        let Some(best) = best else {
            self.nodes[slot] = Node::Leaf(value);
            return slot;
        };
        let x = self.x;
        let (f, t) = (best.feature, best.threshold);
        idx.sort_by(|&a, &b| x.row(a)[f].total_cmp(&x.row(b)[f]));
        let cut = idx.partition_point(|&i| x.row(i)[f] <= t);
        let (l, r) = idx.split_at_mut(cut);
        let left = self.grow(l);
        let right = self.grow(r);
        self.nodes[slot] = Node::Split { feature: f, threshold: t, left, right };
        slot
    }
}

/// Fits a forest on rows of `x` against `y`. Requires at least one row.
pub fn fit_rf<R: Rng + ?Sized>(x: &Matrix, y: &[f64], cfg: &RfConfig, rng: &mut R) -> RfModel {
    assert!(x.rows >= 1 && x.rows == y.len());
    let p = x.cols.max(1);
    let mtry = (ceil(cfg.mtry_fraction * p as f64) as usize).clamp(1, p);
    let mut trees = Vec::with_capacity(cfg.trees);
    for _ in 0..cfg.trees.max(1) {
        let mut idx: Vec<usize> = if cfg.bootstrap {
            (0..x.rows).map(|_| rng.random_range(0..x.rows)).collect()
        } else {
            (0..x.rows).collect()
        };
        let mut b = Builder {
            x,
            y,
            mtry,
            min_split: cfg.min_samples_split.max(2),
            rng: &mut *rng,
            nodes: Vec::new(),
            features: (0..x.cols).collect(),
        };
        b.grow(&mut idx);
        trees.push(Tree { nodes: b.nodes });
    }
    RfModel { trees }
}

impl RfModel {
    /// Mean and standard deviation of the per-tree predictions.
    pub fn predict(&self, x: &[f64]) -> (f64, f64) {
        let preds: Vec<f64> = self.trees.iter().map(|t| t.predict(x)).collect();
        let n = preds.len() as f64;
        let mean = preds.iter().sum::<f64>() / n;
        let var = preds.iter().map(|p| (p - mean) * (p - mean)).sum::<f64>() / n;
        (mean, sqrt(var))
    }

    pub fn tree_count(&self) -> usize {
        self.trees.len()
    }

    pub fn tree_predictions(&self, x: &[f64]) -> Vec<f64> {
        self.trees.iter().map(|t| t.predict(x)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use crate::rng::stream;

    #[test]
    fn constant_targets() {
        let x = Matrix::from_rows(&[vec![0.0], vec![0.5], vec![1.0]]);
        let rf = fit_rf(&x, &[2.0; 3], &RfConfig::default(), &mut stream(1));
        for t in [0.0, 0.3, 7.0] {
            assert_eq!(rf.predict(&[t]), (2.0, 0.0));
        }
    }

    #[test]
    fn single_full_tree_reproduces_targets() {
        let xs: Vec<Vec<f64>> = (0..20).map(|i| vec![i as f64 / 19.0]).collect();
        let y: Vec<f64> = (0..20).map(|i| ((i * 7) % 11) as f64).collect();
        let cfg = RfConfig { trees: 1, bootstrap: false, ..RfConfig::default() };
        let rf = fit_rf(&Matrix::from_rows(&xs), &y, &cfg, &mut stream(2));
        for (x, t) in xs.iter().zip(&y) {
            assert_eq!(rf.predict(x).0, *t);
        }
    }

    #[test]
    fn predictions_stay_in_target_range() {
        let mut rng = stream(3);
        let rows: Vec<Vec<f64>> = (0..40).map(|_| vec![rng.random(), rng.random(), rng.random()]).collect();
        let y: Vec<f64> = rows.iter().map(|r| r[0] * 3.0 - r[1] + r[2] * r[2]).collect();
        let rf = fit_rf(&Matrix::from_rows(&rows), &y, &RfConfig::default(), &mut rng);
        let (lo, hi) = y.iter().fold((f64::MAX, f64::MIN), |(a, b), v| (a.min(*v), b.max(*v)));
        for _ in 0..200 {
            let q = [rng.random::<f64>() * 2.0 - 0.5, rng.random(), rng.random()];
            let (m, sd) = rf.predict(&q);
            assert!(m >= lo && m <= hi && sd >= 0.0);
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let rows: Vec<Vec<f64>> = (0..15).map(|i| vec![(i as f64).sin(), i as f64]).collect();
        let y: Vec<f64> = (0..15).map(|i| (i as f64).cos()).collect();
        let x = Matrix::from_rows(&rows);
        let a = fit_rf(&x, &y, &RfConfig::default(), &mut stream(9));
        let b = fit_rf(&x, &y, &RfConfig::default(), &mut stream(9));
        assert_eq!(a.predict(&[0.2, 3.0]), b.predict(&[0.2, 3.0]));
    }
}
