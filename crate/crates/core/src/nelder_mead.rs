//! Box-constrained Nelder-Mead minimization.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::fabs;

#[derive(Clone, Debug)]
pub struct NelderMead {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub max_evals: usize,
    /// Stop once `2|f_worst - f_best| / (|f_worst| + |f_best|)` drops below this.
    pub ftol: f64,
    /// Initial simplex edge as a fraction of each box width.
    pub step: f64,
}

#[derive(Clone, Debug)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
}

impl NelderMead {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Self {
        assert_eq!(lower.len(), upper.len());
        Self { lower, upper, max_evals: 1000, ftol: 1e-8, step: 0.1 }
    }

    fn project(&self, x: &mut [f64]) {
        for ((v, lo), hi) in x.iter_mut().zip(&self.lower).zip(&self.upper) {
            *v = v.clamp(*lo, *hi);
        }
    }

    /// Minimizes `f` from `start`. Points are projected onto the box before
    /// evaluation; the best point ever evaluated is returned.
    pub fn minimize<F: FnMut(&[f64]) -> f64>(&self, mut f: F, start: &[f64]) -> Minimum {
        let n = start.len();
        let mut evals = 0;
        let mut best = Minimum { x: start.to_vec(), value: f64::INFINITY, evals: 0 };
        let mut eval = |x: &mut Vec<f64>, best: &mut Minimum, evals: &mut usize| -> f64 {
            self.project(x);
            *evals += 1;
            let v = f(x);
            let v = if v.is_nan() { f64::INFINITY } else { v };
            if v < best.value {
                best.value = v;
                best.x.clone_from(x);
            }
            v
        };

        let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
        let mut values = Vec::with_capacity(n + 1);
        let mut x0 = start.to_vec();
        values.push(eval(&mut x0, &mut best, &mut evals));
        simplex.push(x0);
        for i in 0..n {
            let mut x = simplex[0].clone();
            let width = self.upper[i] - self.lower[i];
            let h = self.step * width;
            x[i] = if x[i] + h <= self.upper[i] { x[i] + h } else { x[i] - h };
            values.push(eval(&mut x, &mut best, &mut evals));
            simplex.push(x);
        }

        while evals < self.max_evals {
            let mut order: Vec<usize> = (0..=n).collect();
            order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
            simplex = order.iter().map(|&i| simplex[i].clone()).collect();
            values = order.iter().map(|&i| values[i]).collect();

            let (fb, fw) = (values[0], values[n]);
            if fb.is_finite() && fw.is_finite() {
                let spread = 2.0 * fabs(fw - fb) / (fabs(fw) + fabs(fb) + 1e-300);
                if spread < self.ftol {
                    break;
                }
            }

            let mut centroid = vec![0.0; n];
            for x in &simplex[..n] {
                for (c, v) in centroid.iter_mut().zip(x) {
                    *c += v / n as f64;
                }
            }
            let along = |t: f64| -> Vec<f64> {
                centroid.iter().zip(&simplex[n]).map(|(c, w)| c + t * (w - c)).collect()
            };

            let mut reflected = along(-1.0);
            let fr = eval(&mut reflected, &mut best, &mut evals);
            if fr < values[0] {
                let mut expanded = along(-2.0);
                let fe = eval(&mut expanded, &mut best, &mut evals);
                if fe < fr {
                    simplex[n] = expanded;
                    values[n] = fe;
                } else {
                    simplex[n] = reflected;
                    values[n] = fr;
                }
            } else if fr < values[n - 1] {
                simplex[n] = reflected;
                values[n] = fr;
            } else {
                let outside = fr < values[n];
                let mut contracted = if outside { along(-0.5) } else { along(0.5) };
                let fc = eval(&mut contracted, &mut best, &mut evals);
                if fc < fr.min(values[n]) {
                    simplex[n] = contracted;
                    values[n] = fc;
                } else {
                    for i in 1..=n {
                        let mut x: Vec<f64> =
                            simplex[0].iter().zip(&simplex[i]).map(|(b, v)| b + 0.5 * (v - b)).collect();
                        values[i] = eval(&mut x, &mut best, &mut evals);
                        simplex[i] = x;
                    }
                }
            }
        }
        best.evals = evals;
        best
    }
}
