//! Per-target transforms to the unit interval.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::math::{exp, fabs, ln, sqrt};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Transform {
    Identity,
    /// `ln(y - min + 1)`.
    Log,
    /// `-exp(-(y - min))`.
    NegExp,
    /// `-ln(max - y + 1)`, the log transform mirrored to spread values
    /// crowded near the maximum.
    LogMax,
}

impl Transform {
    pub const ALL: [Transform; 4] = [Transform::Identity, Transform::Log, Transform::NegExp, Transform::LogMax];

    /// The transform whose output on `values` has the smallest absolute
    /// sample skewness; ties keep the earlier entry of [`Transform::ALL`].
    pub fn least_skewed(values: &[f64]) -> Transform {
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut best = (f64::INFINITY, Transform::Identity);
        for transform in Transform::ALL {
            let state = TargetState { transform, min, max, t_min: 0.0, t_max: 0.0 };
            let t: Vec<f64> = values.iter().map(|y| state.forward(*y)).collect();
            let skew = fabs(skewness(&t));
            if skew < best.0 {
                best = (skew, transform);
            }
        }
        best.1
    }
}

fn skewness(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let m2 = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / n;
    let m3 = xs.iter().map(|x| (x - m) * (x - m) * (x - m)).sum::<f64>() / n;
    if m2 > 0.0 { m3 / (m2 * sqrt(m2)) } else { 0.0 }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct TargetState {
    transform: Transform,
    min: f64,
    max: f64,
    t_min: f64,
    t_max: f64,
}

impl TargetState {
    fn forward(&self, y: f64) -> f64 {
        match self.transform {
            Transform::Identity => y,
            Transform::Log => ln(y - self.min + 1.0),
            Transform::NegExp => -exp(-(y - self.min)),
            Transform::LogMax => -ln(self.max - y + 1.0),
        }
    }

    fn inverse(&self, t: f64) -> f64 {
        match self.transform {
            Transform::Identity => t,
            Transform::Log => exp(t) - 1.0 + self.min,
            Transform::NegExp => self.min - ln(-t),
            Transform::LogMax => self.max + 1.0 - exp(-t),
        }
    }
}

/// Maps each target column onto `[0, 1]` using its training range, with
/// optional clamping of unscaled predictions to that range.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TargetScaler {
    targets: Vec<TargetState>,
    pub clamp: bool,
}

impl TargetScaler {
    /// Fits one transform per column of `columns` (each a target's values).
    pub fn fit(columns: &[Vec<f64>], transforms: &[Transform], clamp: bool) -> Self {
        assert_eq!(columns.len(), transforms.len());
        let targets = columns
            .iter()
            .zip(transforms)
            .map(|(col, &transform)| {
                let min = col.iter().copied().fold(f64::INFINITY, f64::min);
                let max = col.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let mut s = TargetState { transform, min, max, t_min: 0.0, t_max: 0.0 };
                s.t_min = s.forward(min);
                s.t_max = s.forward(max);
                s
            })
            .collect();
        Self { targets, clamp }
    }

    pub fn targets(&self) -> usize {
        self.targets.len()
    }

    pub fn range(&self, target: usize) -> (f64, f64) {
        (self.targets[target].min, self.targets[target].max)
    }

    /// Whether a target had zero range in training.
    pub fn is_degenerate(&self, target: usize) -> bool {
        let t = &self.targets[target];
        !(t.t_max > t.t_min)
    }

    pub fn scale(&self, target: usize, y: f64) -> f64 {
        let t = &self.targets[target];
        if self.is_degenerate(target) {
            return 0.5;
        }
        (t.forward(y) - t.t_min) / (t.t_max - t.t_min)
    }

    pub fn unscale(&self, target: usize, s: f64) -> f64 {
        let t = &self.targets[target];
        if self.is_degenerate(target) {
            return t.min;
        }
        let s = if self.clamp { s.clamp(0.0, 1.0) } else { s };
        let y = t.inverse(t.t_min + s * (t.t_max - t.t_min));
        if self.clamp {
            y.clamp(t.min, t.max)
        } else {
            y
        }
    }
}
