use alloc::vec;
use alloc::vec::Vec;

use crate::mo::hypervolume::hypervolume;
use crate::mo::pareto::dominates;

/// Per-objective normalization bounds for minimized objectives.
#[derive(Clone, Debug, PartialEq)]
pub struct HvContext {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl HvContext {
    /// Bounds spanning every given point.
    pub fn from_points<'a>(points: impl IntoIterator<Item = &'a Vec<f64>>) -> Option<Self> {
        let mut lower: Option<Vec<f64>> = None;
        let mut upper: Vec<f64> = Vec::new();
        for p in points {
            match &mut lower {
                None => {
                    lower = Some(p.clone());
                    upper = p.clone();
                }
                Some(l) => {
                    for j in 0..p.len() {
                        l[j] = l[j].min(p[j]);
                        upper[j] = upper[j].max(p[j]);
                    }
                }
            }
        }
        lower.map(|lower| Self { lower, upper })
    }

    /// Maps a point into the unit cube, clipping; the flag reports clipping.
    pub fn normalize(&self, p: &[f64]) -> (Vec<f64>, bool) {
        let mut clipped = false;
        let v = p
            .iter()
            .enumerate()
            .map(|(j, x)| {
                let r = self.upper[j] - self.lower[j];
                let u = if r > 0.0 { (x - self.lower[j]) / r } else { 0.0 };
                if !(0.0..=1.0).contains(&u) {
                    clipped = true;
                }
                u.clamp(0.0, 1.0)
            })
            .collect();
        (v, clipped)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HvTrace {
    /// `(cumulative_budget, normalized hypervolume)` after each evaluation.
    pub points: Vec<(f64, f64)>,
    /// Evaluations that fell outside the normalization bounds.
    pub clipped: usize,
}

impl HvTrace {
    /// Hypervolume after the last evaluation finished within `budget`.
    pub fn at(&self, budget: f64) -> f64 {
        let k = self.points.partition_point(|(b, _)| *b <= budget);
        if k == 0 { 0.0 } else { self.points[k - 1].1 }
    }
}

/// Hypervolume of the running archive with reference `(1, ..., 1)` in
/// normalized space. `run` holds `(cumulative_budget, minimized
/// objectives)` with `None` for partial-fidelity evaluations.
pub fn hv_trajectory(run: &[(f64, Option<Vec<f64>>)], ctx: &HvContext) -> HvTrace {
    let reference = vec![1.0; ctx.lower.len()];
    let mut archive: Vec<Vec<f64>> = Vec::new();
    let mut clipped = 0;
    let mut hv = 0.0;
    let mut points = Vec::with_capacity(run.len());
    for (b, y) in run {
        if let Some(y) = y {
            let (p, c) = ctx.normalize(y);
            clipped += usize::from(c);
            if !archive.iter().any(|a| dominates(a, &p) || *a == p) {
                archive.retain(|a| !dominates(&p, a));
                archive.push(p);
                hv = hypervolume(&archive, &reference).expect("normalized points lie in the unit cube");
            }
        }
        points.push((*b, hv));
    }
    HvTrace { points, clipped }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_and_ideal() {
        let ctx = HvContext { lower: vec![0.0, 0.0], upper: vec![2.0, 2.0] };
        assert_eq!(hv_trajectory(&[(1.0, None)], &ctx).points, vec![(1.0, 0.0)]);
        let t = hv_trajectory(&[(1.0, Some(vec![1.0, 1.0])), (2.0, Some(vec![0.0, 0.0]))], &ctx);
        assert_eq!(t.points, vec![(1.0, 0.25), (2.0, 1.0)]);
    }

    #[test]
    fn clipping_is_flagged() {
        let ctx = HvContext { lower: vec![0.0, 0.0], upper: vec![1.0, 1.0] };
        let t = hv_trajectory(&[(1.0, Some(vec![-1.0, 0.5])), (2.0, Some(vec![3.0, 3.0]))], &ctx);
        assert_eq!(t.clipped, 2);
        assert!(t.points.windows(2).all(|w| w[0].1 <= w[1].1));
    }
}
