//! Hypervolume of minimized point sets with respect to a reference point.

use alloc::vec::Vec;

use rand::Rng;
use thiserror::Error;

use crate::rng::stream;

/// Monte Carlo samples used for four or more objectives.
pub const MC_SAMPLES: usize = 200_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HvError {
    #[error("point {0} does not weakly dominate the reference point")]
    NotDominating(usize),
    #[error("point {index} has {got} coordinates, reference has {expected}")]
    Dimension { index: usize, expected: usize, got: usize },
}

fn hv2(points: &[&[f64]], reference: &[f64]) -> f64 {
    let mut sorted: Vec<&[f64]> = points.to_vec();
    sorted.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    let mut front: Vec<&[f64]> = Vec::with_capacity(sorted.len());
    for p in sorted {
        if front.last().is_none_or(|q| p[1] < q[1]) {
            front.push(p);
        }
    }
    let mut total = 0.0;
    for (i, p) in front.iter().enumerate() {
        let next_x = front.get(i + 1).map_or(reference[0], |q| q[0]);
        total += (next_x - p[0]) * (reference[1] - p[1]);
    }
    total
}

fn hv3(points: &[&[f64]], reference: &[f64]) -> f64 {
    let mut sorted: Vec<&[f64]> = points.to_vec();
    sorted.sort_by(|a, b| a[2].total_cmp(&b[2]));
    let mut total = 0.0;
    let mut slab: Vec<&[f64]> = Vec::with_capacity(sorted.len());
    for (i, p) in sorted.iter().enumerate() {
        slab.push(p);
        let next_z = sorted.get(i + 1).map_or(reference[2], |q| q[2]);
        if next_z > p[2] {
            total += hv2(&slab, reference) * (next_z - p[2]);
        }
    }
    total
}

fn hv_mc(points: &[&[f64]], reference: &[f64], samples: usize) -> f64 {
    let m = reference.len();
    let lower: Vec<f64> =
        (0..m).map(|j| points.iter().map(|p| p[j]).fold(f64::INFINITY, f64::min)).collect();
    let volume: f64 = lower.iter().zip(reference).map(|(l, r)| r - l).product();
    if !(volume > 0.0) {
        return 0.0;
    }
    let mut rng = stream(0x4856_4d43);
    let mut u = alloc::vec![0.0; m];
    let mut hits = 0usize;
    for _ in 0..samples {
        for j in 0..m {
            u[j] = lower[j] + rng.random::<f64>() * (reference[j] - lower[j]);
        }
        if points.iter().any(|p| p.iter().zip(&u).all(|(a, b)| a <= b)) {
            hits += 1;
        }
    }
    volume * hits as f64 / samples as f64
}

/// Volume dominated by `front` and bounded by `reference`: exact for two
/// and three objectives, seeded Monte Carlo beyond.
pub fn hypervolume(front: &[Vec<f64>], reference: &[f64]) -> Result<f64, HvError> {
    let m = reference.len();
    for (index, p) in front.iter().enumerate() {
        if p.len() != m {
            return Err(HvError::Dimension { index, expected: m, got: p.len() });
        }
        if p.iter().zip(reference).any(|(a, r)| !(a <= r)) {
            return Err(HvError::NotDominating(index));
        }
    }
    Ok(hv_unchecked(front.iter().map(Vec::as_slice).collect::<Vec<_>>().as_slice(), reference))
}

fn hv_unchecked(points: &[&[f64]], reference: &[f64]) -> f64 {
    if points.is_empty() {
        return 0.0;
    }
    match reference.len() {
        0 => 0.0,
        1 => reference[0] - points.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min),
        2 => hv2(points, reference),
        3 => hv3(points, reference),
        _ => hv_mc(points, reference, MC_SAMPLES),
    }
}

/// Volume added to `front` by `point`. Coordinates of front members beyond
/// the reference are clipped to it; a point not strictly inside the
/// reference box adds nothing.
pub fn hv_improvement(front: &[Vec<f64>], point: &[f64], reference: &[f64]) -> f64 {
    if point.iter().zip(reference).any(|(p, r)| !(p < r)) {
        return 0.0;
    }
    let boxed: f64 = point.iter().zip(reference).map(|(p, r)| r - p).product();
    let shadow: Vec<Vec<f64>> = front
        .iter()
        .map(|a| a.iter().zip(point).zip(reference).map(|((x, p), r)| x.max(*p).min(*r)).collect())
        .collect();
    let covered = hv_unchecked(&shadow.iter().map(Vec::as_slice).collect::<Vec<_>>(), reference);
    (boxed - covered).max(0.0)
}

/// Exclusive contribution of each member of a mutually nondominated set.
pub fn contributions(front: &[Vec<f64>], reference: &[f64]) -> Vec<f64> {
    let clipped: Vec<Vec<f64>> =
        front.iter().map(|a| a.iter().zip(reference).map(|(x, r)| x.min(*r)).collect()).collect();
    (0..clipped.len())
        .map(|i| {
            let rest: Vec<Vec<f64>> =
                clipped.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, p)| p.clone()).collect();
            hv_improvement(&rest, &clipped[i], reference)
        })
        .collect()
}
