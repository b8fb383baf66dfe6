//! Dominance, nondominated sorting and Pareto archives. All vectors are
//! minimized.

use alloc::vec;
use alloc::vec::Vec;

use crate::space::Configuration;
use crate::trajectory::Trajectory;

/// `a` is no worse than `b` everywhere and strictly better somewhere.
pub fn dominates(a: &[f64], b: &[f64]) -> bool {
    let mut strict = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        strict |= x < y;
    }
    strict
}

/// Front index of every point: 0 for the nondominated set, `k` for the
/// points nondominated once fronts `0..k` are removed.
pub fn nondominated_sort(points: &[Vec<f64>]) -> Vec<usize> {
    let n = points.len();
    let mut dominated_by = vec![0usize; n];
    let mut dominates_list: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in i + 1..n {
            if dominates(&points[i], &points[j]) {
                dominates_list[i].push(j);
                dominated_by[j] += 1;
            } else if dominates(&points[j], &points[i]) {
                dominates_list[j].push(i);
                dominated_by[i] += 1;
            }
        }
    }
    let mut rank = vec![0usize; n];
    let mut current: Vec<usize> = (0..n).filter(|&i| dominated_by[i] == 0).collect();
    let mut level = 0;
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            rank[i] = level;
            for &j in &dominates_list[i] {
                dominated_by[j] -= 1;
                if dominated_by[j] == 0 {
                    next.push(j);
                }
            }
        }
        current = next;
        level += 1;
    }
    rank
}

/// Indices of the nondominated points, in input order.
pub fn nondominated_indices(points: &[Vec<f64>]) -> Vec<usize> {
    let n = points.len();
    if n == 0 {
        return Vec::new();
    }
    if points[0].len() == 2 {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            points[a][0].total_cmp(&points[b][0]).then(points[a][1].total_cmp(&points[b][1]))
        });
        let mut keep = Vec::new();
        let mut best_prev = f64::INFINITY;
        let mut k = 0;
        while k < n {
            let x = points[order[k]][0];
            let group_min = points[order[k]][1];
            let mut end = k;
            while end < n && points[order[end]][0] == x {
                end += 1;
            }
            if group_min < best_prev {
                keep.extend(order[k..end].iter().copied().filter(|&i| points[i][1] == group_min));
                best_prev = group_min;
            }
            k = end;
        }
        keep.sort_unstable();
        return keep;
    }
    (0..n).filter(|&i| !(0..n).any(|j| j != i && dominates(&points[j], &points[i]))).collect()
}

/// Mutually nondominated (configuration, minimized objectives) pairs.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ParetoArchive {
    entries: Vec<(Configuration, Vec<f64>)>,
}

impl ParetoArchive {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts unless dominated by a member; removes members the newcomer
    /// dominates. Returns whether it was inserted.
    pub fn insert(&mut self, config: Configuration, objectives: Vec<f64>) -> bool {
        if self.entries.iter().any(|(_, y)| dominates(y, &objectives)) {
            return false;
        }
        self.entries.retain(|(_, y)| !dominates(&objectives, y));
        self.entries.push((config, objectives));
        true
    }

    /// The archive of a run's full-fidelity evaluations.
    pub fn from_trajectory(traj: &Trajectory) -> Self {
        let mut a = Self::new();
        for r in traj.records().iter().filter(|r| r.full_fidelity) {
            a.insert(r.config.clone(), traj.oriented(r));
        }
        a
    }

    pub fn entries(&self) -> &[(Configuration, Vec<f64>)] {
        &self.entries
    }

    pub fn points(&self) -> Vec<Vec<f64>> {
        self.entries.iter().map(|(_, y)| y.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use rand::Rng;

    #[test]
    fn small_examples() {
        let pts = vec![vec![0.0, 1.0], vec![1.0, 0.0], vec![2.0, 2.0]];
        assert_eq!(nondominated_sort(&pts), vec![0, 0, 1]);
        assert_eq!(nondominated_sort(&vec![vec![1.0, 1.0]; 4]), vec![0; 4]);
    }

    #[test]
    fn fast_front_matches_pairwise() {
        let mut rng = stream(8);
        for _ in 0..200 {
            let n = rng.random_range(1..40);
            let pts: Vec<Vec<f64>> =
                (0..n).map(|_| vec![rng.random_range(0..6) as f64, rng.random_range(0..6) as f64]).collect();
            let brute: Vec<usize> =
                (0..n).filter(|&i| !(0..n).any(|j| dominates(&pts[j], &pts[i]))).collect();
            assert_eq!(nondominated_indices(&pts), brute);
        }
    }

    #[test]
    fn archive_stays_nondominated() {
        let mut rng = stream(2);
        let mut a = ParetoArchive::new();
        for _ in 0..300 {
            a.insert(Configuration::empty(0), vec![rng.random(), rng.random(), rng.random()]);
            let pts = a.points();
            for i in 0..pts.len() {
                for j in 0..pts.len() {
                    assert!(!dominates(&pts[i], &pts[j]));
                }
            }
        }
    }
}
