//! Equidistant grids over unconditional spaces and nearest-point rounding.

use alloc::vec::Vec;

use super::{Configuration, Domain, SearchSpace, SpaceError, Value};
use crate::math::{exp, ln, pow};
use crate::models::encoding::Encoder;

/// The 10-level `2^-9, ..., 2^0` fidelity ladder mapped affinely onto
/// `[lower, upper]`.
pub fn default_budget_ladder(lower: f64, upper: f64) -> Vec<f64> {
    let base = pow(2.0, -9.0);
    (0..10)
        .map(|j| {
            let level = pow(2.0, j as f64 - 9.0);
            if lower == base && upper == 1.0 {
                level
            } else if j == 9 {
                upper
            } else {
                lower + (upper - lower) * (level - base) / (1.0 - base)
            }
        })
        .collect()
}

/// A Cartesian grid stored by axis. Grid index order is row-major over the
/// parameters in declaration order (the last parameter varies fastest).
#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    axes: Vec<Vec<Value>>,
    domains: Vec<Domain>,
    /// Unit-scaled coordinate of every numeric axis value, for rounding.
    units: Vec<Option<Vec<f64>>>,
    points_per_dim: usize,
    len: usize,
}

fn largest_root(cap: u64, dims: u32, other: u64) -> u64 {
    let mut k: u64 = 1;
    while (k + 1)
        .checked_pow(dims)
        .and_then(|p| p.checked_mul(other))
        .is_some_and(|total| total <= cap)
    {
        k += 1;
    }
    k
}

fn numeric_axis(domain: &Domain, k: usize) -> Vec<Value> {
    let (lo, hi) = domain.bounds().expect("numeric");
    let mut axis: Vec<Value> = Vec::with_capacity(k);
    for i in 0..k {
        let t = if k == 1 { 0.0 } else { i as f64 / (k - 1) as f64 };
        let x = if i == 0 {
            lo
        } else if i + 1 == k {
            hi
        } else if domain.is_log() {
            exp(ln(lo) + t * (ln(hi) - ln(lo)))
        } else {
            lo + t * (hi - lo)
        };
        let v = match domain {
            Domain::Integer { .. } => Value::Int(crate::math::round(x) as i64),
            _ => Value::Real(x),
        };
        if axis.last() != Some(&v) {
            axis.push(v);
        }
    }
    axis
}

impl GridSpec {
    /// Builds the grid with `k = floor(cap^(1/D))` points per numeric
    /// dimension (categorical levels count toward the cap), crossed with
    /// the budget levels. `budget_levels` defaults to the `2^x` ladder and
    /// is ignored for spaces without a budget parameter.
    pub fn new(
        space: &SearchSpace,
        non_budget_cap: u64,
        budget_levels: Option<&[f64]>,
    ) -> Result<Self, SpaceError> {
        if space.is_conditional() {
            return Err(SpaceError::ConditionalGrid);
        }
        let budget = space.budget_index();
        let mut numeric = 0u32;
        let mut level_product: u64 = 1;
        for (i, p) in space.params().iter().enumerate() {
            if Some(i) == budget {
                continue;
            }
            match &p.domain {
                Domain::Categorical { levels } => {
                    level_product = level_product.saturating_mul(levels.len() as u64)
                }
                _ => numeric += 1,
            }
        }
        let too_small = SpaceError::CapTooSmall { cap: non_budget_cap, dim: space.dim() };
        if level_product > non_budget_cap {
            return Err(too_small);
        }
        let k = if numeric == 0 { 0 } else { largest_root(non_budget_cap, numeric, level_product) };
        if numeric > 0 && k < 2 {
            return Err(too_small);
        }

        let mut axes = Vec::with_capacity(space.len());
        let mut units = Vec::with_capacity(space.len());
        for (i, p) in space.params().iter().enumerate() {
            let axis = if Some(i) == budget {
                let (lo, hi) = p.domain.bounds().expect("numeric budget");
                let levels = match budget_levels {
                    Some(l) => l.to_vec(),
                    None => default_budget_ladder(lo, hi),
                };
                let mut axis: Vec<Value> = Vec::with_capacity(levels.len());
                for z in levels {
                    if !(z >= lo && z <= hi) {
                        return Err(SpaceError::BudgetLevel(z));
                    }
                    let v = match p.domain {
                        Domain::Integer { .. } => Value::Int(crate::math::round(z) as i64),
                        _ => Value::Real(z),
                    };
                    if !axis.contains(&v) {
                        axis.push(v);
                    }
                }
                if axis.is_empty() {
                    return Err(SpaceError::BudgetLevel(f64::NAN));
                }
                axis
            } else {
                match &p.domain {
                    Domain::Categorical { levels } => (0..levels.len() as u32).map(Value::Level).collect(),
                    d => numeric_axis(d, k as usize),
                }
            };
            units.push(match p.domain {
                Domain::Categorical { .. } => None,
                ref d => Some(axis.iter().map(|v| d.to_unit(v.as_f64())).collect()),
            });
            axes.push(axis);
        }
        let len = axes.iter().map(Vec::len).product();
        let domains = space.params().iter().map(|p| p.domain.clone()).collect();
        Ok(Self { axes, domains, units, points_per_dim: k as usize, len })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Points per numeric non-budget dimension before integer deduplication.
    pub fn points_per_dim(&self) -> usize {
        self.points_per_dim
    }

    pub fn axes(&self) -> &[Vec<Value>] {
        &self.axes
    }

    pub fn config_at(&self, mut index: usize) -> Configuration {
        let mut values = alloc::vec![None; self.axes.len()];
        for (d, axis) in self.axes.iter().enumerate().rev() {
            values[d] = Some(axis[index % axis.len()]);
            index /= axis.len();
        }
        Configuration::from_values(values)
    }

    pub fn index_of_coords(&self, coords: &[usize]) -> usize {
        coords.iter().zip(&self.axes).fold(0, |acc, (&c, axis)| acc * axis.len() + c)
    }

    pub fn iter(&self) -> impl Iterator<Item = Configuration> + '_ {
        (0..self.len).map(move |i| self.config_at(i))
    }

    /// Index of the grid point closest to `config` in encoded Euclidean
    /// distance, ties going to the lowest index. The distance separates
    /// over axes, so each axis is rounded on its own.
    pub fn nearest_index(&self, config: &Configuration) -> usize {
        let mut coords = alloc::vec![0usize; self.axes.len()];
        for (d, axis) in self.axes.iter().enumerate() {
            let value = config.get(d);
            coords[d] = match (&self.units[d], value) {
                (Some(units), Some(v)) => {
                    let u = self.unit_of(d, v);
                    nearest_sorted(units, u)
                }
                (None, Some(v)) => axis.iter().position(|a| *a == v).unwrap_or(0),
                (_, None) => 0,
            };
        }
        self.index_of_coords(&coords)
    }

    fn unit_of(&self, axis: usize, v: Value) -> f64 {
        self.domains[axis].to_unit(v.as_f64())
    }
}

fn nearest_sorted(units: &[f64], u: f64) -> usize {
    let hi = units.partition_point(|&x| x < u);
    if hi == 0 {
        return 0;
    }
    if hi == units.len() {
        return units.len() - 1;
    }
    let lo = hi - 1;
    if (u - units[lo]).abs() <= (units[hi] - u).abs() {
        lo
    } else {
        hi
    }
}

/// Materializes every grid configuration.
pub fn make_grid(
    space: &SearchSpace,
    non_budget_cap: u64,
    budget_levels: Option<&[f64]>,
) -> Result<Vec<Configuration>, SpaceError> {
    Ok(GridSpec::new(space, non_budget_cap, budget_levels)?.iter().collect())
}

/// Returns the member of `grid` nearest to `config` in encoded Euclidean
/// distance; ties go to the lowest grid index.
pub fn round_to_grid(space: &SearchSpace, grid: &[Configuration], config: &Configuration) -> Configuration {
    assert!(!grid.is_empty(), "empty grid");
    let encoder = Encoder::new(space);
    let target = encoder.encode(space, config).expect("valid configuration");
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (i, g) in grid.iter().enumerate() {
        let e = encoder.encode(space, g).expect("grid member");
        let d: f64 = e.iter().zip(&target).map(|(a, b)| (a - b) * (a - b)).sum();
        if d < best_d {
            best_d = d;
            best = i;
        }
    }
    grid[best].clone()
}
