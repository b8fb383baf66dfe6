//! Mixed-integer evolution strategy with (mu + lambda) survival by
//! nondominated rank and hypervolume contribution.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Distribution, Normal};

use super::hypervolume::contributions;
use super::pareto::nondominated_sort;
use super::require_mo;
use crate::instance::Instance;
use crate::optimizer::{evaluate_into, RunError};
use crate::protocol::mies_sizes;
use crate::rng::{stream, Stream};
use crate::space::{Configuration, Domain, SearchSpace, Value};
use crate::trajectory::Trajectory;

pub const CROSSOVER_P: f64 = 0.2;
pub const MUTATION_P: f64 = 0.2;
/// Mutation step as a fraction of the unit-scaled range.
pub const MUTATION_SD: f64 = 0.1;

#[derive(Clone)]
struct Individual {
    /// A value for every parameter, active or not.
    genes: Vec<Value>,
    objectives: Vec<f64>,
}

fn phenotype(space: &SearchSpace, genes: &[Value]) -> Configuration {
    let budget = space.budget_index();
    let mut c = Configuration::empty(space.len());
    for (i, g) in genes.iter().enumerate() {
        if Some(i) == budget {
            c.set(i, space.full_fidelity());
        } else if space.is_active(i, &c) {
            c.set(i, Some(*g));
        }
    }
    c
}

fn mutate(space: &SearchSpace, genes: &mut [Value], rng: &mut Stream) {
    let step = Normal::new(0.0, MUTATION_SD).expect("positive sd");
    for (i, p) in space.params().iter().enumerate() {
        if p.is_budget || !rng.random_bool(MUTATION_P) {
            continue;
        }
        genes[i] = match (&p.domain, genes[i]) {
            (Domain::Categorical { levels }, Value::Level(l)) => {
                let k = rng.random_range(0..levels.len() as u32 - 1);
                Value::Level(if k >= l { k + 1 } else { k })
            }
            (d, v) => d.from_unit(d.to_unit(v.as_f64()) + step.sample(rng)),
        };
    }
}

/// Indices of the `mu` best points ordered by nondominated rank, then by
/// decreasing hypervolume contribution within the front (on objectives
/// normalized over `points`, reference 1.1), then by index.
pub fn survivors(points: &[Vec<f64>], mu: usize) -> Vec<usize> {
    let m = points.first().map_or(0, Vec::len);
    let ranks = nondominated_sort(points);
    let lower: Vec<f64> = (0..m).map(|j| points.iter().map(|p| p[j]).fold(f64::INFINITY, f64::min)).collect();
    let upper: Vec<f64> = (0..m).map(|j| points.iter().map(|p| p[j]).fold(f64::NEG_INFINITY, f64::max)).collect();
    let norm: Vec<Vec<f64>> = points
        .iter()
        .map(|p| {
            p.iter()
                .enumerate()
                .map(|(j, v)| {
                    let r = upper[j] - lower[j];
                    if r > 0.0 { (v - lower[j]) / r } else { 0.0 }
                })
                .collect()
        })
        .collect();
    let reference = vec![1.1; m];
    let mut contribution = vec![0.0; points.len()];
    let max_rank = ranks.iter().copied().max().unwrap_or(0);
    for rank in 0..=max_rank {
        let members: Vec<usize> = (0..points.len()).filter(|&i| ranks[i] == rank).collect();
        let front: Vec<Vec<f64>> = members.iter().map(|&i| norm[i].clone()).collect();
        for (&i, c) in members.iter().zip(contributions(&front, &reference)) {
            contribution[i] = c;
        }
    }
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| ranks[a].cmp(&ranks[b]).then(contribution[b].total_cmp(&contribution[a])).then(a.cmp(&b)));
    order.truncate(mu);
    order
}

fn tournament(ranks: &[usize], rng: &mut Stream) -> usize {
    let a = rng.random_range(0..ranks.len());
    let b = rng.random_range(0..ranks.len());
    if ranks[b] < ranks[a] { b } else { a }
}

pub fn run_mies(instance: &Instance, budget: f64, seed: u64) -> Result<Trajectory, RunError> {
    require_mo(instance)?;
    if !(budget >= 24.0) {
        return Err(RunError::BudgetTooSmall { budget, needed: 24.0 });
    }
    let (mu, lambda) = mies_sizes(budget as usize);
    let space = instance.space();
    let mut rng = stream(seed);
    let mut traj = Trajectory::new(budget, instance.directions());

    let evaluate = |genes: Vec<Value>, traj: &mut Trajectory| -> Result<Option<Individual>, RunError> {
        let before = traj.len();
        if !evaluate_into(instance, traj, phenotype(space, &genes))? {
            return Ok(None);
        }
        let objectives = traj.oriented(&traj.records()[before]);
        Ok(Some(Individual { genes, objectives }))
    };

    let mut population = Vec::with_capacity(mu + lambda);
    for _ in 0..mu {
        let genes: Vec<Value> = space.params().iter().map(|p| SearchSpace::sample_value(&p.domain, &mut rng)).collect();
        match evaluate(genes, &mut traj)? {
            Some(ind) => population.push(ind),
            None => return Ok(traj),
        }
    }
    while traj.fits(1.0) {
        let points: Vec<Vec<f64>> = population.iter().map(|i| i.objectives.clone()).collect();
        let ranks = nondominated_sort(&points);
        let mut offspring = Vec::with_capacity(lambda);
        for _ in 0..lambda {
            let a = &population[tournament(&ranks, &mut rng)];
            let b = &population[tournament(&ranks, &mut rng)];
            let mut genes = a.genes.clone();
            for (g, other) in genes.iter_mut().zip(&b.genes) {
                if rng.random_bool(CROSSOVER_P) {
                    *g = *other;
                }
            }
            mutate(space, &mut genes, &mut rng);
            match evaluate(genes, &mut traj)? {
                Some(ind) => offspring.push(ind),
                None => break,
            }
        }
        if offspring.is_empty() {
            break;
        }
        population.extend(offspring);
        let points: Vec<Vec<f64>> = population.iter().map(|i| i.objectives.clone()).collect();
        let keep = survivors(&points, mu);
        population = keep.into_iter().map(|i| population[i].clone()).collect();
    }
    Ok(traj)
}
