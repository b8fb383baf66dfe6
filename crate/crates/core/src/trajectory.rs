//! Ordered evaluation records with fidelity-aware budget accounting.

use alloc::vec::Vec;

use crate::instance::{Direction, ObjectiveVector};
use crate::space::Configuration;

#[derive(Clone, Debug, PartialEq)]
pub struct EvalRecord {
    pub iteration: usize,
    pub config: Configuration,
    /// Raw objective values in the instance's target order.
    pub values: Vec<f64>,
    pub cost: f64,
    pub cumulative_budget: f64,
    pub full_fidelity: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    records: Vec<EvalRecord>,
    directions: Vec<Direction>,
    budget: f64,
    spent: f64,
    fallbacks: usize,
}

impl Trajectory {
    pub fn new(budget: f64, directions: Vec<Direction>) -> Self {
        Self { records: Vec::new(), directions, budget, spent: 0.0, fallbacks: 0 }
    }

    pub fn records(&self) -> &[EvalRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn budget(&self) -> f64 {
        self.budget
    }

    pub fn spent(&self) -> f64 {
        self.spent
    }

    pub fn directions(&self) -> &[Direction] {
        &self.directions
    }

    /// Whether an evaluation of `cost` keeps the total within budget.
    pub fn fits(&self, cost: f64) -> bool {
        self.spent + cost <= self.budget
    }

    /// Appends an evaluation. Returns `false`, recording nothing, if its
    /// cost would overrun the budget or is not positive.
    pub fn push(&mut self, config: Configuration, objectives: ObjectiveVector, full_fidelity: bool) -> bool {
        if !(objectives.cost > 0.0) || !self.fits(objectives.cost) {
            return false;
        }
        self.spent += objectives.cost;
        self.records.push(EvalRecord {
            iteration: self.records.len(),
            config,
            values: objectives.values,
            cost: objectives.cost,
            cumulative_budget: self.spent,
            full_fidelity,
        });
        true
    }

    pub fn fallbacks(&self) -> usize {
        self.fallbacks
    }

    pub fn note_fallback(&mut self) {
        self.fallbacks += 1;
    }

    /// Values of a record turned towards minimization.
    pub fn oriented(&self, record: &EvalRecord) -> Vec<f64> {
        record.values.iter().zip(&self.directions).map(|(v, d)| d.orient(*v)).collect()
    }

    /// Best full-fidelity value of `target` after each record, in raw
    /// units; `None` until the first full-fidelity evaluation.
    pub fn incumbents(&self, target: usize) -> Vec<Option<f64>> {
        let dir = self.directions[target];
        let mut best: Option<f64> = None;
        self.records
            .iter()
            .map(|r| {
                if r.full_fidelity {
                    let v = r.values[target];
                    if best.is_none_or(|b| dir.orient(v) < dir.orient(b)) {
                        best = Some(v);
                    }
                }
                best
            })
            .collect()
    }
}
