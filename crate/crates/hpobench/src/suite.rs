//! Suite specifications and the built-in suite registry.

use std::collections::BTreeSet;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use hpobench_core::instance::Objective;
use hpobench_core::so::{AcqOptimizer, SurrogateKind};
use hpobench_core::testfuncs::SyntheticFunction;
use hpobench_core::{Instance, Mode, OptimizerId};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SuiteError {
    #[error("suite has no cells")]
    NoCells,
    #[error("replications must be at least 1")]
    NoReplications,
    #[error("unknown instance `{0}`")]
    UnknownInstance(String),
    #[error("cell `{0}` lists no optimizers")]
    NoOptimizers(String),
    #[error("{0}")]
    Optimizer(String),
    #[error("cell `{cell}`: unknown target `{target}`")]
    UnknownTarget { cell: String, target: String },
    #[error("duplicate cell `{0}`")]
    DuplicateCell(String),
    #[error("budget override must be positive")]
    Budget,
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
}

/// An optimizer as named in a suite. Besides the core ids this accepts
/// `bo-{gp,rf,nn}-df`, the default acquisition search of each mode:
/// exhaustive over tabular candidates, Nelder-Mead otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum OptimizerChoice {
    Fixed(OptimizerId),
    BoDefault(SurrogateKind),
}

impl OptimizerChoice {
    pub fn resolve(self, mode: Mode) -> OptimizerId {
        match self {
            OptimizerChoice::Fixed(id) => id,
            OptimizerChoice::BoDefault(s) => {
                let a = if mode == Mode::Tabular { AcqOptimizer::Exhaustive } else { AcqOptimizer::NelderMead };
                OptimizerId::Bo(s, a)
            }
        }
    }
}

impl fmt::Display for OptimizerChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OptimizerChoice::Fixed(id) => write!(f, "{id}"),
            OptimizerChoice::BoDefault(s) => {
                let s = match s {
                    SurrogateKind::Gp => "gp",
                    SurrogateKind::Rf => "rf",
                    SurrogateKind::Nn => "nn",
                };
                write!(f, "bo-{s}-df")
            }
        }
    }
}

impl FromStr for OptimizerChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let kind = match s {
            "bo-gp-df" => Some(SurrogateKind::Gp),
            "bo-rf-df" => Some(SurrogateKind::Rf),
            "bo-nn-df" => Some(SurrogateKind::Nn),
            _ => None,
        };
        match kind {
            Some(k) => Ok(OptimizerChoice::BoDefault(k)),
            None => s.parse().map(OptimizerChoice::Fixed),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellSpec {
    pub instance: String,
    pub mode: Mode,
    pub optimizers: Vec<String>,
    /// Target subset; empty selects all targets.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub targets: Vec<String>,
    /// Prebuilt tabular or surrogate file to load instead of building one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<PathBuf>,
}

impl CellSpec {
    pub fn key(&self) -> String {
        let mut k = format!("{}/{}", self.instance, self.mode);
        if !self.targets.is_empty() {
            k.push('/');
            k.push_str(&self.targets.join(","));
        }
        k
    }

    pub fn optimizer_choices(&self) -> Result<Vec<OptimizerChoice>, SuiteError> {
        self.optimizers.iter().map(|o| o.parse().map_err(SuiteError::Optimizer)).collect()
    }
}

fn default_version() -> String {
    "v1.0".to_string()
}

fn default_replications() -> usize {
    hpobench_core::REPLICATIONS
}

fn default_cap() -> u64 {
    10_000
}

fn default_n_train() -> usize {
    10_000
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteSpec {
    pub name: String,
    #[serde(default = "default_version")]
    pub version: String,
    pub cells: Vec<CellSpec>,
    #[serde(default = "default_replications")]
    pub replications: usize,
    #[serde(default)]
    pub master_seed: u64,
    /// Flat budget in full-fidelity evaluations replacing the
    /// dimension-based protocol budget.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<f64>,
    /// Non-budget grid points of tabular instances.
    #[serde(default = "default_cap")]
    pub tabular_cap: u64,
    /// Training evaluations of surrogate instances.
    #[serde(default = "default_n_train")]
    pub n_train: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
}

impl SuiteSpec {
    pub fn validate(&self) -> Result<(), SuiteError> {
        if self.cells.is_empty() {
            return Err(SuiteError::NoCells);
        }
        if self.replications == 0 {
            return Err(SuiteError::NoReplications);
        }
        if self.budget.is_some_and(|b| b.is_nan() || b <= 0.0) {
            return Err(SuiteError::Budget);
        }
        let mut keys = BTreeSet::new();
        for cell in &self.cells {
            let key = cell.key();
            if !keys.insert(key.clone()) {
                return Err(SuiteError::DuplicateCell(key));
            }
            let inst = Instance::from_id(&cell.instance).map_err(|_| SuiteError::UnknownInstance(cell.instance.clone()))?;
            if cell.optimizers.is_empty() {
                return Err(SuiteError::NoOptimizers(key));
            }
            cell.optimizer_choices()?;
            let ids = inst.target_ids();
            if let Some(t) = cell.targets.iter().find(|t| !ids.contains(&t.as_str())) {
                return Err(SuiteError::UnknownTarget { cell: key, target: t.clone() });
            }
        }
        Ok(())
    }

    /// Keeps only cells of `mode`.
    pub fn restrict_mode(&mut self, mode: Mode) {
        self.cells.retain(|c| c.mode == mode);
    }

    pub fn set_optimizers(&mut self, optimizers: &[String]) {
        for c in &mut self.cells {
            c.optimizers = optimizers.to_vec();
        }
    }

    pub fn distinct_instances(&self) -> usize {
        self.cells.iter().map(|c| c.instance.as_str()).collect::<BTreeSet<_>>().len()
    }
}

fn synth_cells(modes: &[Mode], optimizers: &[&str]) -> Vec<CellSpec> {
    let mut cells = Vec::new();
    for f in SyntheticFunction::ALL {
        for &mode in modes {
            cells.push(CellSpec {
                instance: Objective::Single(f).id(),
                mode,
                optimizers: optimizers.iter().map(|s| s.to_string()).collect(),
                targets: Vec::new(),
                source: None,
            });
        }
    }
    cells
}

pub const SUITES: [&str; 3] = ["tabsur-desk", "tabsur-full", "mo-desk"];

/// Built-in suites:
///
/// * `tabsur-desk`: five synthetic functions in all three modes under
///   four optimizers, 10 replications of a 50-evaluation budget.
/// * `tabsur-full`: the same comparison with eight optimizers, 30
///   replications of 100 evaluations and tables of 10^5 grid points.
/// * `mo-desk`: the multi-objective optimizers on real bi-objective
///   composites of the synthetic functions.
pub fn builtin(name: &str) -> Result<SuiteSpec, SuiteError> {
    let modes = Mode::ALL;
    let spec = match name {
        "tabsur-desk" => SuiteSpec {
            name: name.to_string(),
            version: default_version(),
            cells: synth_cells(&modes, &["rs", "bo-gp-rs", "bo-rf-rs", "hb"]),
            replications: 10,
            master_seed: 0,
            budget: Some(50.0),
            tabular_cap: 10_000,
            n_train: 10_000,
            out_dir: None,
        },
        "tabsur-full" => SuiteSpec {
            name: name.to_string(),
            version: default_version(),
            cells: synth_cells(
                &modes,
                &["rs", "hb", "bo-gp-rs", "bo-gp-df", "bo-rf-rs", "bo-rf-df", "bo-nn-rs", "bo-nn-df"],
            ),
            replications: 30,
            master_seed: 0,
            budget: Some(100.0),
            tabular_cap: 100_000,
            n_train: 10_000,
            out_dir: None,
        },
        "mo-desk" => {
            let optimizers: Vec<String> =
                ["rs-mo", "rs-x4", "parego", "mego", "ehvi", "mies"].iter().map(|s| s.to_string()).collect();
            let cells = ["synth-mo:branin2-currin2", "synth-mo:hartmann3-hartmann6", "synth-mo:currin2-borehole8"]
                .iter()
                .map(|id| CellSpec {
                    instance: id.to_string(),
                    mode: Mode::Real,
                    optimizers: optimizers.clone(),
                    targets: Vec::new(),
                    source: None,
                })
                .collect();
            SuiteSpec {
                name: name.to_string(),
                version: default_version(),
                cells,
                replications: 10,
                master_seed: 0,
                budget: None,
                tabular_cap: 10_000,
                n_train: 10_000,
                out_dir: None,
            }
        }
        other => return Err(SuiteError::UnknownSuite(other.to_string())),
    };
    Ok(spec)
}
