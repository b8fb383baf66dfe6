//! Executes suites: builds instances, runs every (cell, optimizer,
//! replication) on a bounded worker pool and writes one CSV per cell plus
//! a manifest.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use hpobench_core::instance::SurrogateConfig;
use hpobench_core::rng::SeedHasher;
use hpobench_core::{budget_for, run_optimizer, Instance, Mode, RunSettings};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::persist;
use crate::suite::{CellSpec, OptimizerChoice, SuiteSpec};

/// Column order of result files.
pub const HEADER: [&str; 12] = [
    "suite",
    "instance",
    "mode",
    "optimizer",
    "replication",
    "iteration",
    "cumulative_budget",
    "cost",
    "full_fidelity",
    "objectives",
    "best_so_far",
    "config",
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub suite: String,
    pub instance: String,
    pub mode: Mode,
    pub optimizer: String,
    pub replication: usize,
    pub iteration: usize,
    pub cumulative_budget: f64,
    pub cost: f64,
    pub full_fidelity: bool,
    /// Raw objective values joined by `;`.
    pub objectives: String,
    /// Best full-fidelity value so far, single-objective runs only.
    pub best_so_far: Option<f64>,
    pub config: String,
}

impl ResultRow {
    pub fn values(&self) -> Vec<f64> {
        self.objectives.split(';').map(|v| v.parse().unwrap_or(f64::NAN)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CellStatus {
    Ok,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellReport {
    pub key: String,
    pub instance: String,
    pub mode: Mode,
    pub file: Option<String>,
    pub budget: Option<f64>,
    pub trajectories: usize,
    pub status: CellStatus,
    pub errors: Vec<String>,
    /// Held-out Spearman correlation per target, surrogate cells only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surrogate_rho: Option<Vec<Option<f64>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub artifact: String,
    pub spec: SuiteSpec,
    pub workers: usize,
    pub wall_time_s: f64,
    pub cells: Vec<CellReport>,
}

impl Manifest {
    pub fn read(dir: &Path) -> Result<Self> {
        let path = dir.join(MANIFEST);
        let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }
}

pub const MANIFEST: &str = "manifest.json";

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub out: PathBuf,
    /// Worker threads; 0 uses all cores.
    pub workers: usize,
    pub settings: RunSettings,
}

impl RunOptions {
    pub fn new(out: impl Into<PathBuf>) -> Self {
        Self { out: out.into(), workers: 0, settings: RunSettings::default() }
    }
}

/// Seed of one replication, independent of scheduling order.
pub fn replication_seed(master: u64, cell: &str, optimizer: &str, replication: usize) -> u64 {
    SeedHasher::new(master).str(cell).str(optimizer).u64(replication as u64).finish()
}

fn instance_seed(master: u64, cell: &CellSpec) -> u64 {
    SeedHasher::new(master).str("instance").str(&cell.instance).str(cell.mode.name()).finish()
}

/// An instance with the held-out rho of its surrogate, if it has one.
pub type BuiltInstance = (Instance, Option<Vec<Option<f64>>>);

/// Builds the instance of a cell in its mode, loading `source` when set.
pub fn build_instance(spec: &SuiteSpec, cell: &CellSpec) -> Result<BuiltInstance> {
    let (inst, rho) = match &cell.source {
        Some(path) => {
            let inst = persist::load(path).with_context(|| format!("loading {}", path.display()))?;
            anyhow::ensure!(
                inst.id() == cell.instance && inst.mode() == cell.mode,
                "{} holds {}/{}, expected {}",
                path.display(),
                inst.id(),
                inst.mode(),
                cell.key()
            );
            let rho = inst.surrogate().map(|s| s.report().rho.clone());
            (inst, rho)
        }
        None => {
            let real = Instance::from_id(&cell.instance)?;
            match cell.mode {
                Mode::Real => (real, None),
                Mode::Tabular => (real.tabulate(spec.tabular_cap, None)?, None),
                Mode::Surrogate => {
                    let cfg = SurrogateConfig { n_train: spec.n_train, ..SurrogateConfig::default() };
                    let (inst, report) = real.fit_surrogate(&cfg, instance_seed(spec.master_seed, cell))?;
                    (inst, Some(report.rho))
                }
            }
        }
    };
    let inst = if cell.targets.is_empty() {
        inst
    } else {
        let ids: Vec<&str> = cell.targets.iter().map(String::as_str).collect();
        inst.select_targets(&ids)?
    };
    Ok((inst, rho))
}

fn file_name(key: &str) -> String {
    let safe: String = key.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' }).collect();
    format!("{safe}.csv")
}

fn fmt_values(values: &[f64]) -> String {
    values.iter().map(f64::to_string).collect::<Vec<_>>().join(";")
}

struct Job<'a> {
    cell: usize,
    optimizer: OptimizerChoice,
    replication: usize,
    instance: &'a Instance,
    budget: f64,
}

fn run_job(spec: &SuiteSpec, cells: &[CellSpec], job: &Job<'_>, settings: &RunSettings) -> Result<Vec<ResultRow>, String> {
    let cell = &cells[job.cell];
    let name = job.optimizer.to_string();
    let id = job.optimizer.resolve(cell.mode);
    let seed = replication_seed(spec.master_seed, &cell.key(), &name, job.replication);
    let out = run_optimizer(id, job.instance, job.budget, seed, settings)
        .map_err(|e| format!("{name} replication {}: {e}", job.replication))?;
    let space = job.instance.space();
    let single = job.instance.targets() == 1;
    let dir = job.instance.directions();
    let mut best: Option<f64> = None;
    Ok(out
        .trajectory
        .records()
        .iter()
        .map(|r| {
            if single && r.full_fidelity {
                let v = dir[0].orient(r.values[0]);
                best = Some(best.map_or(v, |b| b.min(v)));
            }
            ResultRow {
                suite: spec.name.clone(),
                instance: cell.instance.clone(),
                mode: cell.mode,
                optimizer: name.clone(),
                replication: job.replication,
                iteration: r.iteration,
                cumulative_budget: r.cumulative_budget,
                cost: r.cost,
                full_fidelity: r.full_fidelity,
                objectives: fmt_values(&r.values),
                best_so_far: best.map(|b| dir[0].orient(b)),
                config: space.describe(&r.config),
            }
        })
        .collect())
}

fn write_rows(path: &Path, rows: &[ResultRow]) -> Result<()> {
    let tmp = path.with_extension("partial");
    let mut w = csv::Writer::from_path(&tmp)?;
    if rows.is_empty() {
        w.write_record(HEADER)?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    drop(w);
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn read_rows(path: &Path) -> Result<Vec<ResultRow>> {
    let mut r = csv::Reader::from_path(path).with_context(|| format!("opening {}", path.display()))?;
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    anyhow::ensure!(header == HEADER, "{}: unexpected header {:?}", path.display(), header);
    r.deserialize().collect::<Result<_, _>>().with_context(|| format!("reading {}", path.display()))
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    Ok(rayon::ThreadPoolBuilder::new().num_threads(workers).build()?)
}

/// Runs a validated suite and writes its results into `opts.out`.
pub fn run_suite(spec: &SuiteSpec, opts: &RunOptions) -> Result<Manifest> {
    spec.validate()?;
    fs::create_dir_all(&opts.out).with_context(|| format!("creating {}", opts.out.display()))?;
    let started = Instant::now();
    let pool = pool(opts.workers)?;
    let workers = pool.current_num_threads();

    let built: Vec<Result<BuiltInstance>> =
        pool.install(|| spec.cells.par_iter().map(|c| build_instance(spec, c)).collect());

    let mut jobs = Vec::new();
    let mut reports = Vec::with_capacity(spec.cells.len());
    for (i, (cell, b)) in spec.cells.iter().zip(&built).enumerate() {
        let mut report = CellReport {
            key: cell.key(),
            instance: cell.instance.clone(),
            mode: cell.mode,
            file: None,
            budget: None,
            trajectories: 0,
            status: CellStatus::Ok,
            errors: Vec::new(),
            surrogate_rho: None,
        };
        match b {
            Ok((inst, rho)) => {
                let budget = spec.budget.unwrap_or_else(|| budget_for(inst.space()) as f64);
                report.budget = Some(budget);
                report.surrogate_rho = rho.clone();
                for optimizer in cell.optimizer_choices()? {
                    for replication in 0..spec.replications {
                        jobs.push(Job { cell: i, optimizer, replication, instance: inst, budget });
                    }
                }
            }
            Err(e) => {
                log::error!("building {}: {e:#}", cell.key());
                report.status = CellStatus::Failed;
                report.errors.push(format!("{e:#}"));
            }
        }
        reports.push(report);
    }
    log::info!("{}: {} trajectories on {} workers", spec.name, jobs.len(), workers);

    let results: Vec<Result<Vec<ResultRow>, String>> =
        pool.install(|| jobs.par_iter().map(|j| run_job(spec, &spec.cells, j, &opts.settings)).collect());

    let mut per_cell: Vec<Vec<ResultRow>> = vec![Vec::new(); spec.cells.len()];
    for (job, res) in jobs.iter().zip(results) {
        match res {
            Ok(rows) => {
                reports[job.cell].trajectories += 1;
                per_cell[job.cell].extend(rows);
            }
            Err(e) => {
                log::error!("{}: {e}", spec.cells[job.cell].key());
                reports[job.cell].status = CellStatus::Failed;
                reports[job.cell].errors.push(e);
            }
        }
    }
    for ((cell, rows), report) in spec.cells.iter().zip(&mut per_cell).zip(&mut reports) {
        if report.budget.is_none() {
            continue;
        }
        rows.sort_by(|a, b| {
            (&a.optimizer, a.replication, a.iteration).cmp(&(&b.optimizer, b.replication, b.iteration))
        });
        let name = file_name(&cell.key());
        write_rows(&opts.out.join(&name), rows)?;
        report.file = Some(name);
    }
    let manifest = Manifest {
        artifact: crate::ARTIFACT.to_string(),
        spec: spec.clone(),
        workers,
        wall_time_s: started.elapsed().as_secs_f64(),
        cells: reports,
    };
    fs::write(opts.out.join(MANIFEST), serde_json::to_string_pretty(&manifest)?)?;
    Ok(manifest)
}

/// Rows of every successfully written cell of a result directory.
pub fn load_results(dir: &Path) -> Result<(Manifest, Vec<ResultRow>)> {
    let manifest = Manifest::read(dir)?;
    let mut rows = Vec::new();
    for c in &manifest.cells {
        if let Some(f) = &c.file {
            rows.extend(read_rows(&dir.join(f))?);
        }
    }
    Ok((manifest, rows))
}
