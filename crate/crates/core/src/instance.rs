//! Benchmark instances: an objective source wrapped in real, tabular or
//! surrogate mode behind one evaluation interface.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::math::{fabs, ln};
use crate::models::encoding::{EncodeError, Encoder};
use crate::models::mlp::{fit_mlp_ensemble, stratified_holdout, MlpConfig, MlpEnsemble, MlpError, PredictMode};
use crate::models::spearman::spearman_rho;
use crate::models::Matrix;
use crate::models::Transform;
use crate::rng::{child_seed, stream};
use crate::space::{default_budget_ladder, Configuration, GridSpec, ParamDef, SearchSpace, SpaceError, Value, Violation};
use crate::testfuncs::{EvalError, SyntheticFunction, FIDELITY_ID, Z_MIN};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Real,
    Tabular,
    Surrogate,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::Real, Mode::Tabular, Mode::Surrogate];

    pub fn name(self) -> &'static str {
        match self {
            Mode::Real => "real",
            Mode::Tabular => "tabular",
            Mode::Surrogate => "surrogate",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Mode::ALL.into_iter().find(|m| m.name() == s).ok_or_else(|| format!("unknown mode `{s}`"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Minimize,
    Maximize,
}

impl Direction {
    /// Maps a raw value onto the internal minimize orientation.
    pub fn orient(self, y: f64) -> f64 {
        match self {
            Direction::Minimize => y,
            Direction::Maximize => -y,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ObjectiveVector {
    pub values: Vec<f64>,
    /// Full-fidelity equivalents consumed.
    pub cost: f64,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InstanceError {
    #[error("invalid configuration: {0:?}")]
    Invalid(Vec<Violation>),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error(transparent)]
    Fit(#[from] MlpError),
    #[error("operation needs a real-mode instance, got {0}")]
    NotReal(Mode),
    #[error("surrogate training needs at least 100 samples, got {0}")]
    TooFewSamples(usize),
    #[error("unknown target `{0}`")]
    UnknownTarget(String),
    #[error("no targets selected")]
    NoTargets,
    #[error("unknown instance id `{0}`")]
    UnknownId(String),
    #[error("stored table has {got} values, grid needs {expected}")]
    TableSize { expected: usize, got: usize },
}

/// The function behind a real instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Objective {
    Single(SyntheticFunction),
    /// Several functions sharing one unit-cube input; each reads the
    /// leading coordinates it needs, mapped affinely onto its own box.
    Composite(Vec<SyntheticFunction>),
}

impl Objective {
    /// Resolves `synth:<fn>` and `synth-mo:<fn>-<fn>[-...]` ids.
    pub fn from_id(id: &str) -> Option<Self> {
        if let Some(name) = id.strip_prefix("synth:") {
            return SyntheticFunction::from_name(name).map(Objective::Single);
        }
        let names = id.strip_prefix("synth-mo:")?;
        let fns: Option<Vec<_>> = names.split('-').map(SyntheticFunction::from_name).collect();
        fns.filter(|f| f.len() >= 2).map(Objective::Composite)
    }

    pub fn id(&self) -> String {
        match self {
            Objective::Single(f) => format!("synth:{f}"),
            Objective::Composite(fs) => {
                let names: Vec<&str> = fs.iter().map(|f| f.name()).collect();
                format!("synth-mo:{}", names.join("-"))
            }
        }
    }

    pub fn space(&self) -> SearchSpace {
        match self {
            Objective::Single(f) => f.space(),
            Objective::Composite(fs) => {
                let d = fs.iter().map(|f| f.dim()).max().unwrap_or(1);
                let mut params: Vec<ParamDef> =
                    (1..=d).map(|i| ParamDef::continuous(&format!("u{i}"), 0.0, 1.0)).collect();
                params.push(ParamDef::continuous(FIDELITY_ID, Z_MIN, 1.0).log().budget());
                SearchSpace::new(&self.id(), params).expect("composite spaces are well formed")
            }
        }
    }

    pub fn target_ids(&self) -> Vec<String> {
        match self {
            Objective::Single(_) => vec![String::from("y")],
            Objective::Composite(fs) => fs.iter().map(|f| f.name().to_string()).collect(),
        }
    }

    fn evaluate(&self, x: &[f64], z: f64) -> Result<Vec<f64>, EvalError> {
        match self {
            Objective::Single(f) => Ok(vec![f.eval(x, z)?]),
            Objective::Composite(fs) => fs
                .iter()
                .map(|f| {
                    let mapped: Vec<f64> =
                        f.input_box().iter().zip(x).map(|((lo, hi), u)| lo + u * (hi - lo)).collect();
                    f.eval(&mapped, z)
                })
                .collect(),
        }
    }
}

/// Pre-recorded objective values on a grid, looked up by nearest point.
#[derive(Clone, Debug)]
pub struct TabularTable {
    grid: GridSpec,
    cap: u64,
    levels: Vec<f64>,
    targets: usize,
    values: Vec<f64>,
}

impl TabularTable {
    pub fn rows(&self) -> usize {
        self.grid.len()
    }

    pub fn row(&self, index: usize) -> &[f64] {
        &self.values[index * self.targets..(index + 1) * self.targets]
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QualityReport {
    pub n_train: usize,
    pub n_test: usize,
    /// Held-out Spearman correlation per target; `None` when undefined.
    pub rho: Vec<Option<f64>>,
    pub degenerate: Vec<bool>,
    /// Whether every target clears the `rho > 0.7` inclusion cutoff.
    pub faithful: bool,
}

#[derive(Clone, Debug)]
pub struct SurrogateConfig {
    pub n_train: usize,
    pub test_fraction: f64,
    /// Pick each target's transform by [`Transform::least_skewed`] on the
    /// training values; only used when `mlp.transforms` is empty.
    pub auto_transform: bool,
    pub mlp: MlpConfig,
}

impl Default for SurrogateConfig {
    fn default() -> Self {
        Self {
            n_train: 10_000,
            test_fraction: 0.2,
            auto_transform: true,
            mlp: MlpConfig { learning_rate: 3e-3, ..MlpConfig::default() },
        }
    }
}

#[derive(Clone, Debug)]
pub struct SurrogateModel {
    ensemble: MlpEnsemble,
    encoder: Encoder,
    predict: PredictMode,
    report: QualityReport,
}

impl SurrogateModel {
    pub fn ensemble(&self) -> &MlpEnsemble {
        &self.ensemble
    }

    pub fn report(&self) -> &QualityReport {
        &self.report
    }

    pub fn predict_mode(&self) -> PredictMode {
        self.predict
    }
}

#[derive(Clone, Debug)]
enum Evaluator {
    Real,
    Tabular(TabularTable),
    Surrogate(SurrogateModel),
}

#[derive(Clone, Debug)]
pub struct Instance {
    id: String,
    objective: Objective,
    space: SearchSpace,
    target_ids: Vec<String>,
    directions: Vec<Direction>,
    selected: Vec<usize>,
    evaluator: Evaluator,
}

fn real_inputs(space: &SearchSpace, config: &Configuration) -> (Vec<f64>, f64) {
    let budget = space.budget_index();
    let mut x = Vec::with_capacity(space.dim());
    let mut z = 1.0;
    for (i, v) in config.values().iter().enumerate() {
        let v = v.map_or(f64::NAN, Value::as_f64);
        if Some(i) == budget {
            z = v;
        } else {
            x.push(v);
        }
    }
    (x, z)
}

impl Instance {
    pub fn real(objective: Objective) -> Self {
        let target_ids = objective.target_ids();
        Self {
            id: objective.id(),
            space: objective.space(),
            directions: vec![Direction::Minimize; target_ids.len()],
            selected: (0..target_ids.len()).collect(),
            target_ids,
            objective,
            evaluator: Evaluator::Real,
        }
    }

    pub fn from_id(id: &str) -> Result<Self, InstanceError> {
        Objective::from_id(id).map(Self::real).ok_or_else(|| InstanceError::UnknownId(id.to_string()))
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn objective(&self) -> &Objective {
        &self.objective
    }

    pub fn space(&self) -> &SearchSpace {
        &self.space
    }

    pub fn mode(&self) -> Mode {
        match self.evaluator {
            Evaluator::Real => Mode::Real,
            Evaluator::Tabular(_) => Mode::Tabular,
            Evaluator::Surrogate(_) => Mode::Surrogate,
        }
    }

    /// Number of selected targets.
    pub fn targets(&self) -> usize {
        self.selected.len()
    }

    pub fn target_ids(&self) -> Vec<&str> {
        self.selected.iter().map(|&i| self.target_ids[i].as_str()).collect()
    }

    pub fn directions(&self) -> Vec<Direction> {
        self.selected.iter().map(|&i| self.directions[i]).collect()
    }

    /// Restricts evaluation output to the named targets, in the given order.
    pub fn select_targets(mut self, ids: &[&str]) -> Result<Self, InstanceError> {
        if ids.is_empty() {
            return Err(InstanceError::NoTargets);
        }
        self.selected = ids
            .iter()
            .map(|id| {
                self.target_ids.iter().position(|t| t == id).ok_or_else(|| InstanceError::UnknownTarget(id.to_string()))
            })
            .collect::<Result<_, _>>()?;
        Ok(self)
    }

    /// Selected objective values turned towards minimization.
    pub fn orient(&self, values: &[f64]) -> Vec<f64> {
        values.iter().zip(self.directions()).map(|(v, d)| d.orient(*v)).collect()
    }

    pub fn tabular(&self) -> Option<&TabularTable> {
        match &self.evaluator {
            Evaluator::Tabular(t) => Some(t),
            _ => None,
        }
    }

    pub fn surrogate(&self) -> Option<&SurrogateModel> {
        match &self.evaluator {
            Evaluator::Surrogate(s) => Some(s),
            _ => None,
        }
    }

    fn raw(&self, config: &Configuration) -> Result<(Vec<f64>, f64), InstanceError> {
        match &self.evaluator {
            Evaluator::Real => {
                let (x, z) = real_inputs(&self.space, config);
                Ok((self.objective.evaluate(&x, z)?, self.space.cost_of(config)))
            }
            Evaluator::Tabular(t) => {
                let index = t.grid.nearest_index(config);
                let cost = self.space.cost_of(&t.grid.config_at(index));
                Ok((t.row(index).to_vec(), cost))
            }
            Evaluator::Surrogate(s) => {
                let x = s.encoder.encode(&self.space, config)?;
                Ok((s.ensemble.predict(&x, s.predict), self.space.cost_of(config)))
            }
        }
    }

    pub fn evaluate(&self, config: &Configuration) -> Result<ObjectiveVector, InstanceError> {
        let violations = self.space.validate(config);
        if !violations.is_empty() {
            return Err(InstanceError::Invalid(violations));
        }
        let (all, cost) = self.raw(config)?;
        Ok(ObjectiveVector { values: self.selected.iter().map(|&i| all[i]).collect(), cost })
    }

    /// The fidelity actually served for a requested one: tabular instances
    /// round to the nearest recorded level in log space, the others clamp
    /// to the budget range.
    pub fn snap_fidelity(&self, z: f64) -> f64 {
        let Some(p) = self.space.budget_param() else { return z };
        let (lo, hi) = p.domain.bounds().expect("numeric budget");
        let z = z.clamp(lo, hi);
        match &self.evaluator {
            Evaluator::Tabular(t) => {
                let b = self.space.budget_index().expect("budget present");
                let mut best = (f64::INFINITY, z);
                for v in &t.grid.axes()[b] {
                    let level = v.as_f64();
                    let d = fabs(ln(level) - ln(z));
                    if d < best.0 {
                        best = (d, level);
                    }
                }
                best.1
            }
            _ => z,
        }
    }

    /// Unevaluated-candidate enumeration for exhaustive acquisition search:
    /// the full-fidelity rows of a tabular instance as `(row, config)`.
    pub fn candidates(&self) -> Option<Vec<(usize, Configuration)>> {
        let t = self.tabular()?;
        Some(
            (0..t.rows())
                .map(|i| (i, t.grid.config_at(i)))
                .filter(|(_, c)| self.space.is_full_fidelity(c))
                .collect(),
        )
    }

    /// The grid row a configuration is served from, for tabular instances.
    pub fn row_of(&self, config: &Configuration) -> Option<usize> {
        self.tabular().map(|t| t.grid.nearest_index(config))
    }

    fn require_real(&self) -> Result<(), InstanceError> {
        match self.mode() {
            Mode::Real => Ok(()),
            m => Err(InstanceError::NotReal(m)),
        }
    }

    /// Tabulates this real instance on the grid of `cap` non-budget points
    /// crossed with `levels` (default: the `2^x` fidelity ladder).
    pub fn tabulate(&self, cap: u64, levels: Option<&[f64]>) -> Result<Self, InstanceError> {
        self.require_real()?;
        let grid = GridSpec::new(&self.space, cap, levels)?;
        let m = self.target_ids.len();
        let mut values = Vec::with_capacity(grid.len() * m);
        for i in 0..grid.len() {
            let (x, z) = real_inputs(&self.space, &grid.config_at(i));
            values.extend(self.objective.evaluate(&x, z)?);
        }
        self.with_table(cap, levels, values)
    }

    /// Reattaches stored table values to this real instance.
    pub fn with_table(&self, cap: u64, levels: Option<&[f64]>, values: Vec<f64>) -> Result<Self, InstanceError> {
        self.require_real()?;
        let grid = GridSpec::new(&self.space, cap, levels)?;
        let m = self.target_ids.len();
        if values.len() != grid.len() * m {
            return Err(InstanceError::TableSize { expected: grid.len() * m, got: values.len() });
        }
        let levels = match levels {
            Some(l) => l.to_vec(),
            None => self
                .space
                .budget_param()
                .and_then(|p| p.domain.bounds())
                .map(|(lo, hi)| default_budget_ladder(lo, hi))
                .unwrap_or_default(),
        };
        let mut out = self.clone();
        out.evaluator = Evaluator::Tabular(TabularTable { grid, cap, levels, targets: m, values });
        Ok(out)
    }

    /// Fits an MLP-ensemble surrogate on uniformly sampled evaluations of
    /// this real instance, fidelity included, and reports held-out quality.
    pub fn fit_surrogate(&self, cfg: &SurrogateConfig, seed: u64) -> Result<(Self, QualityReport), InstanceError> {
        self.require_real()?;
        if cfg.n_train < 100 {
            return Err(InstanceError::TooFewSamples(cfg.n_train));
        }
        let mut rng = stream(child_seed(seed, 0));
        let encoder = Encoder::new(&self.space);
        let m = self.target_ids.len();
        let mut xs = Vec::with_capacity(cfg.n_train * encoder.width());
        let mut ys = Vec::with_capacity(cfg.n_train * m);
        for c in self.space.sample(&mut rng, cfg.n_train) {
            xs.extend(encoder.encode(&self.space, &c)?);
            ys.extend(self.raw(&c)?.0);
        }
        let x = Matrix::new(cfg.n_train, encoder.width(), xs);
        let y = Matrix::new(cfg.n_train, m, ys);
        let (train, test) = stratified_holdout(&y.column(0), cfg.test_fraction, &mut stream(child_seed(seed, 1)));
        let y_train = y.select_rows(&train);
        let mut mlp = cfg.mlp.clone();
        if mlp.transforms.is_empty() && cfg.auto_transform {
            mlp.transforms = (0..m).map(|j| Transform::least_skewed(&y_train.column(j))).collect();
        }
        let ensemble = fit_mlp_ensemble(&x.select_rows(&train), &y_train, &mlp, child_seed(seed, 2))?;

        let preds: Vec<Vec<f64>> = test.iter().map(|&i| ensemble.predict(x.row(i), PredictMode::Mean)).collect();
        let mut rho = Vec::with_capacity(m);
        let mut degenerate = Vec::with_capacity(m);
        for j in 0..m {
            let p: Vec<f64> = preds.iter().map(|r| r[j]).collect();
            let t: Vec<f64> = test.iter().map(|&i| y.row(i)[j]).collect();
            let r = spearman_rho(&p, &t).ok();
            degenerate.push(ensemble.scaler().is_degenerate(j) || r.is_none());
            rho.push(r);
        }
        let faithful = rho.iter().all(|r| r.is_some_and(|v| v > 0.7));
        let report = QualityReport { n_train: train.len(), n_test: test.len(), rho, degenerate, faithful };
        if !faithful {
            log::warn!("surrogate for {} below the rho > 0.7 cutoff: {:?}", self.id, report.rho);
        }
        Ok((self.with_surrogate(ensemble, PredictMode::Mean, report.clone())?, report))
    }

    /// Reattaches a fitted ensemble to this real instance.
    pub fn with_surrogate(
        &self,
        ensemble: MlpEnsemble,
        predict: PredictMode,
        report: QualityReport,
    ) -> Result<Self, InstanceError> {
        self.require_real()?;
        let mut out = self.clone();
        let encoder = Encoder::new(&self.space);
        out.evaluator = Evaluator::Surrogate(SurrogateModel { ensemble, encoder, predict, report });
        Ok(out)
    }

    /// A surrogate whose predictions mix members under Dirichlet weights
    /// drawn once from `seed`. Other modes are returned unchanged.
    pub fn noisy(&self, seed: u64) -> Self {
        let mut out = self.clone();
        if let Evaluator::Surrogate(s) = &mut out.evaluator {
            s.ensemble = s.ensemble.clone().with_dirichlet_weights(seed);
            s.predict = PredictMode::Weighted;
        }
        out
    }
}
