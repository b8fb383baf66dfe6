//! Hierarchical mixed search spaces with an optional budget (fidelity)
//! parameter, and configurations drawn from them.

mod grid;

pub use grid::{default_budget_ladder, make_grid, round_to_grid, GridSpec};

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::math::{exp, floor, ln};

/// A parameter value as written in documents: a number or a label.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Number(f64),
    Text(String),
}

impl From<f64> for Label {
    fn from(x: f64) -> Self {
        Label::Number(x)
    }
}

impl From<&str> for Label {
    fn from(s: &str) -> Self {
        Label::Text(s.to_string())
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Number(x) => write!(f, "{x}"),
            Label::Text(s) => f.write_str(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Domain {
    Continuous { lower: f64, upper: f64, log: bool },
    Integer { lower: i64, upper: i64, log: bool },
    Categorical { levels: Vec<String> },
}

impl Domain {
    pub fn is_numeric(&self) -> bool {
        !matches!(self, Domain::Categorical { .. })
    }

    pub fn bounds(&self) -> Option<(f64, f64)> {
        match *self {
            Domain::Continuous { lower, upper, .. } => Some((lower, upper)),
            Domain::Integer { lower, upper, .. } => Some((lower as f64, upper as f64)),
            Domain::Categorical { .. } => None,
        }
    }

    pub fn is_log(&self) -> bool {
        match *self {
            Domain::Continuous { log, .. } | Domain::Integer { log, .. } => log,
            Domain::Categorical { .. } => false,
        }
    }

    /// Maps a numeric value to `[0, 1]`, through `ln` for log-scaled domains.
    pub fn to_unit(&self, x: f64) -> f64 {
        let (lo, hi) = self.bounds().expect("numeric domain");
        if self.is_log() {
            (ln(x) - ln(lo)) / (ln(hi) - ln(lo))
        } else {
            (x - lo) / (hi - lo)
        }
    }

    /// Inverse of [`Domain::to_unit`], clamped to the bounds and rounded for
    /// integer domains.
    pub fn from_unit(&self, u: f64) -> Value {
        let (lo, hi) = self.bounds().expect("numeric domain");
        let u = u.clamp(0.0, 1.0);
        let x = if self.is_log() {
            exp(ln(lo) + u * (ln(hi) - ln(lo)))
        } else {
            lo + u * (hi - lo)
        };
        let x = x.clamp(lo, hi);
        match self {
            Domain::Integer { .. } => Value::Int(crate::math::round(x) as i64),
            _ => Value::Real(x),
        }
    }

    fn resolve(&self, label: &Label) -> Option<Value> {
        match (self, label) {
            (Domain::Continuous { .. }, Label::Number(x)) => Some(Value::Real(*x)),
            (Domain::Integer { .. }, Label::Number(x)) if floor(*x) == *x => {
                Some(Value::Int(*x as i64))
            }
            (Domain::Categorical { levels }, Label::Text(s)) => {
                levels.iter().position(|l| l == s).map(|i| Value::Level(i as u32))
            }
            _ => None,
        }
    }

    fn label(&self, value: Value) -> Label {
        match (self, value) {
            (Domain::Categorical { levels }, Value::Level(i)) => Label::Text(levels[i as usize].clone()),
            (_, v) => Label::Number(v.as_f64()),
        }
    }

    fn contains(&self, value: Value) -> Result<(), ViolationKind> {
        match (self, value) {
            (Domain::Continuous { lower, upper, .. }, Value::Real(x)) => {
                if x.is_finite() && x >= *lower && x <= *upper {
                    Ok(())
                } else {
                    Err(ViolationKind::OutOfBounds)
                }
            }
            (Domain::Integer { lower, upper, .. }, Value::Int(x)) => {
                if x >= *lower && x <= *upper {
                    Ok(())
                } else {
                    Err(ViolationKind::OutOfBounds)
                }
            }
            (Domain::Categorical { levels }, Value::Level(i)) => {
                if (i as usize) < levels.len() {
                    Ok(())
                } else {
                    Err(ViolationKind::OutOfBounds)
                }
            }
            _ => Err(ViolationKind::WrongKind),
        }
    }
}

/// Activation condition of a child parameter.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub parent: String,
    pub values: Vec<Label>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamDef {
    pub id: String,
    pub domain: Domain,
    pub condition: Option<Condition>,
    pub is_budget: bool,
}

impl ParamDef {
    pub fn continuous(id: &str, lower: f64, upper: f64) -> Self {
        Self::with_domain(id, Domain::Continuous { lower, upper, log: false })
    }

    pub fn integer(id: &str, lower: i64, upper: i64) -> Self {
        Self::with_domain(id, Domain::Integer { lower, upper, log: false })
    }

    pub fn categorical(id: &str, levels: &[&str]) -> Self {
        Self::with_domain(
            id,
            Domain::Categorical { levels: levels.iter().map(|s| s.to_string()).collect() },
        )
    }

    pub fn with_domain(id: &str, domain: Domain) -> Self {
        Self { id: id.to_string(), domain, condition: None, is_budget: false }
    }

    pub fn log(mut self) -> Self {
        match &mut self.domain {
            Domain::Continuous { log, .. } | Domain::Integer { log, .. } => *log = true,
            Domain::Categorical { .. } => {}
        }
        self
    }

    pub fn budget(mut self) -> Self {
        self.is_budget = true;
        self
    }

    pub fn when<L: Into<Label>>(mut self, parent: &str, values: impl IntoIterator<Item = L>) -> Self {
        self.condition = Some(Condition {
            parent: parent.to_string(),
            values: values.into_iter().map(Into::into).collect(),
        });
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Value {
    Real(f64),
    Int(i64),
    /// Index into the levels of a categorical parameter.
    Level(u32),
}

impl Value {
    pub fn as_f64(self) -> f64 {
        match self {
            Value::Real(x) => x,
            Value::Int(i) => i as f64,
            Value::Level(l) => f64::from(l),
        }
    }
}

/// A point in a search space. Values are stored densely in parameter
/// order; inactive parameters hold `None`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Configuration {
    values: Vec<Option<Value>>,
}

impl Configuration {
    pub fn empty(len: usize) -> Self {
        Self { values: alloc::vec![None; len] }
    }

    pub fn from_values(values: Vec<Option<Value>>) -> Self {
        Self { values }
    }

    pub fn values(&self) -> &[Option<Value>] {
        &self.values
    }

    pub fn get(&self, index: usize) -> Option<Value> {
        self.values.get(index).copied().flatten()
    }

    pub fn set(&mut self, index: usize, value: Option<Value>) {
        self.values[index] = value;
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpaceError {
    #[error("search space has no non-budget parameters")]
    NoParameters,
    #[error("duplicate parameter id `{0}`")]
    DuplicateId(String),
    #[error("parameter `{param}` refers to unknown parent `{parent}`")]
    DanglingParent { param: String, parent: String },
    #[error("parameter `{param}` is declared before its parent `{parent}`")]
    ParentOrder { param: String, parent: String },
    #[error("parent `{parent}` of `{param}` must be categorical or an integer in [0, 1]")]
    ParentKind { param: String, parent: String },
    #[error("parameter `{0}` has an empty activation set")]
    EmptyCondition(String),
    #[error("value `{value}` is not a valid value of parent `{parent}`")]
    ConditionValue { parent: String, value: String },
    #[error("parameter `{0}` needs lower < upper")]
    InvalidBounds(String),
    #[error("log-scaled parameter `{0}` needs lower > 0")]
    LogNonPositive(String),
    #[error("categorical parameter `{0}` needs at least two distinct levels")]
    TooFewLevels(String),
    #[error("more than one budget parameter (`{0}`, `{1}`)")]
    MultipleBudgets(String, String),
    #[error("budget parameter `{0}` must be numeric and unconditional")]
    BudgetKind(String),
    #[error("grids are only defined for unconditional search spaces")]
    ConditionalGrid,
    #[error("grid cap {cap} is too small for {dim} dimensions")]
    CapTooSmall { cap: u64, dim: usize },
    #[error("budget level {0} lies outside the budget parameter bounds")]
    BudgetLevel(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    MissingActive,
    InactivePresent,
    OutOfBounds,
    WrongKind,
    UnknownId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub param: String,
    pub kind: ViolationKind,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchSpace {
    name: String,
    params: Vec<ParamDef>,
    #[serde(skip)]
    parents: Vec<Option<(usize, Vec<Value>)>>,
    #[serde(skip)]
    budget: Option<usize>,
}

impl SearchSpace {
    pub fn new(name: &str, params: Vec<ParamDef>) -> Result<Self, SpaceError> {
        let mut seen = BTreeSet::new();
        let mut parents = Vec::with_capacity(params.len());
        let mut budget: Option<usize> = None;
        for (i, p) in params.iter().enumerate() {
            if !seen.insert(p.id.as_str()) {
                return Err(SpaceError::DuplicateId(p.id.clone()));
            }
            match &p.domain {
                Domain::Continuous { lower, upper, log } => {
                    if !(lower < upper) || !lower.is_finite() || !upper.is_finite() {
                        return Err(SpaceError::InvalidBounds(p.id.clone()));
                    }
                    if *log && *lower <= 0.0 {
                        return Err(SpaceError::LogNonPositive(p.id.clone()));
                    }
                }
                Domain::Integer { lower, upper, log } => {
                    if lower >= upper {
                        return Err(SpaceError::InvalidBounds(p.id.clone()));
                    }
                    if *log && *lower <= 0 {
                        return Err(SpaceError::LogNonPositive(p.id.clone()));
                    }
                }
                Domain::Categorical { levels } => {
                    let distinct: BTreeSet<&String> = levels.iter().collect();
                    if levels.len() < 2 || distinct.len() != levels.len() {
                        return Err(SpaceError::TooFewLevels(p.id.clone()));
                    }
                }
            }
            if p.is_budget {
                if let Some(b) = budget {
                    return Err(SpaceError::MultipleBudgets(params[b].id.clone(), p.id.clone()));
                }
                if !p.domain.is_numeric() || p.condition.is_some() {
                    return Err(SpaceError::BudgetKind(p.id.clone()));
                }
                budget = Some(i);
            }
            parents.push(match &p.condition {
                None => None,
                Some(cond) => Some(Self::resolve_condition(&params, i, cond)?),
            });
        }
        if params.iter().all(|p| p.is_budget) {
            return Err(SpaceError::NoParameters);
        }
        Ok(Self { name: name.to_string(), params, parents, budget })
    }

    fn resolve_condition(
        params: &[ParamDef],
        index: usize,
        cond: &Condition,
    ) -> Result<(usize, Vec<Value>), SpaceError> {
        let me = &params[index];
        let parent = params.iter().position(|q| q.id == cond.parent).ok_or_else(|| {
            SpaceError::DanglingParent { param: me.id.clone(), parent: cond.parent.clone() }
        })?;
        if parent >= index {
            return Err(SpaceError::ParentOrder { param: me.id.clone(), parent: cond.parent.clone() });
        }
        let pdef = &params[parent];
        let boolean_like = matches!(pdef.domain, Domain::Integer { lower: 0, upper: 1, .. });
        if !(matches!(pdef.domain, Domain::Categorical { .. }) || boolean_like) || pdef.is_budget {
            return Err(SpaceError::ParentKind { param: me.id.clone(), parent: cond.parent.clone() });
        }
        if cond.values.is_empty() {
            return Err(SpaceError::EmptyCondition(me.id.clone()));
        }
        let values = cond
            .values
            .iter()
            .map(|l| {
                pdef.domain.resolve(l).ok_or_else(|| SpaceError::ConditionValue {
                    parent: pdef.id.clone(),
                    value: l.to_string(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok((parent, values))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn params(&self) -> &[ParamDef] {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    /// Number of non-budget parameters.
    pub fn dim(&self) -> usize {
        self.params.iter().filter(|p| !p.is_budget).count()
    }

    pub fn budget_index(&self) -> Option<usize> {
        self.budget
    }

    pub fn budget_param(&self) -> Option<&ParamDef> {
        self.budget.map(|b| &self.params[b])
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.params.iter().position(|p| p.id == id)
    }

    pub fn parent_of(&self, index: usize) -> Option<usize> {
        self.parents[index].as_ref().map(|(p, _)| *p)
    }

    pub fn is_conditional(&self) -> bool {
        self.parents.iter().any(Option::is_some)
    }

    pub fn conditional_count(&self) -> usize {
        self.parents.iter().filter(|p| p.is_some()).count()
    }

    /// Whether parameter `index` is active given the values in `config`.
    pub fn is_active(&self, index: usize, config: &Configuration) -> bool {
        match &self.parents[index] {
            None => true,
            Some((parent, values)) => {
                self.is_active(*parent, config)
                    && config.get(*parent).is_some_and(|v| values.contains(&v))
            }
        }
    }

    /// Whether the parent's value (if any) activates parameter `index`.
    pub(crate) fn activated_by(&self, index: usize, config: &Configuration) -> bool {
        match &self.parents[index] {
            None => true,
            Some((parent, values)) => config.get(*parent).is_some_and(|v| values.contains(&v)),
        }
    }

    /// Value of the budget parameter at full fidelity.
    pub fn full_fidelity(&self) -> Option<Value> {
        self.budget_param().map(|p| match p.domain {
            Domain::Continuous { upper, .. } => Value::Real(upper),
            Domain::Integer { upper, .. } => Value::Int(upper),
            Domain::Categorical { .. } => unreachable!("budget parameters are numeric"),
        })
    }

    /// Fraction of a full-fidelity evaluation that `config` costs.
    pub fn cost_of(&self, config: &Configuration) -> f64 {
        match (self.budget, self.budget_param().and_then(|p| p.domain.bounds())) {
            (Some(b), Some((_, upper))) => config.get(b).map_or(1.0, |v| v.as_f64() / upper),
            _ => 1.0,
        }
    }

    pub fn is_full_fidelity(&self, config: &Configuration) -> bool {
        match self.budget {
            Some(b) => config.get(b) == self.full_fidelity(),
            None => true,
        }
    }

    /// Returns a copy of `config` with the budget parameter set to `value`.
    pub fn with_fidelity(&self, config: &Configuration, value: f64) -> Configuration {
        let mut c = config.clone();
        if let Some(b) = self.budget {
            let v = match self.params[b].domain {
                Domain::Integer { .. } => Value::Int(crate::math::round(value) as i64),
                _ => Value::Real(value),
            };
            c.set(b, Some(v));
        }
        c
    }

    /// Draws one value of `domain` uniformly (log-uniformly where flagged).
    pub fn sample_value<R: Rng + ?Sized>(domain: &Domain, rng: &mut R) -> Value {
        match domain {
            Domain::Continuous { lower, upper, log } => {
                let u: f64 = rng.random();
                let x = if *log {
                    exp(ln(*lower) + u * (ln(*upper) - ln(*lower)))
                } else {
                    lower + u * (upper - lower)
                };
                Value::Real(x.clamp(*lower, *upper))
            }
            Domain::Integer { lower, upper, log } => {
                if *log {
                    let u: f64 = rng.random();
                    let lo = ln(*lower as f64);
                    let hi = ln(*upper as f64 + 1.0);
                    let x = floor(exp(lo + u * (hi - lo))) as i64;
                    Value::Int(x.clamp(*lower, *upper))
                } else {
                    Value::Int(rng.random_range(*lower..=*upper))
                }
            }
            Domain::Categorical { levels } => Value::Level(rng.random_range(0..levels.len()) as u32),
        }
    }

    /// Draws one configuration uniformly at random. Children are sampled
    /// only when their parent activates them.
    pub fn sample_one<R: Rng + ?Sized>(&self, rng: &mut R) -> Configuration {
        let mut config = Configuration::empty(self.params.len());
        for (i, p) in self.params.iter().enumerate() {
            if self.activated_by(i, &config) {
                config.set(i, Some(Self::sample_value(&p.domain, rng)));
            }
        }
        config
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Vec<Configuration> {
        (0..n).map(|_| self.sample_one(rng)).collect()
    }

    /// Draws a configuration and pins the budget parameter to full fidelity.
    pub fn sample_full_fidelity<R: Rng + ?Sized>(&self, rng: &mut R) -> Configuration {
        let mut c = self.sample_one(rng);
        if let Some(b) = self.budget {
            c.set(b, self.full_fidelity());
        }
        c
    }

    /// Lists every violation of `config`; empty iff the configuration is valid.
    pub fn validate(&self, config: &Configuration) -> Vec<Violation> {
        let mut out = Vec::new();
        if config.len() != self.params.len() {
            out.push(Violation { param: String::from("<length>"), kind: ViolationKind::WrongKind });
            return out;
        }
        for (i, p) in self.params.iter().enumerate() {
            let active = self.is_active(i, config);
            match (active, config.get(i)) {
                (true, None) => out.push(Violation { param: p.id.clone(), kind: ViolationKind::MissingActive }),
                (false, Some(_)) => {
                    out.push(Violation { param: p.id.clone(), kind: ViolationKind::InactivePresent })
                }
                (true, Some(v)) => {
                    if let Err(kind) = p.domain.contains(v) {
                        out.push(Violation { param: p.id.clone(), kind });
                    }
                }
                (false, None) => {}
            }
        }
        out
    }

    /// Builds a configuration from named values, reporting unknown ids and
    /// values that do not fit their parameter's kind alongside the usual
    /// validation.
    pub fn config_from_labels<'a>(
        &self,
        pairs: impl IntoIterator<Item = (&'a str, Label)>,
    ) -> (Configuration, Vec<Violation>) {
        let mut config = Configuration::empty(self.params.len());
        let mut violations = Vec::new();
        for (id, label) in pairs {
            match self.index_of(id) {
                None => violations.push(Violation { param: id.to_string(), kind: ViolationKind::UnknownId }),
                Some(i) => {
                    let value = self.params[i].domain.resolve(&label).or_else(|| match label {
                        // keep out-of-range numbers so validation can report bounds
                        Label::Number(x) if self.params[i].domain.is_numeric() => Some(Value::Real(x)),
                        _ => None,
                    });
                    match value {
                        Some(v) => config.set(i, Some(v)),
                        None => violations.push(Violation { param: id.to_string(), kind: ViolationKind::WrongKind }),
                    }
                }
            }
        }
        violations.extend(self.validate(&config));
        (config, violations)
    }

    /// Named values of the active parameters.
    pub fn labels(&self, config: &Configuration) -> Vec<(String, Label)> {
        self.params
            .iter()
            .enumerate()
            .filter_map(|(i, p)| config.get(i).map(|v| (p.id.clone(), p.domain.label(v))))
            .collect()
    }

    /// Human-readable `id=value` list.
    pub fn describe(&self, config: &Configuration) -> String {
        let mut s = String::new();
        for (k, (id, l)) in self.labels(config).into_iter().enumerate() {
            if k > 0 {
                s.push(' ');
            }
            s.push_str(&alloc::format!("{id}={l}"));
        }
        s
    }

    /// Restricts the space to its budget-free part, for example to list
    /// the parameters an optimizer actually searches over.
    pub fn non_budget_indices(&self) -> Vec<usize> {
        (0..self.params.len()).filter(|&i| Some(i) != self.budget).collect()
    }
}

/// Convenience for building configurations in code and tests.
pub struct ConfigBuilder<'a> {
    space: &'a SearchSpace,
    pairs: Vec<(&'a str, Label)>,
}

impl<'a> ConfigBuilder<'a> {
    pub fn set(mut self, id: &'a str, value: impl Into<Label>) -> Self {
        self.pairs.push((id, value.into()));
        self
    }

    /// Returns the configuration together with any violations.
    pub fn build(self) -> (Configuration, Vec<Violation>) {
        self.space.config_from_labels(self.pairs)
    }
}

impl SearchSpace {
    pub fn configure(&self) -> ConfigBuilder<'_> {
        ConfigBuilder { space: self, pairs: Vec::new() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use alloc::vec;

    pub(crate) fn rbv2_svm() -> SearchSpace {
        SearchSpace::new(
            "rbv2_svm",
            vec![
                ParamDef::categorical("kernel", &["linear", "polynomial", "radial"]),
                ParamDef::continuous("cost", 4.5e-05, 2.2e4).log(),
                ParamDef::continuous("gamma", 4.5e-05, 2.2e4).log().when("kernel", ["radial"]),
                ParamDef::continuous("tolerance", 4.5e-05, 2.0).log(),
                ParamDef::integer("degree", 2, 5).when("kernel", ["polynomial"]),
                ParamDef::continuous("trainsize", 0.03, 1.0).budget(),
                ParamDef::categorical("imputation", &["impute.mean", "impute.median", "impute.hist"]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn svm_space_dimensions() {
        let s = rbv2_svm();
        assert_eq!(s.dim(), 6);
        assert_eq!(s.conditional_count(), 2);
        assert_eq!(s.budget_index(), Some(5));
    }

    #[test]
    fn one_parameter_space() {
        let s = SearchSpace::new("x", vec![ParamDef::continuous("x", 0.0, 1.0)]).unwrap();
        assert_eq!(s.dim(), 1);
    }

    #[test]
    fn semantic_errors() {
        let dangling = SearchSpace::new(
            "s",
            vec![ParamDef::categorical("k", &["a", "b"]), ParamDef::integer("d", 2, 5).when("kernel", ["a"])],
        );
        assert!(matches!(dangling, Err(SpaceError::DanglingParent { .. })));
        let dup = SearchSpace::new("s", vec![ParamDef::continuous("x", 0.0, 1.0), ParamDef::continuous("x", 0.0, 1.0)]);
        assert_eq!(dup, Err(SpaceError::DuplicateId("x".into())));
        let bounds = SearchSpace::new("s", vec![ParamDef::continuous("x", 1.0, 1.0)]);
        assert_eq!(bounds, Err(SpaceError::InvalidBounds("x".into())));
        let log = SearchSpace::new("s", vec![ParamDef::continuous("x", 0.0, 1.0).log()]);
        assert_eq!(log, Err(SpaceError::LogNonPositive("x".into())));
        let two_budgets = SearchSpace::new(
            "s",
            vec![
                ParamDef::continuous("x", 0.0, 1.0),
                ParamDef::continuous("a", 0.1, 1.0).budget(),
                ParamDef::integer("b", 1, 10).budget(),
            ],
        );
        assert!(matches!(two_budgets, Err(SpaceError::MultipleBudgets(..))));
        let levels = SearchSpace::new("s", vec![ParamDef::categorical("k", &["a", "a"])]);
        assert_eq!(levels, Err(SpaceError::TooFewLevels("k".into())));
        let order = SearchSpace::new(
            "s",
            vec![ParamDef::integer("d", 2, 5).when("k", ["a"]), ParamDef::categorical("k", &["a", "b"])],
        );
        assert!(matches!(order, Err(SpaceError::ParentOrder { .. })));
        let kind = SearchSpace::new(
            "s",
            vec![ParamDef::continuous("x", 0.0, 1.0), ParamDef::integer("d", 2, 5).when("x", [0.5])],
        );
        assert!(matches!(kind, Err(SpaceError::ParentKind { .. })));
        let only_budget = SearchSpace::new("s", vec![ParamDef::continuous("z", 0.1, 1.0).budget()]);
        assert_eq!(only_budget, Err(SpaceError::NoParameters));
    }

    #[test]
    fn boolean_like_parent() {
        let s = SearchSpace::new(
            "s",
            vec![ParamDef::integer("flag", 0, 1), ParamDef::continuous("x", 0.0, 1.0).when("flag", [1.0])],
        )
        .unwrap();
        let mut rng = stream(3);
        for c in s.sample(&mut rng, 200) {
            assert!(s.validate(&c).is_empty());
            assert_eq!(c.get(1).is_some(), c.get(0) == Some(Value::Int(1)));
        }
    }

    #[test]
    fn categorical_frequencies() {
        let s = SearchSpace::new("s", vec![ParamDef::categorical("k", &["a", "b"])]).unwrap();
        let mut rng = stream(11);
        let n = 1000;
        let a = s.sample(&mut rng, n).iter().filter(|c| c.get(0) == Some(Value::Level(0))).count();
        let freq = a as f64 / n as f64;
        assert!((0.44..=0.56).contains(&freq), "{freq}");
    }

    #[test]
    fn sampling_is_deterministic() {
        let s = SearchSpace::new("s", vec![ParamDef::continuous("x", 0.0, 1.0)]).unwrap();
        let a = s.sample(&mut stream(5), 1);
        let b = s.sample(&mut stream(5), 1);
        assert_eq!(a, b);
        let x = a[0].get(0).unwrap().as_f64();
        assert!((0.0..=1.0).contains(&x));
    }

    #[test]
    fn linear_kernel_has_no_children() {
        let s = rbv2_svm();
        let mut rng = stream(1);
        let mut seen = 0;
        for c in s.sample(&mut rng, 500) {
            if c.get(0) == Some(Value::Level(0)) {
                seen += 1;
                assert!(c.get(2).is_none() && c.get(4).is_none());
            }
        }
        assert!(seen > 100);
    }

    #[test]
    fn validation_reports_bounds_and_inactive() {
        let s = rbv2_svm();
        let (_, v) = s
            .configure()
            .set("kernel", "linear")
            .set("cost", -1.0)
            .set("tolerance", 0.1)
            .set("trainsize", 1.0)
            .set("imputation", "impute.mean")
            .build();
        assert_eq!(v, vec![Violation { param: "cost".into(), kind: ViolationKind::OutOfBounds }]);

        let (_, v) = s
            .configure()
            .set("kernel", "radial")
            .set("cost", 1.0)
            .set("gamma", 1.0)
            .set("tolerance", 0.1)
            .set("degree", 3.0)
            .set("trainsize", 1.0)
            .set("imputation", "impute.mean")
            .build();
        assert_eq!(v, vec![Violation { param: "degree".into(), kind: ViolationKind::InactivePresent }]);

        let (_, v) = s.configure().set("kernel", "radial").set("bogus", 1.0).build();
        assert!(v.iter().any(|x| x.kind == ViolationKind::UnknownId && x.param == "bogus"));
        assert!(v.iter().any(|x| x.kind == ViolationKind::MissingActive && x.param == "gamma"));
    }

    #[test]
    fn cost_is_fraction_of_upper_bound() {
        let s = SearchSpace::new(
            "s",
            vec![ParamDef::continuous("x", 0.0, 1.0), ParamDef::integer("epoch", 1, 50).budget()],
        )
        .unwrap();
        let (c, v) = s.configure().set("x", 0.5).set("epoch", 25.0).build();
        assert!(v.is_empty());
        assert_eq!(s.cost_of(&c), 0.5);
        assert!(!s.is_full_fidelity(&c));
        assert!(s.is_full_fidelity(&s.with_fidelity(&c, 50.0)));
    }

    proptest::proptest! {
        #[test]
        fn sampled_configurations_validate(seed in 0u64..10_000) {
            let s = rbv2_svm();
            let mut rng = stream(seed);
            for c in s.sample(&mut rng, 20) {
                proptest::prop_assert!(s.validate(&c).is_empty());
            }
        }
    }
}
