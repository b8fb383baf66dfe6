//! The JSON search-space document format.

use hpobench_core::space::{Condition, Domain, Label, ParamDef, SearchSpace, SpaceError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpaceDocError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("parameter `{id}`: {message}")]
    Param { id: String, message: String },
    #[error(transparent)]
    Semantic(#[from] SpaceError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Continuous,
    Integer,
    Categorical,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamDoc {
    pub id: String,
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper: Option<f64>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub log: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<Vec<String>>,
    #[serde(default)]
    pub parent: Option<String>,
    #[serde(default)]
    pub parent_values: Option<Vec<Label>>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub budget: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDoc {
    pub name: String,
    pub params: Vec<ParamDoc>,
}

fn param_error(id: &str, message: &str) -> SpaceDocError {
    SpaceDocError::Param { id: id.to_string(), message: message.to_string() }
}

fn integer_bound(id: &str, x: f64) -> Result<i64, SpaceDocError> {
    if x.fract() != 0.0 || x.abs() > 2f64.powi(53) {
        return Err(param_error(id, "integer bounds must be whole numbers"));
    }
    Ok(x as i64)
}

impl ParamDoc {
    fn into_def(self) -> Result<ParamDef, SpaceDocError> {
        let id = self.id.as_str();
        let domain = match self.kind {
            Kind::Categorical => {
                if self.lower.is_some() || self.upper.is_some() || self.log {
                    return Err(param_error(id, "categorical parameters take no bounds or log flag"));
                }
                let levels = self.levels.clone().ok_or_else(|| param_error(id, "missing `levels`"))?;
                Domain::Categorical { levels }
            }
            kind => {
                if self.levels.is_some() {
                    return Err(param_error(id, "numeric parameters take no levels"));
                }
                let lower = self.lower.ok_or_else(|| param_error(id, "missing `lower`"))?;
                let upper = self.upper.ok_or_else(|| param_error(id, "missing `upper`"))?;
                if kind == Kind::Integer {
                    Domain::Integer { lower: integer_bound(id, lower)?, upper: integer_bound(id, upper)?, log: self.log }
                } else {
                    Domain::Continuous { lower, upper, log: self.log }
                }
            }
        };
        let condition = match (self.parent, self.parent_values) {
            (None, None) => None,
            (Some(parent), Some(values)) => Some(Condition { parent, values }),
            (Some(_), None) => return Err(param_error(id, "`parent` needs `parent_values`")),
            (None, Some(_)) => return Err(param_error(id, "`parent_values` needs `parent`")),
        };
        Ok(ParamDef { id: self.id, domain, condition, is_budget: self.budget })
    }

    fn from_def(p: &ParamDef) -> Self {
        let (kind, lower, upper, log, levels) = match &p.domain {
            Domain::Continuous { lower, upper, log } => (Kind::Continuous, Some(*lower), Some(*upper), *log, None),
            Domain::Integer { lower, upper, log } => {
                (Kind::Integer, Some(*lower as f64), Some(*upper as f64), *log, None)
            }
            Domain::Categorical { levels } => (Kind::Categorical, None, None, false, Some(levels.clone())),
        };
        Self {
            id: p.id.clone(),
            kind,
            lower,
            upper,
            log,
            levels,
            parent: p.condition.as_ref().map(|c| c.parent.clone()),
            parent_values: p.condition.as_ref().map(|c| c.values.clone()),
            budget: p.is_budget,
        }
    }
}

impl SpaceDoc {
    pub fn into_space(self) -> Result<SearchSpace, SpaceDocError> {
        let params = self.params.into_iter().map(ParamDoc::into_def).collect::<Result<_, _>>()?;
        Ok(SearchSpace::new(&self.name, params)?)
    }

    pub fn from_space(space: &SearchSpace) -> Self {
        Self { name: space.name().to_string(), params: space.params().iter().map(ParamDoc::from_def).collect() }
    }
}

/// Parses and validates a space document.
pub fn parse_space(text: &str) -> Result<SearchSpace, SpaceDocError> {
    let doc: SpaceDoc = serde_json::from_str(text).map_err(|e| SpaceDocError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    doc.into_space()
}

pub fn serialize_space(space: &SearchSpace) -> String {
    serde_json::to_string_pretty(&SpaceDoc::from_space(space)).expect("space documents always serialize")
}
