//! Feature map from configurations to real vectors.
//!
//! Numeric parameters are min-max scaled to `[0, 1]` (after `ln` when
//! log-scaled), categorical parameters are one-hot encoded, and every
//! conditional parameter gets one extra activity column. Inactive
//! parameters encode as zeros with activity 0.

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::space::{Configuration, Domain, SearchSpace, Value};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EncodeError {
    #[error("configuration has {got} slots, space has {expected} parameters")]
    Length { expected: usize, got: usize },
    #[error("active parameter `{0}` has no value")]
    Missing(alloc::string::String),
    #[error("inactive parameter `{0}` has a value")]
    Inactive(alloc::string::String),
    #[error("value of `{0}` does not fit its domain")]
    Invalid(alloc::string::String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Span {
    pub param: usize,
    pub offset: usize,
    pub width: usize,
    pub categorical: bool,
    pub activity: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Encoder {
    spans: Vec<Span>,
    width: usize,
    budget_excluded: bool,
}

impl Encoder {
    /// Encodes every parameter, including the budget parameter.
    pub fn new(space: &SearchSpace) -> Self {
        Self::build(space, false)
    }

    /// Encodes every parameter except the budget parameter.
    pub fn without_budget(space: &SearchSpace) -> Self {
        Self::build(space, true)
    }

    fn build(space: &SearchSpace, skip_budget: bool) -> Self {
        let mut spans = Vec::new();
        let mut offset = 0;
        for (i, p) in space.params().iter().enumerate() {
            if skip_budget && p.is_budget {
                continue;
            }
            let (width, categorical) = match &p.domain {
                Domain::Categorical { levels } => (levels.len(), true),
                _ => (1, false),
            };
            let activity = space.parent_of(i).map(|_| offset + width);
            spans.push(Span { param: i, offset, width, categorical, activity });
            offset += width + usize::from(activity.is_some());
        }
        Self { spans, width: offset, budget_excluded: skip_budget && space.budget_index().is_some() }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn spans(&self) -> &[Span] {
        &self.spans
    }

    pub fn encode(&self, space: &SearchSpace, config: &Configuration) -> Result<Vec<f64>, EncodeError> {
        let mut out = vec![0.0; self.width];
        self.encode_into(space, config, &mut out)?;
        Ok(out)
    }

    pub fn encode_into(
        &self,
        space: &SearchSpace,
        config: &Configuration,
        out: &mut [f64],
    ) -> Result<(), EncodeError> {
        if config.len() != space.len() {
            return Err(EncodeError::Length { expected: space.len(), got: config.len() });
        }
        out.iter_mut().for_each(|x| *x = 0.0);
        for span in &self.spans {
            let p = &space.params()[span.param];
            let active = space.is_active(span.param, config);
            match (active, config.get(span.param)) {
                (true, None) => return Err(EncodeError::Missing(p.id.clone())),
                (false, Some(_)) => return Err(EncodeError::Inactive(p.id.clone())),
                (false, None) => {}
                (true, Some(v)) => {
                    match (&p.domain, v) {
                        (Domain::Categorical { levels }, Value::Level(l)) if (l as usize) < levels.len() => {
                            out[span.offset + l as usize] = 1.0;
                        }
                        (Domain::Continuous { .. }, Value::Real(_)) | (Domain::Integer { .. }, Value::Int(_)) => {
                            let x = v.as_f64();
                            let (lo, hi) = p.domain.bounds().expect("numeric");
                            if !(x >= lo && x <= hi) {
                                return Err(EncodeError::Invalid(p.id.clone()));
                            }
                            out[span.offset] = p.domain.to_unit(x);
                        }
                        _ => return Err(EncodeError::Invalid(p.id.clone())),
                    }
                    if let Some(a) = span.activity {
                        out[a] = 1.0;
                    }
                }
            }
        }
        Ok(())
    }

    /// Maps a (possibly relaxed) feature vector back to the nearest valid
    /// configuration: numeric columns are clamped and rounded, categorical
    /// blocks take their arg-max, activity follows the decoded parents and
    /// an excluded budget parameter is set to full fidelity.
    pub fn decode(&self, space: &SearchSpace, x: &[f64]) -> Configuration {
        let mut config = Configuration::empty(space.len());
        let mut span_of = vec![None; space.len()];
        for (k, s) in self.spans.iter().enumerate() {
            span_of[s.param] = Some(k);
        }
        for (i, p) in space.params().iter().enumerate() {
            if !space.activated_by(i, &config) {
                continue;
            }
            let value = match span_of[i] {
                None => space.full_fidelity(),
                Some(k) => {
                    let s = &self.spans[k];
                    if s.categorical {
                        let block = &x[s.offset..s.offset + s.width];
                        let mut best = 0;
                        for (j, v) in block.iter().enumerate() {
                            if *v > block[best] {
                                best = j;
                            }
                        }
                        Some(Value::Level(best as u32))
                    } else {
                        Some(p.domain.from_unit(x[s.offset]))
                    }
                }
            };
            config.set(i, value);
        }
        config
    }

    pub fn budget_excluded(&self) -> bool {
        self.budget_excluded
    }
}

/// Encodes `config` with all parameters of `space`.
pub fn encode(space: &SearchSpace, config: &Configuration) -> Result<Vec<f64>, EncodeError> {
    Encoder::new(space).encode(space, config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use crate::space::ParamDef;

    #[test]
    fn scalar_encodings() {
        let s = SearchSpace::new("s", vec![ParamDef::continuous("x", 0.0, 1.0)]).unwrap();
        let c = s.configure().set("x", 0.25).build().0;
        assert_eq!(encode(&s, &c).unwrap(), vec![0.25]);

        let s = SearchSpace::new("s", vec![ParamDef::continuous("x", 0.001, 1000.0).log()]).unwrap();
        let c = s.configure().set("x", 1.0).build().0;
        assert!((encode(&s, &c).unwrap()[0] - 0.5).abs() < 1e-15);

        let s = SearchSpace::new("s", vec![ParamDef::categorical("k", &["a", "b", "c"])]).unwrap();
        let c = s.configure().set("k", "b").build().0;
        assert_eq!(encode(&s, &c).unwrap(), vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn conditional_parameters_get_activity_bits() {
        let s = SearchSpace::new(
            "s",
            vec![
                ParamDef::categorical("k", &["a", "b"]),
                ParamDef::continuous("x", 0.0, 2.0).when("k", ["a"]),
            ],
        )
        .unwrap();
        let e = Encoder::new(&s);
        assert_eq!(e.width(), 4);
        let on = s.configure().set("k", "a").set("x", 1.0).build().0;
        assert_eq!(e.encode(&s, &on).unwrap(), vec![1.0, 0.0, 0.5, 1.0]);
        let off = s.configure().set("k", "b").build().0;
        assert_eq!(e.encode(&s, &off).unwrap(), vec![0.0, 1.0, 0.0, 0.0]);
        let bad = s.configure().set("k", "b").set("x", 1.0).build().0;
        assert!(matches!(e.encode(&s, &bad), Err(EncodeError::Inactive(_))));
    }

    #[test]
    fn decode_inverts_encode_on_valid_configurations() {
        let s = SearchSpace::new(
            "s",
            vec![
                ParamDef::categorical("k", &["a", "b", "c"]),
                ParamDef::continuous("x", 0.01, 100.0).log().when("k", ["a", "c"]),
                ParamDef::integer("n", 1, 9).when("k", ["b"]),
                ParamDef::continuous("z", 0.1, 1.0).budget(),
            ],
        )
        .unwrap();
        let e = Encoder::new(&s);
        let mut rng = stream(4);
        for c in s.sample(&mut rng, 100) {
            let x = e.encode(&s, &c).unwrap();
            let d = e.decode(&s, &x);
            assert_eq!(s.validate(&d), vec![]);
            for (a, b) in s.labels(&c).iter().zip(s.labels(&d).iter()) {
                assert_eq!(a.0, b.0);
                match (&a.1, &b.1) {
                    (crate::space::Label::Number(u), crate::space::Label::Number(v)) => {
                        assert!((u - v).abs() <= 1e-9 * u.abs().max(1.0))
                    }
                    (u, v) => assert_eq!(u, v),
                }
            }
        }
        let nb = Encoder::without_budget(&s);
        assert_eq!(nb.width(), e.width() - 1);
        let d = nb.decode(&s, &vec![0.5; nb.width()]);
        assert!(s.is_full_fidelity(&d));
    }
}
