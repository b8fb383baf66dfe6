//! Multi-fidelity synthetic objectives. Each function takes a point in its
//! input box and a fidelity `z` in `[2^-9, 1]`; `z = 1` is the exact
//! single-fidelity function and every function is minimized.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use thiserror::Error;

use crate::math::{cos, exp, ln};
use crate::space::{ParamDef, SearchSpace};

/// Lowest fidelity of the synthetic functions.
pub const Z_MIN: f64 = 1.0 / 512.0;

/// Identifier of the fidelity parameter in synthetic spaces.
pub const FIDELITY_ID: &str = "z";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SyntheticFunction {
    Branin2,
    Currin2,
    Hartmann3,
    Hartmann6,
    Borehole8,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("expected {expected} inputs, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("input {index} = {value} lies outside [{lower}, {upper}]")]
    OutOfBox { index: usize, value: f64, lower: f64, upper: f64 },
    #[error("fidelity {0} outside [2^-9, 1]")]
    Fidelity(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct KnownOptimum {
    pub points: Vec<Vec<f64>>,
    pub value: f64,
}

const BRANIN_BOX: [(f64, f64); 2] = [(-5.0, 10.0), (0.0, 15.0)];
const UNIT2: [(f64, f64); 2] = [(0.0, 1.0); 2];
const UNIT3: [(f64, f64); 3] = [(0.0, 1.0); 3];
const UNIT6: [(f64, f64); 6] = [(0.0, 1.0); 6];
const BOREHOLE_BOX: [(f64, f64); 8] = [
    (0.05, 0.15),
    (100.0, 50000.0),
    (63070.0, 115600.0),
    (990.0, 1110.0),
    (63.1, 116.0),
    (700.0, 820.0),
    (1120.0, 1680.0),
    (9855.0, 12045.0),
];
const BOREHOLE_NAMES: [&str; 8] = ["rw", "r", "Tu", "Hu", "Tl", "Hl", "L", "Kw"];

const HARTMANN_ALPHA: [f64; 4] = [1.0, 1.2, 3.0, 3.2];
const HARTMANN_SHIFT: [f64; 4] = [0.01, -0.01, -0.1, 0.1];
const H3_A: [[f64; 3]; 4] = [[3.0, 10.0, 30.0], [0.1, 10.0, 35.0], [3.0, 10.0, 30.0], [0.1, 10.0, 35.0]];
const H3_P: [[f64; 3]; 4] = [
    [0.3689, 0.1170, 0.2673],
    [0.4699, 0.4387, 0.7470],
    [0.1091, 0.8732, 0.5547],
    [0.0381, 0.5743, 0.8828],
];
const H6_A: [[f64; 6]; 4] = [
    [10.0, 3.0, 17.0, 3.5, 1.7, 8.0],
    [0.05, 10.0, 17.0, 0.1, 8.0, 14.0],
    [3.0, 3.5, 1.7, 10.0, 17.0, 8.0],
    [17.0, 8.0, 0.05, 10.0, 0.1, 14.0],
];
const H6_P: [[f64; 6]; 4] = [
    [0.1312, 0.1696, 0.5569, 0.0124, 0.8283, 0.5886],
    [0.2329, 0.4135, 0.8307, 0.3736, 0.1004, 0.9991],
    [0.2348, 0.1451, 0.3522, 0.2883, 0.3047, 0.6650],
    [0.4047, 0.8828, 0.8732, 0.5743, 0.1091, 0.0381],
];

fn branin(x: &[f64], z: f64) -> f64 {
    let b = 5.1 / (4.0 * PI * PI) - 0.01 * (1.0 - z);
    let c = 5.0 / PI - 0.1 * (1.0 - z);
    let t = 1.0 / (8.0 * PI) + 0.005 * (1.0 - z);
    let q = x[1] - b * x[0] * x[0] + c * x[0] - 6.0;
    q * q + 10.0 * (1.0 - t) * cos(x[0]) + 10.0
}

fn currin_exact(x1: f64, x2: f64) -> f64 {
    let factor = 1.0 - exp(-1.0 / (2.0 * x2));
    let num = ((2300.0 * x1 + 1900.0) * x1 + 2092.0) * x1 + 60.0;
    let den = ((100.0 * x1 + 500.0) * x1 + 4.0) * x1 + 20.0;
    factor * num / den
}

fn currin(x: &[f64], z: f64) -> f64 {
    let high = currin_exact(x[0], x[1]);
    if z == 1.0 {
        return high;
    }
    let down = (x[1] - 0.05).max(0.0);
    let low = 0.25
        * (currin_exact(x[0] + 0.05, x[1] + 0.05)
            + currin_exact(x[0] + 0.05, down)
            + currin_exact(x[0] - 0.05, x[1] + 0.05)
            + currin_exact(x[0] - 0.05, down));
    z * high + (1.0 - z) * low
}

fn hartmann<const D: usize>(x: &[f64], z: f64, a: &[[f64; D]; 4], p: &[[f64; D]; 4]) -> f64 {
    let mut total = 0.0;
    for i in 0..4 {
        let alpha = HARTMANN_ALPHA[i] - (1.0 - z) * HARTMANN_SHIFT[i];
        let mut inner = 0.0;
        for j in 0..D {
            let d = x[j] - p[i][j];
            inner += a[i][j] * d * d;
        }
        total += alpha * exp(-inner);
    }
    -total
}

fn borehole_flow(x: &[f64], numerator: f64, offset: f64) -> f64 {
    let (rw, r, tu, hu, tl, hl, l, kw) = (x[0], x[1], x[2], x[3], x[4], x[5], x[6], x[7]);
    let lr = ln(r / rw);
    numerator * tu * (hu - hl) / (lr * (offset + 2.0 * l * tu / (lr * rw * rw * kw) + tu / tl))
}

fn borehole(x: &[f64], z: f64) -> f64 {
    let high = borehole_flow(x, 2.0 * PI, 1.0);
    if z == 1.0 {
        return -high;
    }
    let low = borehole_flow(x, 5.0, 1.5);
    -(z * high + (1.0 - z) * low)
}

impl SyntheticFunction {
    pub const ALL: [SyntheticFunction; 5] = [
        SyntheticFunction::Branin2,
        SyntheticFunction::Currin2,
        SyntheticFunction::Hartmann3,
        SyntheticFunction::Hartmann6,
        SyntheticFunction::Borehole8,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Branin2 => "branin2",
            Self::Currin2 => "currin2",
            Self::Hartmann3 => "hartmann3",
            Self::Hartmann6 => "hartmann6",
            Self::Borehole8 => "borehole8",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == name)
    }

    pub fn input_box(self) -> &'static [(f64, f64)] {
        match self {
            Self::Branin2 => &BRANIN_BOX,
            Self::Currin2 => &UNIT2,
            Self::Hartmann3 => &UNIT3,
            Self::Hartmann6 => &UNIT6,
            Self::Borehole8 => &BOREHOLE_BOX,
        }
    }

    pub fn dim(self) -> usize {
        self.input_box().len()
    }

    pub fn input_names(self) -> Vec<String> {
        match self {
            Self::Borehole8 => BOREHOLE_NAMES.iter().map(|s| String::from(*s)).collect(),
            f => (1..=f.dim()).map(|i| alloc::format!("x{i}")).collect(),
        }
    }

    /// The input box plus a log-scaled fidelity parameter on `[2^-9, 1]`.
    pub fn space(self) -> SearchSpace {
        let mut params: Vec<ParamDef> = self
            .input_names()
            .iter()
            .zip(self.input_box())
            .map(|(id, &(lo, hi))| ParamDef::continuous(id, lo, hi))
            .collect();
        params.push(ParamDef::continuous(FIDELITY_ID, Z_MIN, 1.0).log().budget());
        SearchSpace::new(self.name(), params).expect("synthetic spaces are well formed")
    }

    /// Evaluates without range checks; callers guarantee `x` and `z` are in range.
    pub fn eval_unchecked(self, x: &[f64], z: f64) -> f64 {
        match self {
            Self::Branin2 => branin(x, z),
            Self::Currin2 => currin(x, z),
            Self::Hartmann3 => hartmann(x, z, &H3_A, &H3_P),
            Self::Hartmann6 => hartmann(x, z, &H6_A, &H6_P),
            Self::Borehole8 => borehole(x, z),
        }
    }

    pub fn eval(self, x: &[f64], z: f64) -> Result<f64, EvalError> {
        let bx = self.input_box();
        if x.len() != bx.len() {
            return Err(EvalError::Dimension { expected: bx.len(), got: x.len() });
        }
        for (index, (&value, &(lower, upper))) in x.iter().zip(bx).enumerate() {
            if !(value >= lower && value <= upper) {
                return Err(EvalError::OutOfBox { index, value, lower, upper });
            }
        }
        if !(Z_MIN..=1.0).contains(&z) {
            return Err(EvalError::Fidelity(z));
        }
        Ok(self.eval_unchecked(x, z))
    }

    /// Global minimizers and minimum value at full fidelity.
    pub fn known_optimum(self) -> KnownOptimum {
        match self {
            Self::Branin2 => KnownOptimum {
                points: vec![vec![-PI, 12.275], vec![PI, 2.275], vec![3.0 * PI, 2.475]],
                value: 0.397_887_357_729_738_2,
            },
            Self::Currin2 => KnownOptimum { points: vec![vec![0.0, 1.0]], value: currin_exact(0.0, 1.0) },
            Self::Hartmann3 => KnownOptimum {
                points: vec![vec![0.114_614, 0.555_649, 0.852_547]],
                value: -3.862_782_147_820_755,
            },
            Self::Hartmann6 => KnownOptimum {
                points: vec![vec![0.201_69, 0.150_011, 0.476_874, 0.275_332, 0.311_652, 0.657_3]],
                value: -3.322_368_011_415_515,
            },
            Self::Borehole8 => {
                let x = vec![0.15, 100.0, 115600.0, 1110.0, 116.0, 700.0, 1120.0, 12045.0];
                let value = borehole(&x, 1.0);
                KnownOptimum { points: vec![x], value }
            }
        }
    }
}

impl fmt::Display for SyntheticFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use rand::Rng;

    #[test]
    fn branin_optima() {
        let f = SyntheticFunction::Branin2;
        let opt = f.known_optimum();
        assert_eq!(opt.points.len(), 3);
        for p in &opt.points {
            assert!((f.eval(p, 1.0).unwrap() - 0.397887).abs() < 1e-5);
        }
    }

    #[test]
    fn hartmann6_optimum() {
        let f = SyntheticFunction::Hartmann6;
        let opt = f.known_optimum();
        assert!((f.eval(&opt.points[0], 1.0).unwrap() + 3.32237).abs() < 1e-4);
    }

    #[test]
    fn stored_values_match_points() {
        for f in SyntheticFunction::ALL {
            let opt = f.known_optimum();
            for p in &opt.points {
                assert!((f.eval(p, 1.0).unwrap() - opt.value).abs() < 1e-5, "{f}");
            }
        }
    }

    #[test]
    fn perturbations_never_improve_optimum() {
        let mut rng = stream(3);
        for f in SyntheticFunction::ALL {
            let opt = f.known_optimum();
            let bx = f.input_box();
            for p in &opt.points {
                let base = f.eval(p, 1.0).unwrap();
                for _ in 0..500 {
                    let q: Vec<f64> = p
                        .iter()
                        .zip(bx)
                        .map(|(v, (lo, hi))| (v + rng.random_range(-1e-3..1e-3) * (hi - lo)).clamp(*lo, *hi))
                        .collect();
                    assert!(f.eval(&q, 1.0).unwrap() >= base - 1e-9, "{f} at {q:?}");
                }
            }
        }
    }

    #[test]
    fn fidelity_gap_shrinks_towards_one() {
        let mut rng = stream(5);
        for f in SyntheticFunction::ALL {
            let bx = f.input_box();
            for _ in 0..20 {
                let x: Vec<f64> = bx.iter().map(|(lo, hi)| rng.random_range(*lo..*hi)).collect();
                let exact = f.eval(&x, 1.0).unwrap();
                let mut last = f64::INFINITY;
                for z in [Z_MIN, 0.01, 0.1, 0.5, 0.9, 0.99, 1.0] {
                    let gap = (f.eval(&x, z).unwrap() - exact).abs();
                    assert!(gap.is_finite() && gap <= last + 1e-12, "{f} z={z}");
                    last = gap;
                }
                assert_eq!(last, 0.0);
            }
        }
    }

    #[test]
    fn rejects_out_of_range() {
        let f = SyntheticFunction::Branin2;
        assert!(matches!(f.eval(&[11.0, 0.0], 1.0), Err(EvalError::OutOfBox { index: 0, .. })));
        assert!(matches!(f.eval(&[0.0, 0.0], 0.0), Err(EvalError::Fidelity(_))));
        assert!(matches!(f.eval(&[0.0], 1.0), Err(EvalError::Dimension { .. })));
    }

    #[test]
    fn spaces_exclude_fidelity_from_dimension() {
        for f in SyntheticFunction::ALL {
            let s = f.space();
            assert_eq!(s.dim(), f.dim());
            assert!(s.budget_index().is_some());
        }
    }
}
