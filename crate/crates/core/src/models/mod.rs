//! Regression models shared by Bayesian optimization (algorithm
//! surrogates) and surrogate benchmark instances (instance surrogates).

pub mod encoding;
pub mod gp;
pub mod mlp;
pub mod rf;
pub mod scaler;
pub mod spearman;

pub use encoding::{encode, EncodeError, Encoder};
pub use gp::{fit_gp, GpConfig, GpError, GpModel};
pub use mlp::{fit_mlp_ensemble, Mlp, MlpConfig, MlpEnsemble, MlpError, PredictMode};
pub use rf::{fit_rf, RfConfig, RfModel};
pub use scaler::{TargetScaler, Transform};
pub use spearman::{spearman_rho, SpearmanError};

use alloc::vec::Vec;

/// Row-major design matrix with `n` rows of `p` features.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(rows * cols, data.len(), "matrix shape");
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend_from_slice(r);
        }
        Self { rows: rows.len(), cols, data }
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.data[i * self.cols + j]).collect()
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        Self { rows: idx.len(), cols: self.cols, data }
    }
}
