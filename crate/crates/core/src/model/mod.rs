//! Deterministic splitting, built-in binary classifiers, evaluation metrics,
//! permutation importance and model files.

mod design;
mod forest;
mod importance;
mod logistic;
mod metrics;
mod persist;
mod split;
mod tree;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use design::{FeatureSchema, TargetSpec};
pub use forest::{fit_forest, ForestModel, ForestParams};
pub use importance::{permutation_importance, FeatureImportance, ImportanceReport, Metric};
pub use logistic::{
    fit_logistic, fit_logistic_traced, loss_and_gradient, LogisticModel, LogisticParams,
};
pub use metrics::{classification_report, display_percent, roc_auc, ClassificationReport};
pub use persist::{load_model, save_model, ModelFile, SCHEMA_VERSION};
pub use split::{test_count, train_test_split};
pub use tree::{fit_tree, Node, TreeModel, TreeParams};

/// Dense row-major feature matrix without missing values.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Panics on ragged input.
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        }
    }

    pub fn from_columns(columns: &[Vec<f64>]) -> Result<Self> {
        let rows = columns.first().map_or(0, Vec::len);
        if let Some(bad) = columns.iter().find(|c| c.len() != rows) {
            return Err(Error::ShapeMismatch {
                expected: rows,
                found: bad.len(),
            });
        }
        let cols = columns.len();
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            data.extend(columns.iter().map(|c| c[r]));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn n_rows(&self) -> usize {
        self.rows
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn column(&self, c: usize) -> Vec<f64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn with_column(&self, c: usize, values: &[f64]) -> Matrix {
        let mut out = self.clone();
        for (r, &v) in values.iter().enumerate() {
            out.data[r * self.cols + c] = v;
        }
        out
    }

    pub fn take_rows(&self, rows: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            data.extend_from_slice(self.row(r));
        }
        Matrix {
            rows: rows.len(),
            cols: self.cols,
            data,
        }
    }

    pub(crate) fn check_finite(&self) -> Result<()> {
        for c in 0..self.cols {
            if (0..self.rows).any(|r| !self.get(r, c).is_finite()) {
                return Err(Error::NullInFeatures(format!("feature {c}")));
            }
        }
        Ok(())
    }
}

/// Binary classifier producing positive-class scores in `[0, 1]`.
pub trait Classifier {
    fn n_features(&self) -> usize;

    fn scores(&self, row: &[f64]) -> f64;

    fn predict_proba(&self, x: &Matrix) -> Result<Vec<f64>> {
        if x.n_cols() != self.n_features() {
            return Err(Error::ShapeMismatch {
                expected: self.n_features(),
                found: x.n_cols(),
            });
        }
        Ok((0..x.n_rows()).map(|r| self.scores(x.row(r))).collect())
    }

    /// Label 1 where the score is at least 0.5.
    fn predict(&self, x: &Matrix) -> Result<Vec<u8>> {
        Ok(self
            .predict_proba(x)?
            .into_iter()
            .map(|s| u8::from(s >= 0.5))
            .collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Model {
    Logistic(LogisticModel),
    Tree(TreeModel),
    Forest(ForestModel),
}

impl Model {
    pub fn kind(&self) -> &'static str {
        match self {
            Model::Logistic(_) => "logistic",
            Model::Tree(_) => "tree",
            Model::Forest(_) => "forest",
        }
    }

    fn inner(&self) -> &dyn Classifier {
        match self {
            Model::Logistic(m) => m,
            Model::Tree(m) => m,
            Model::Forest(m) => m,
        }
    }
}

impl Classifier for Model {
    fn n_features(&self) -> usize {
        self.inner().n_features()
    }

    fn scores(&self, row: &[f64]) -> f64 {
        self.inner().scores(row)
    }
}

pub(crate) fn check_labels(x: &Matrix, y: &[u8]) -> Result<()> {
    if x.n_rows() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.n_rows(),
            right: y.len(),
        });
    }
    if let Some(bad) = y.iter().find(|&&v| v > 1) {
        return Err(Error::NonBinaryLabel(bad.to_string()));
    }
    if y.is_empty() {
        return Err(Error::InvalidArgument("no training rows".into()));
    }
    x.check_finite()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_layout() {
        let m = Matrix::from_columns(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(m.row(1), &[2.0, 4.0]);
        assert_eq!(m.column(1), vec![3.0, 4.0]);
        assert_eq!(m, Matrix::from_rows(&[vec![1.0, 3.0], vec![2.0, 4.0]]));
        let swapped = m.with_column(0, &[9.0, 8.0]);
        assert_eq!(swapped.column(0), vec![9.0, 8.0]);
        assert_eq!(m.take_rows(&[1, 1]).row(0), &[2.0, 4.0]);
        assert!(Matrix::new(2, 2, vec![0.0; 3]).is_err());
    }
}
