use serde::{Deserialize, Serialize};

use super::{check_labels, Classifier, Matrix};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogisticParams {
    pub learning_rate: f64,
    pub max_iter: usize,
    pub tol: f64,
    pub l2: f64,
}

impl Default for LogisticParams {
    fn default() -> Self {
        Self {
            learning_rate: 0.1,
            max_iter: 1000,
            tol: 1e-6,
            l2: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogisticModel {
    pub hyperparameters: LogisticParams,
    pub weights: Vec<f64>,
    pub bias: f64,
    pub feature_means: Vec<f64>,
    pub feature_stds: Vec<f64>,
}

fn sigmoid(s: f64) -> f64 {
    if s >= 0.0 {
        1.0 / (1.0 + (-s).exp())
    } else {
        let e = s.exp();
        e / (1.0 + e)
    }
}

/// log(1 + e^s) without overflow.
fn softplus(s: f64) -> f64 {
    s.max(0.0) + (-s.abs()).exp().ln_1p()
}

fn dot(w: &[f64], z: &[f64]) -> f64 {
    w.iter().zip(z).map(|(a, b)| a * b).sum()
}

/// Mean binary cross-entropy plus `(l2 / 2)·‖w‖²` on already standardized
/// features, returning `(loss, dL/dw, dL/db)`.
pub fn loss_and_gradient(
    weights: &[f64],
    bias: f64,
    z: &Matrix,
    y: &[u8],
    l2: f64,
) -> (f64, Vec<f64>, f64) {
    let n = z.n_rows() as f64;
    let mut loss = 0.0;
    let mut gw = vec![0.0; weights.len()];
    let mut gb = 0.0;
    for (r, &label) in y.iter().enumerate() {
        let row = z.row(r);
        let s = dot(weights, row) + bias;
        let t = f64::from(label);
        loss += softplus(s) - t * s;
        let residual = sigmoid(s) - t;
        gb += residual;
        for (g, x) in gw.iter_mut().zip(row) {
            *g += residual * x;
        }
    }
    let penalty: f64 = weights.iter().map(|w| w * w).sum();
    for (g, w) in gw.iter_mut().zip(weights) {
        *g = *g / n + l2 * w;
    }
    (loss / n + 0.5 * l2 * penalty, gw, gb / n)
}

fn objective(weights: &[f64], bias: f64, z: &Matrix, y: &[u8], l2: f64) -> f64 {
    loss_and_gradient(weights, bias, z, y, l2).0
}

pub fn fit_logistic(x: &Matrix, y: &[u8], params: &LogisticParams) -> Result<LogisticModel> {
    fit_logistic_traced(x, y, params).map(|(m, _)| m)
}

/// As [`fit_logistic`], also returning the loss after every accepted step
/// (the first entry is the loss at the zero initialization).
pub fn fit_logistic_traced(
    x: &Matrix,
    y: &[u8],
    params: &LogisticParams,
) -> Result<(LogisticModel, Vec<f64>)> {
    check_labels(x, y)?;
    if x.n_rows() < 2 || y.iter().all(|&v| v == y[0]) {
        return Err(Error::SingleClass);
    }
    let p = x.n_cols();
    let n = x.n_rows() as f64;
    let mut means = Vec::with_capacity(p);
    let mut stds = Vec::with_capacity(p);
    let mut constant = Vec::with_capacity(p);
    for c in 0..p {
        let col = x.column(c);
        let mean = crate::stats::kahan_sum(col.iter().copied()) / n;
        let var = crate::stats::kahan_sum(col.iter().map(|v| (v - mean) * (v - mean))) / n;
        let is_constant = col.iter().all(|&v| v == col[0]);
        means.push(mean);
        stds.push(if is_constant || var.sqrt() == 0.0 {
            1.0
        } else {
            var.sqrt()
        });
        constant.push(is_constant);
    }
    let mut z = Vec::with_capacity(x.n_rows() * p);
    for r in 0..x.n_rows() {
        for (c, v) in x.row(r).iter().enumerate() {
            // Constant features contribute exactly zero, so their weight
            // never leaves its zero initialization.
            z.push(if constant[c] {
                0.0
            } else {
                (v - means[c]) / stds[c]
            });
        }
    }
    let z = Matrix::new(x.n_rows(), p, z)?;

    let mut w = vec![0.0; p];
    let mut b = 0.0;
    let mut lr = params.learning_rate;
    let (mut loss, mut gw, mut gb) = loss_and_gradient(&w, b, &z, y, params.l2);
    let mut history = vec![loss];
    for _ in 0..params.max_iter {
        // Backtracking: halve the step until the loss does not rise.
        let accepted = loop {
            let w_new: Vec<f64> = w.iter().zip(&gw).map(|(wi, gi)| wi - lr * gi).collect();
            let b_new = b - lr * gb;
            let loss_new = objective(&w_new, b_new, &z, y, params.l2);
            if loss_new <= loss {
                break Some((w_new, b_new, loss_new));
            }
            lr *= 0.5;
            if lr < 1e-12 {
                break None;
            }
        };
        let Some((w_new, b_new, loss_new)) = accepted else {
            break;
        };
        let delta = loss - loss_new;
        w = w_new;
        b = b_new;
        history.push(loss_new);
        (loss, gw, gb) = loss_and_gradient(&w, b, &z, y, params.l2);
        if delta.abs() < params.tol {
            break;
        }
    }
    let model = LogisticModel {
        hyperparameters: *params,
        weights: w,
        bias: b,
        feature_means: means,
        feature_stds: stds,
    };
    Ok((model, history))
}

impl Classifier for LogisticModel {
    fn n_features(&self) -> usize {
        self.weights.len()
    }

    fn scores(&self, row: &[f64]) -> f64 {
        let s: f64 = row
            .iter()
            .enumerate()
            .map(|(c, v)| self.weights[c] * (v - self.feature_means[c]) / self.feature_stds[c])
            .sum();
        sigmoid(s + self.bias)
    }
}
