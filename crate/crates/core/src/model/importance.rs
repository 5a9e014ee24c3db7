use serde::{Deserialize, Serialize};

use super::{classification_report, roc_auc, Classifier, Matrix};
use crate::error::{Error, Result};
use crate::rng::{shuffle, SplitMix64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    F1,
    Accuracy,
    Auc,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::F1 => "f1",
            Metric::Accuracy => "accuracy",
            Metric::Auc => "auc",
        }
    }

    pub fn score(self, model: &dyn Classifier, x: &Matrix, y: &[u8]) -> Result<f64> {
        let scores = model.predict_proba(x)?;
        if self == Metric::Auc {
            return roc_auc(y, &scores);
        }
        let pred: Vec<u8> = scores.iter().map(|&s| u8::from(s >= 0.5)).collect();
        let report = classification_report(y, &pred, None)?;
        Ok(match self {
            Metric::F1 => report.f1,
            _ => report.accuracy,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureImportance {
    pub name: String,
    pub importance: f64,
    pub std: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImportanceReport {
    pub metric: Metric,
    pub baseline: f64,
    pub repeats: usize,
    pub seed: u64,
    /// Descending by importance; ties keep feature order.
    pub features: Vec<FeatureImportance>,
}

impl ImportanceReport {
    pub fn to_text(&self) -> String {
        let w = self
            .features
            .iter()
            .map(|f| f.name.len())
            .max()
            .unwrap_or(0)
            .max(7);
        let mut out = format!(
            "Permutation importance ({}, baseline {:.4}, {} repeats)\n",
            self.metric.name(),
            self.baseline,
            self.repeats
        );
        out.push_str(&format!(
            "{:<w$}  {:>10}  {:>10}\n",
            "feature", "importance", "std"
        ));
        for f in &self.features {
            out.push_str(&format!(
                "{:<w$}  {:>10.4}  {:>10.4}\n",
                f.name, f.importance, f.std
            ));
        }
        out
    }
}

/// Score drop when one column at a time is shuffled, averaged over
/// `repeats` shuffles drawn from one stream seeded with `seed`.
pub fn permutation_importance(
    model: &dyn Classifier,
    x: &Matrix,
    y: &[u8],
    names: &[String],
    metric: Metric,
    repeats: usize,
    seed: u64,
) -> Result<ImportanceReport> {
    if names.len() != x.n_cols() {
        return Err(Error::ShapeMismatch {
            expected: x.n_cols(),
            found: names.len(),
        });
    }
    if repeats == 0 {
        return Err(Error::InvalidArgument("repeats must be at least 1".into()));
    }
    let baseline = metric.score(model, x, y)?;
    let mut rng = SplitMix64::new(seed);
    let mut features = Vec::with_capacity(names.len());
    for (c, name) in names.iter().enumerate() {
        let original = x.column(c);
        let mut drops = Vec::with_capacity(repeats);
        for _ in 0..repeats {
            let mut permuted = original.clone();
            shuffle(&mut permuted, &mut rng);
            drops.push(baseline - metric.score(model, &x.with_column(c, &permuted), y)?);
        }
        let mean = crate::stats::mean(&drops).unwrap_or(0.0);
        let var = drops.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / repeats as f64;
        features.push(FeatureImportance {
            name: name.clone(),
            importance: mean,
            std: var.sqrt(),
        });
    }
    features.sort_by(|a, b| b.importance.total_cmp(&a.importance));
    Ok(ImportanceReport {
        metric,
        baseline,
        repeats,
        seed,
        features,
    })
}
