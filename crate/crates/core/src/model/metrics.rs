use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Binary classification metrics. `confusion[actual][predicted]` with index
/// 0 = negative, 1 = positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub confusion: [[u64; 2]; 2],
    pub auc: Option<f64>,
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

impl ClassificationReport {
    /// Metrics from confusion counts alone.
    pub fn from_counts(tn: u64, fp: u64, fn_: u64, tp: u64) -> Self {
        let precision = ratio(tp, tp + fp);
        let recall = ratio(tp, tp + fn_);
        let f1 = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        Self {
            accuracy: ratio(tn + tp, tn + fp + fn_ + tp),
            precision,
            recall,
            f1,
            confusion: [[tn, fp], [fn_, tp]],
            auc: None,
        }
    }

    pub fn total(&self) -> u64 {
        self.confusion.iter().flatten().sum()
    }

    /// Four display lines (accuracy, F1, precision, recall as rounded
    /// percentages), an optional AUC line and the confusion table.
    pub fn to_text(&self) -> String {
        let [[tn, fp], [fn_, tp]] = self.confusion;
        let mut out = format!(
            "Accuracy is {}\nF1 score is {}\nPrecision is {}\nRecall is {}\n",
            display_percent(self.accuracy),
            display_percent(self.f1),
            display_percent(self.precision),
            display_percent(self.recall),
        );
        if let Some(auc) = self.auc {
            out.push_str(&format!("AUC is {auc:.2}\n"));
        }
        let w = [tn, fp, fn_, tp]
            .iter()
            .map(|v| v.to_string().len())
            .max()
            .unwrap_or(1)
            .max("predicted negative".len());
        out.push_str("\nConfusion matrix\n");
        out.push_str(&format!(
            "{:<16}  {:>w$}  {:>w$}\n",
            "", "predicted negative", "predicted positive"
        ));
        out.push_str(&format!("{:<16}  {tn:>w$}  {fp:>w$}\n", "actual negative"));
        out.push_str(&format!("{:<16}  {fn_:>w$}  {tp:>w$}\n", "actual positive"));
        out
    }

    pub fn to_markdown(&self) -> String {
        let [[tn, fp], [fn_, tp]] = self.confusion;
        let mut out = String::from("| metric | value |\n|---|---|\n");
        for (name, v) in [
            ("accuracy", self.accuracy),
            ("f1", self.f1),
            ("precision", self.precision),
            ("recall", self.recall),
        ] {
            out.push_str(&format!("| {name} | {} |\n", display_percent(v)));
        }
        if let Some(auc) = self.auc {
            out.push_str(&format!("| auc | {auc:.4} |\n"));
        }
        out.push_str(&format!(
            "\n| | predicted negative | predicted positive |\n|---|---|---|\n| actual negative | {tn} | {fp} |\n| actual positive | {fn_} | {tp} |\n"
        ));
        out
    }
}

/// `value * 100`, rounded half away from zero, printed with one decimal.
pub fn display_percent(value: f64) -> String {
    format!("{:.1}", (value * 100.0).round())
}

fn check_binary(y: &[u8]) -> Result<()> {
    match y.iter().find(|&&v| v > 1) {
        Some(v) => Err(Error::NonBinaryLabel(v.to_string())),
        None => Ok(()),
    }
}

pub fn classification_report(
    y_true: &[u8],
    y_pred: &[u8],
    scores: Option<&[f64]>,
) -> Result<ClassificationReport> {
    if y_true.len() != y_pred.len() {
        return Err(Error::LengthMismatch {
            left: y_true.len(),
            right: y_pred.len(),
        });
    }
    if y_true.is_empty() {
        return Err(Error::InvalidArgument("no samples to evaluate".into()));
    }
    check_binary(y_true)?;
    check_binary(y_pred)?;
    let mut cm = [[0u64; 2]; 2];
    for (&t, &p) in y_true.iter().zip(y_pred) {
        cm[t as usize][p as usize] += 1;
    }
    let mut report = ClassificationReport::from_counts(cm[0][0], cm[0][1], cm[1][0], cm[1][1]);
    if let Some(s) = scores {
        report.auc = match roc_auc(y_true, s) {
            Ok(a) => Some(a),
            Err(Error::SingleClass) => None,
            Err(e) => return Err(e),
        };
    }
    Ok(report)
}

/// Probability that a random positive outscores a random negative, ties
/// counted as one half, via the midrank (Mann–Whitney) statistic.
pub fn roc_auc(y_true: &[u8], scores: &[f64]) -> Result<f64> {
    if y_true.len() != scores.len() {
        return Err(Error::LengthMismatch {
            left: y_true.len(),
            right: scores.len(),
        });
    }
    check_binary(y_true)?;
    let n_pos = y_true.iter().filter(|&&v| v == 1).count();
    let n_neg = y_true.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::SingleClass);
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));

    let mut pos_rank_sum = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        // Ranks are 1-based; the tie group i..=j shares their average.
        let midrank = (i + j) as f64 / 2.0 + 1.0;
        let positives = order[i..=j].iter().filter(|&&k| y_true[k] == 1).count();
        pos_rank_sum += midrank * positives as f64;
        i = j + 1;
    }
    let (p, n) = (n_pos as f64, n_neg as f64);
    Ok((pos_rank_sum - p * (p + 1.0) / 2.0) / (p * n))
}
