//! Chart construction, separated from rendering.
//!
//! Spec builders turn frames into [`PlotSpec`] values whose numbers can be
//! checked directly; [`render_svg`] turns any valid spec into a standalone
//! SVG document.

mod svg;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::{Column, ColumnData, DType, Frame};
use crate::model::{ClassificationReport, ImportanceReport};
use crate::stats;
use crate::timeseries::TimeBucketSeries;
pub use svg::render_svg;

/// Categorical columns with more classes are skipped unless named.
pub const MAX_BAR_CLASSES: usize = 30;
/// Largest class count accepted for a grouping target.
pub const MAX_TARGET_CLASSES: usize = 10;
/// Pixels per figure-size unit.
pub const PX_PER_UNIT: f64 = 100.0;
pub const DEFAULT_FIG_SIZE: (f64, f64) = (5.0, 5.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlotKind {
    CountBar,
    GroupedBar,
    Histogram,
    Box,
    Line,
    Heatmap,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxStats {
    pub q25: f64,
    pub q50: f64,
    pub q75: f64,
    pub whisker_low: f64,
    pub whisker_high: f64,
    /// Values beyond 1.5 IQR of the quartiles, ascending.
    pub outliers: Vec<f64>,
}

/// Kind-specific chart payload.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Series {
    Bars {
        labels: Vec<String>,
        heights: Vec<f64>,
    },
    /// `counts[g][k]` is the height of key `k` within group `g`.
    Groups {
        groups: Vec<String>,
        keys: Vec<String>,
        counts: Vec<Vec<f64>>,
    },
    Bins {
        edges: Vec<f64>,
        counts: Vec<u64>,
    },
    Box(BoxStats),
    Line {
        x: Vec<f64>,
        x_labels: Vec<String>,
        y: Vec<f64>,
    },
    Matrix {
        row_labels: Vec<String>,
        col_labels: Vec<String>,
        cells: Vec<Vec<f64>>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotSpec {
    pub kind: PlotKind,
    /// Column or artifact the chart describes; used in output file names.
    pub subject: String,
    pub title: String,
    pub width: u32,
    pub height: u32,
    pub x_label: String,
    pub y_label: String,
    pub series: Series,
}

impl PlotSpec {
    fn new(
        kind: PlotKind,
        subject: &str,
        title: String,
        x_label: &str,
        y_label: &str,
        series: Series,
    ) -> Self {
        let (w, h) = DEFAULT_FIG_SIZE;
        Self {
            kind,
            subject: subject.to_string(),
            title,
            width: (w * PX_PER_UNIT) as u32,
            height: (h * PX_PER_UNIT) as u32,
            x_label: x_label.to_string(),
            y_label: y_label.to_string(),
            series,
        }
    }

    /// Sets the canvas from a figure size in abstract units (100 px each).
    pub fn with_fig_size(mut self, width: f64, height: f64) -> Self {
        self.width = (width * PX_PER_UNIT).round().max(1.0) as u32;
        self.height = (height * PX_PER_UNIT).round().max(1.0) as u32;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidArgument(format!("{}: {msg}", self.title)));
        if self.width == 0 || self.height == 0 {
            return bad("canvas must be non-empty");
        }
        let kind_ok = matches!(
            (self.kind, &self.series),
            (PlotKind::CountBar, Series::Bars { .. })
                | (PlotKind::GroupedBar, Series::Groups { .. })
                | (PlotKind::Histogram, Series::Bins { .. })
                | (PlotKind::Box, Series::Box(_))
                | (PlotKind::Line, Series::Line { .. })
                | (PlotKind::Heatmap, Series::Matrix { .. })
        );
        if !kind_ok {
            return bad("series does not match kind");
        }
        match &self.series {
            Series::Bars { labels, heights } => {
                if labels.len() != heights.len() || heights.iter().any(|h| h.is_nan() || *h < 0.0) {
                    return bad("bar heights must be non-negative, one per label");
                }
            }
            Series::Groups {
                groups,
                keys,
                counts,
            } => {
                if counts.len() != groups.len()
                    || counts.iter().any(|r| r.len() != keys.len())
                    || counts.iter().flatten().any(|h| h.is_nan() || *h < 0.0)
                {
                    return bad("group counts must be a non-negative groups x keys table");
                }
            }
            Series::Bins { edges, counts } => {
                if edges.len() != counts.len() + 1
                    || edges.windows(2).any(|w| w[0].is_nan() || w[0] >= w[1])
                {
                    return bad("histogram edges must be strictly increasing");
                }
            }
            Series::Box(b) => {
                if !(b.q25 <= b.q50 && b.q50 <= b.q75 && b.whisker_low <= b.whisker_high) {
                    return bad("box statistics out of order");
                }
            }
            Series::Line { x, x_labels, y } => {
                if x.len() != y.len() || x_labels.len() != x.len() {
                    return bad("line series lengths differ");
                }
            }
            Series::Matrix {
                row_labels,
                col_labels,
                cells,
            } => {
                if cells.len() != row_labels.len()
                    || cells.iter().any(|r| r.len() != col_labels.len())
                {
                    return bad("matrix shape does not match labels");
                }
            }
        }
        Ok(())
    }
}

/// Class label per row for class-like columns, using text form.
fn class_counts(col: &Column) -> BTreeMap<String, u64> {
    let mut counts = BTreeMap::new();
    for label in col.labels().into_iter().flatten() {
        *counts.entry(label).or_insert(0) += 1;
    }
    counts
}

fn names_or<'a, S: AsRef<str>>(
    frame: &'a Frame,
    explicit: Option<&[S]>,
    default: impl Fn(&Column) -> bool,
) -> Result<Vec<&'a Column>> {
    match explicit {
        Some(names) => names.iter().map(|n| frame.column(n.as_ref())).collect(),
        None => Ok(frame.columns().iter().filter(|c| default(c)).collect()),
    }
}

fn bar_eligible(col: &Column) -> bool {
    col.dtype().is_categorical() && (1..=MAX_BAR_CLASSES).contains(&col.distinct_non_null())
}

/// One count bar chart per categorical column; bars ordered by descending
/// count, ties by label.
pub fn countplot_spec<S: AsRef<str>>(
    frame: &Frame,
    cat_cols: Option<&[S]>,
) -> Result<Vec<PlotSpec>> {
    names_or(frame, cat_cols, bar_eligible)?
        .into_iter()
        .map(|col| {
            if !col.dtype().is_categorical() {
                return Err(col.wrong_dtype("Categorical"));
            }
            let mut bars: Vec<(String, u64)> = class_counts(col).into_iter().collect();
            bars.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
            let (labels, heights) = bars.into_iter().map(|(l, c)| (l, c as f64)).unzip();
            Ok(PlotSpec::new(
                PlotKind::CountBar,
                col.name(),
                format!("Count of {}", col.name()),
                col.name(),
                "count",
                Series::Bars { labels, heights },
            ))
        })
        .collect()
}

/// Target classes in display order: numeric for Int, lexicographic otherwise.
fn target_classes(col: &Column) -> Result<Vec<String>> {
    match col.data() {
        ColumnData::Int(v) => {
            let set: BTreeSet<i64> = v.iter().flatten().copied().collect();
            Ok(set.into_iter().map(|c| c.to_string()).collect())
        }
        ColumnData::Categorical(_) | ColumnData::Bool(_) => Ok(col.classes()),
        _ => Err(col.wrong_dtype("Categorical or Int")),
    }
}

/// Per categorical feature, class counts split by the target's classes.
pub fn catbox_spec(frame: &Frame, target: &str) -> Result<Vec<PlotSpec>> {
    let tcol = frame.column(target)?;
    let keys = target_classes(tcol)?;
    if keys.len() > MAX_TARGET_CLASSES {
        return Err(Error::TooManyClasses {
            column: target.to_string(),
            classes: keys.len(),
            limit: MAX_TARGET_CLASSES,
        });
    }
    let key_index: BTreeMap<&str, usize> = keys
        .iter()
        .enumerate()
        .map(|(i, k)| (k.as_str(), i))
        .collect();
    let tlabels = tcol.labels();

    let specs = frame
        .columns()
        .iter()
        .filter(|c| c.name() != target && bar_eligible(c))
        .map(|col| {
            let groups = col.classes();
            let group_index: BTreeMap<&str, usize> = groups
                .iter()
                .enumerate()
                .map(|(i, g)| (g.as_str(), i))
                .collect();
            let mut counts = vec![vec![0.0; keys.len()]; groups.len()];
            for (f, t) in col.labels().iter().zip(&tlabels) {
                if let (Some(f), Some(t)) = (f, t) {
                    counts[group_index[f.as_str()]][key_index[t.as_str()]] += 1.0;
                }
            }
            PlotSpec::new(
                PlotKind::GroupedBar,
                col.name(),
                format!("{} by {}", col.name(), target),
                col.name(),
                "count",
                Series::Groups {
                    groups,
                    keys: keys.clone(),
                    counts,
                },
            )
        })
        .collect();
    Ok(specs)
}

/// Equal-width bins over `[min, max]`; the last bin is closed. A constant
/// column gets one unit-wide bin centred on its value.
pub fn histogram_bins(values: &[f64], bins: usize) -> Result<(Vec<f64>, Vec<u64>)> {
    if bins == 0 {
        return Err(Error::InvalidArgument("bins must be at least 1".into()));
    }
    let sorted = stats::sorted(values);
    let (Some(&lo), Some(&hi)) = (sorted.first(), sorted.last()) else {
        return Err(Error::InvalidArgument("no values to bin".into()));
    };
    if lo == hi {
        return Ok((vec![lo - 0.5, hi + 0.5], vec![values.len() as u64]));
    }
    let width = (hi - lo) / bins as f64;
    let mut edges: Vec<f64> = (0..bins).map(|i| lo + i as f64 * width).collect();
    edges.push(hi);
    let interior = &edges[1..bins];
    let mut counts = vec![0u64; bins];
    for &v in values {
        counts[interior.partition_point(|e| *e <= v)] += 1;
    }
    Ok((edges, counts))
}

pub fn histogram_spec<S: AsRef<str>>(
    frame: &Frame,
    num_cols: Option<&[S]>,
    bins: usize,
) -> Result<Vec<PlotSpec>> {
    let cols = names_or(frame, num_cols, |c| {
        c.dtype().is_numeric() && c.non_null_count() > 0
    })?;
    cols.into_iter()
        .map(|col| {
            let values = col.numeric_values()?;
            if values.is_empty() {
                return Err(Error::EmptyColumn(col.name().to_string()));
            }
            let (edges, counts) = histogram_bins(&values, bins)?;
            Ok(PlotSpec::new(
                PlotKind::Histogram,
                col.name(),
                format!("Distribution of {}", col.name()),
                col.name(),
                "count",
                Series::Bins { edges, counts },
            ))
        })
        .collect()
}

pub fn box_stats(values: &[f64]) -> Option<BoxStats> {
    let sorted = stats::sorted(values);
    let q = |p| stats::quantile_sorted(&sorted, p);
    let (q25, q50, q75) = (q(0.25)?, q(0.5)?, q(0.75)?);
    let iqr = q75 - q25;
    let (lo_fence, hi_fence) = (q25 - 1.5 * iqr, q75 + 1.5 * iqr);
    let inside = || {
        sorted
            .iter()
            .copied()
            .filter(|v| (lo_fence..=hi_fence).contains(v))
    };
    Some(BoxStats {
        q25,
        q50,
        q75,
        whisker_low: inside().next()?,
        whisker_high: inside().next_back()?,
        outliers: sorted
            .iter()
            .copied()
            .filter(|v| !(lo_fence..=hi_fence).contains(v))
            .collect(),
    })
}

pub fn boxplot_spec(column: &Column) -> Result<PlotSpec> {
    let values = column.numeric_values()?;
    let stats = box_stats(&values).ok_or_else(|| Error::EmptyColumn(column.name().to_string()))?;
    Ok(PlotSpec::new(
        PlotKind::Box,
        column.name(),
        format!("Box plot of {}", column.name()),
        column.name(),
        "value",
        Series::Box(stats),
    ))
}

/// One line chart per bucketed feature, x in epoch seconds.
pub fn timeplot_spec(series: &[TimeBucketSeries]) -> Vec<PlotSpec> {
    series
        .iter()
        .map(|s| {
            PlotSpec::new(
                PlotKind::Line,
                &s.feature,
                format!("{} over time", s.feature),
                "date",
                &s.feature,
                Series::Line {
                    x: s.buckets.iter().map(|b| b.epoch_s as f64).collect(),
                    x_labels: s.buckets.iter().map(|b| b.date_string()).collect(),
                    y: s.values.clone(),
                },
            )
        })
        .collect()
}

/// Horizontal ranking of permutation importances. Negative importances are
/// drawn as empty bars; the report keeps the signed values.
pub fn importance_spec(report: &ImportanceReport) -> PlotSpec {
    PlotSpec::new(
        PlotKind::CountBar,
        "importance",
        "Permutation feature importance".to_string(),
        "feature",
        &format!("{} drop", report.metric.name()),
        Series::Bars {
            labels: report.features.iter().map(|f| f.name.clone()).collect(),
            heights: report
                .features
                .iter()
                .map(|f| f.importance.max(0.0))
                .collect(),
        },
    )
}

/// Rows actual (negative, positive), columns predicted (negative, positive).
pub fn confusion_heatmap_spec(report: &ClassificationReport) -> PlotSpec {
    let labels = vec!["negative".to_string(), "positive".to_string()];
    PlotSpec::new(
        PlotKind::Heatmap,
        "confusion",
        "Confusion matrix".to_string(),
        "predicted",
        "actual",
        Series::Matrix {
            row_labels: labels.clone(),
            col_labels: labels,
            cells: report
                .confusion
                .iter()
                .map(|r| r.iter().map(|&c| c as f64).collect())
                .collect(),
        },
    )
}

/// Numeric columns eligible for box plots (non-empty).
pub fn numeric_columns(frame: &Frame) -> Vec<&Column> {
    frame
        .columns()
        .iter()
        .filter(|c| matches!(c.dtype(), DType::Int | DType::Float) && c.non_null_count() > 0)
        .collect()
}
