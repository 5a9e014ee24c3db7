//! Dataset profiling: the describe report and its building blocks.

use indexmap::IndexMap;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::frame::infer::{parse_datetime, THRESHOLD_PERCENT};
use crate::frame::{Cell, Column, DType, Frame, SliceMode};
use crate::stats;

/// Rows shown in each head/tail/random preview.
pub const PREVIEW_ROWS: usize = 5;
/// Non-null values sampled when looking for timestamp-like text columns.
pub const DATE_CANDIDATE_SAMPLE: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatSummary {
    pub count: usize,
    pub mean: f64,
    /// Sample standard deviation; `None` when `count < 2`.
    pub std: Option<f64>,
    pub min: f64,
    pub q25: f64,
    pub q50: f64,
    pub q75: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct FeatureClasses {
    pub numerical: Vec<String>,
    pub categorical: Vec<String>,
    pub datetime: Vec<String>,
    /// Categorical columns whose text looks like timestamps.
    pub date_candidates: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MissingRow {
    pub feature: String,
    pub missing_count: usize,
    pub missing_percent: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
#[serde(transparent)]
pub struct MissingReport {
    pub rows: Vec<MissingRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UniqueRow {
    pub feature: String,
    pub unique_count: usize,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
#[serde(transparent)]
pub struct UniqueReport {
    pub rows: Vec<UniqueRow>,
}

/// Everything `describe` reports, in serialization order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DescribeReport {
    pub head: Frame,
    pub tail: Frame,
    pub random: Frame,
    pub shape: (usize, usize),
    pub dtypes: IndexMap<String, DType>,
    pub classes: FeatureClasses,
    /// `None` for numeric columns with no non-null values.
    pub numeric_stats: IndexMap<String, Option<StatSummary>>,
    pub unique: UniqueReport,
    pub missing: MissingReport,
    pub notes: Vec<String>,
}

pub fn summary_stats(column: &Column) -> Result<StatSummary> {
    let values = column.numeric_values()?;
    if values.is_empty() {
        return Err(Error::EmptyColumn(column.name().to_string()));
    }
    let sorted = stats::sorted(&values);
    let q = |p| stats::quantile_sorted(&sorted, p).expect("non-empty");
    Ok(StatSummary {
        count: values.len(),
        mean: stats::mean(&values).expect("non-empty"),
        std: stats::sample_std(&values),
        min: sorted[0],
        q25: q(0.25),
        q50: q(0.5),
        q75: q(0.75),
        max: sorted[sorted.len() - 1],
    })
}

/// True when at least 95% of up to 1000 sampled non-null cells parse as
/// timestamps.
pub fn looks_like_dates(column: &Column) -> bool {
    if column.dtype() != DType::Categorical {
        return false;
    }
    let sample: Vec<&str> = (0..column.len())
        .filter_map(|r| match column.cell(r) {
            Cell::Str(s) => Some(s),
            _ => None,
        })
        .take(DATE_CANDIDATE_SAMPLE)
        .collect();
    let hits = sample
        .iter()
        .filter(|s| parse_datetime(s).is_some())
        .count();
    !sample.is_empty() && hits * 100 >= THRESHOLD_PERCENT * sample.len()
}

pub fn classify_features(frame: &Frame) -> FeatureClasses {
    let mut classes = FeatureClasses::default();
    for col in frame.columns() {
        let name = col.name().to_string();
        match col.dtype() {
            DType::Int | DType::Float => classes.numerical.push(name),
            DType::DateTime => classes.datetime.push(name),
            DType::Bool | DType::Categorical => {
                if looks_like_dates(col) {
                    classes.date_candidates.push(name.clone());
                }
                classes.categorical.push(name);
            }
        }
    }
    classes
}

pub fn unique_counts(frame: &Frame) -> UniqueReport {
    let rows = frame
        .columns()
        .iter()
        .filter(|c| c.dtype().is_categorical())
        .map(|c| UniqueRow {
            feature: c.name().to_string(),
            unique_count: c.distinct_non_null(),
        })
        .collect();
    UniqueReport { rows }
}

pub fn missing_report(frame: &Frame) -> MissingReport {
    let n = frame.n_rows();
    let rows = frame
        .columns()
        .iter()
        .map(|c| {
            let missing = c.null_count();
            MissingRow {
                feature: c.name().to_string(),
                missing_count: missing,
                missing_percent: if n == 0 {
                    0.0
                } else {
                    100.0 * missing as f64 / n as f64
                },
            }
        })
        .collect();
    MissingReport { rows }
}

pub fn describe(frame: &Frame, seed: u64) -> DescribeReport {
    let classes = classify_features(frame);
    let stats: Vec<Option<StatSummary>> = classes
        .numerical
        .par_iter()
        .map(|name| {
            let col = frame.column(name).expect("classified from this frame");
            summary_stats(col).ok()
        })
        .collect();
    let numeric_stats = classes.numerical.iter().cloned().zip(stats).collect();
    let notes = classes
        .date_candidates
        .iter()
        .map(|c| format!("Column '{c}' holds timestamp text; convert it with to_date"))
        .collect();

    DescribeReport {
        head: frame.slice_rows(SliceMode::Head, PREVIEW_ROWS, seed),
        tail: frame.slice_rows(SliceMode::Tail, PREVIEW_ROWS, seed),
        random: frame.slice_rows(SliceMode::Sample, PREVIEW_ROWS, seed),
        shape: frame.shape(),
        dtypes: frame
            .columns()
            .iter()
            .map(|c| (c.name().to_string(), c.dtype()))
            .collect(),
        classes,
        numeric_stats,
        unique: unique_counts(frame),
        missing: missing_report(frame),
        notes,
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Style {
    Markdown,
    Plain,
}

fn table(out: &mut String, headers: &[String], rows: &[Vec<String>], style: Style) {
    match style {
        Style::Markdown => {
            out.push_str(&format!("| {} |\n", headers.join(" | ")));
            out.push_str(&format!("|{}\n", "---|".repeat(headers.len())));
            for r in rows {
                let cells: Vec<String> = r.iter().map(|c| c.replace('|', "\\|")).collect();
                out.push_str(&format!("| {} |\n", cells.join(" | ")));
            }
        }
        Style::Plain => {
            let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
            for r in rows {
                for (w, c) in widths.iter_mut().zip(r) {
                    *w = (*w).max(c.chars().count());
                }
            }
            let line = |cells: &[String]| {
                let padded: Vec<String> = cells
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:<w$}"))
                    .collect();
                format!("{}\n", padded.join("  ").trim_end())
            };
            out.push_str(&line(headers));
            for r in rows {
                out.push_str(&line(r));
            }
        }
    }
    out.push('\n');
}

fn frame_table(out: &mut String, frame: &Frame, style: Style) {
    let mut headers = vec![String::new()];
    headers.extend(frame.names().into_iter().map(String::from));
    let rows: Vec<Vec<String>> = (0..frame.n_rows())
        .map(|r| {
            let mut row = vec![r.to_string()];
            row.extend(
                frame
                    .columns()
                    .iter()
                    .map(|c| c.cell(r).to_text().unwrap_or_else(|| "null".into())),
            );
            row
        })
        .collect();
    table(out, &headers, &rows, style);
}

fn fmt_num(v: f64) -> String {
    format!("{v:.6}")
        .trim_end_matches('0')
        .trim_end_matches('.')
        .to_string()
}

impl DescribeReport {
    pub fn to_markdown(&self) -> String {
        self.render(Style::Markdown)
    }

    pub fn to_text(&self) -> String {
        self.render(Style::Plain)
    }

    fn render(&self, style: Style) -> String {
        let heading = |out: &mut String, title: &str| match style {
            Style::Markdown => out.push_str(&format!("## {title}\n\n")),
            Style::Plain => out.push_str(&format!("{title}\n\n")),
        };
        let mut out = String::new();

        heading(&mut out, "First five rows");
        frame_table(&mut out, &self.head, style);
        heading(&mut out, "Last five rows");
        frame_table(&mut out, &self.tail, style);
        heading(&mut out, "Random five rows");
        frame_table(&mut out, &self.random, style);

        heading(&mut out, "Shape");
        out.push_str(&format!(
            "{} rows, {} columns\n\n",
            self.shape.0, self.shape.1
        ));

        for note in &self.notes {
            out.push_str(note);
            out.push_str("\n\n");
        }

        heading(&mut out, "Numerical features");
        out.push_str(&format!("{:?}\n\n", self.classes.numerical));
        heading(&mut out, "Categorical features");
        out.push_str(&format!("{:?}\n\n", self.classes.categorical));
        if !self.classes.datetime.is_empty() {
            heading(&mut out, "DateTime features");
            out.push_str(&format!("{:?}\n\n", self.classes.datetime));
        }

        heading(&mut out, "Statistical description");
        let mut headers = vec![String::new()];
        headers.extend(self.numeric_stats.keys().cloned());
        let stat_row = |label: &str, get: &dyn Fn(&StatSummary) -> Option<f64>| {
            let mut row = vec![label.to_string()];
            row.extend(self.numeric_stats.values().map(|s| {
                s.as_ref()
                    .and_then(get)
                    .map_or_else(|| "null".to_string(), fmt_num)
            }));
            row
        };
        let rows = vec![
            stat_row("count", &|s| Some(s.count as f64)),
            stat_row("mean", &|s| Some(s.mean)),
            stat_row("std", &|s| s.std),
            stat_row("min", &|s| Some(s.min)),
            stat_row("25%", &|s| Some(s.q25)),
            stat_row("50%", &|s| Some(s.q50)),
            stat_row("75%", &|s| Some(s.q75)),
            stat_row("max", &|s| Some(s.max)),
        ];
        table(&mut out, &headers, &rows, style);

        heading(&mut out, "Data types");
        let rows: Vec<Vec<String>> = self
            .dtypes
            .iter()
            .map(|(n, t)| vec![n.clone(), t.to_string()])
            .collect();
        table(&mut out, &["feature".into(), "dtype".into()], &rows, style);

        heading(&mut out, "Missing values");
        let rows: Vec<Vec<String>> = self
            .missing
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.feature.clone(),
                    r.missing_count.to_string(),
                    format!("{:.1}", r.missing_percent),
                ]
            })
            .collect();
        table(
            &mut out,
            &[
                "feature".into(),
                "missing_count".into(),
                "missing_percent".into(),
            ],
            &rows,
            style,
        );

        heading(&mut out, "Unique class counts");
        let rows: Vec<Vec<String>> = self
            .unique
            .rows
            .iter()
            .map(|r| vec![r.feature.clone(), r.unique_count.to_string()])
            .collect();
        table(
            &mut out,
            &["feature".into(), "unique_count".into()],
            &rows,
            style,
        );
        out
    }
}
