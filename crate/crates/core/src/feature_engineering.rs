//! Frame cleaning and preparation ahead of modelling.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::{parse_timestamp, Column, ColumnData, DType, Frame};
use crate::stats;

/// Upper bound on indicator columns produced per one-hot encoded column.
pub const MAX_ONE_HOT_CLASSES: usize = 1000;

/// Drops every column with at most one distinct non-null value.
///
/// Returns the surviving frame and the dropped names in column order.
pub fn drop_redundant(frame: &Frame) -> (Frame, Vec<String>) {
    let dropped: Vec<String> = frame
        .columns()
        .iter()
        .filter(|c| c.distinct_non_null() <= 1)
        .map(|c| c.name().to_string())
        .collect();
    let kept = frame
        .drop_columns(&dropped)
        .expect("dropped names come from the frame");
    (kept, dropped)
}

/// `Dropped ['A', 'B']`
pub fn format_dropped(names: &[String]) -> String {
    let quoted: Vec<String> = names.iter().map(|n| format!("'{n}'")).collect();
    format!("Dropped [{}]", quoted.join(", "))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NumericFill {
    #[default]
    Mean,
    Median,
}

/// Numeric columns use `numeric`; categorical and boolean columns always use
/// the mode, ties going to the lexicographically smallest class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FillStrategy {
    pub numeric: NumericFill,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FillOutcome {
    pub frame: Frame,
    /// Columns with nulls but no non-null value to fill from.
    pub untouched: Vec<String>,
}

fn mode<T: Ord + Clone>(values: impl Iterator<Item = T>) -> Option<T> {
    let mut counts: BTreeMap<T, usize> = BTreeMap::new();
    for v in values {
        *counts.entry(v).or_default() += 1;
    }
    // BTreeMap iterates in ascending order; keep the first maximum.
    let mut best: Option<(T, usize)> = None;
    for (v, c) in counts {
        if best.as_ref().is_none_or(|(_, bc)| c > *bc) {
            best = Some((v, c));
        }
    }
    best.map(|(v, _)| v)
}

fn fill_value(values: &[f64], how: NumericFill) -> f64 {
    match how {
        NumericFill::Mean => stats::mean(values).expect("non-empty"),
        NumericFill::Median => {
            stats::quantile_sorted(&stats::sorted(values), 0.5).expect("non-empty")
        }
    }
}

pub fn fill_missing(frame: &Frame, strategy: FillStrategy) -> FillOutcome {
    let mut untouched = Vec::new();
    let mut columns = Vec::with_capacity(frame.n_cols());
    for col in frame.columns() {
        let fillable = col.null_count() > 0 && col.dtype() != DType::DateTime;
        if !fillable {
            columns.push(col.clone());
            continue;
        }
        if col.non_null_count() == 0 {
            untouched.push(col.name().to_string());
            columns.push(col.clone());
            continue;
        }
        let data = match col.data() {
            ColumnData::Int(v) => {
                let fill = fill_value(&col.numeric_values().expect("numeric"), strategy.numeric);
                // Rounded half away from zero so the column stays Int.
                let fill = fill.round() as i64;
                ColumnData::Int(v.iter().map(|x| Some(x.unwrap_or(fill))).collect())
            }
            ColumnData::Float(v) => {
                let fill = fill_value(&col.numeric_values().expect("numeric"), strategy.numeric);
                ColumnData::Float(v.iter().map(|x| Some(x.unwrap_or(fill))).collect())
            }
            ColumnData::Bool(v) => {
                let fill = mode(v.iter().flatten().copied()).expect("non-empty");
                ColumnData::Bool(v.iter().map(|x| Some(x.unwrap_or(fill))).collect())
            }
            ColumnData::Categorical(v) => {
                let fill = mode(v.iter().flatten().cloned()).expect("non-empty");
                ColumnData::Categorical(
                    v.iter()
                        .map(|x| Some(x.clone().unwrap_or_else(|| fill.clone())))
                        .collect(),
                )
            }
            ColumnData::DateTime(_) => unreachable!("skipped above"),
        };
        columns.push(Column::new(col.name(), data));
    }
    FillOutcome {
        frame: Frame::new(columns).expect("shape preserved"),
        untouched,
    }
}

/// Re-parses text columns as timestamps; unparseable cells become null.
pub fn to_date<S: AsRef<str>>(frame: &Frame, cols: &[S]) -> Result<Frame> {
    let mut out = frame.clone();
    for name in cols {
        let name = name.as_ref();
        let col = frame.column(name)?;
        let converted = match col.data() {
            ColumnData::Categorical(v) => Column::datetime(
                name,
                v.iter()
                    .map(|s| s.as_deref().and_then(|s| parse_timestamp(s).ok()))
                    .collect(),
            ),
            ColumnData::DateTime(_) => continue,
            _ => return Err(col.wrong_dtype("Categorical")),
        };
        out = out.replace_column(name, converted)?;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EncodeMethod {
    Label,
    OneHot,
}

/// Frozen class order for one categorical column. Index `i` encodes
/// `classes[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelEncoding {
    pub column: String,
    pub classes: Vec<String>,
}

impl LabelEncoding {
    pub fn fit(column: &Column) -> Result<Self> {
        if !column.dtype().is_categorical() {
            return Err(column.wrong_dtype("Categorical"));
        }
        Ok(Self {
            column: column.name().to_string(),
            classes: column.classes(),
        })
    }

    fn index(&self) -> HashMap<&str, i64> {
        self.classes
            .iter()
            .enumerate()
            .map(|(i, c)| (c.as_str(), i as i64))
            .collect()
    }

    /// Encodes a column with this class order. Nulls stay null; classes
    /// never seen at fit time map to `unseen`.
    pub fn apply(&self, column: &Column, unseen: Option<i64>) -> Result<Column> {
        if !column.dtype().is_categorical() {
            return Err(column.wrong_dtype("Categorical"));
        }
        let index = self.index();
        let codes = column
            .labels()
            .into_iter()
            .map(|l| l.and_then(|l| index.get(l.as_str()).copied().or(unseen)))
            .collect();
        Ok(Column::int(column.name(), codes))
    }

    /// Maps codes back to class labels as a Categorical column.
    pub fn decode(&self, codes: &Column) -> Result<Column> {
        let ColumnData::Int(v) = codes.data() else {
            return Err(codes.wrong_dtype("Int"));
        };
        let labels = v
            .iter()
            .map(|c| {
                c.and_then(|c| usize::try_from(c).ok())
                    .and_then(|c| self.classes.get(c).cloned())
            })
            .collect();
        Ok(Column::categorical(codes.name(), labels))
    }
}

pub fn encode_categorical<S: AsRef<str>>(
    frame: &Frame,
    cols: &[S],
    method: EncodeMethod,
) -> Result<Frame> {
    let mut out = frame.clone();
    for name in cols {
        let name = name.as_ref();
        let col = frame.column(name)?;
        let enc = LabelEncoding::fit(col)?;
        out = match method {
            EncodeMethod::Label => out.replace_column(name, enc.apply(col, None)?)?,
            EncodeMethod::OneHot => {
                if enc.classes.len() > MAX_ONE_HOT_CLASSES {
                    return Err(Error::TooManyClasses {
                        column: name.to_string(),
                        classes: enc.classes.len(),
                        limit: MAX_ONE_HOT_CLASSES,
                    });
                }
                let labels = col.labels();
                let indicators = enc
                    .classes
                    .iter()
                    .map(|class| {
                        let bits = labels
                            .iter()
                            .map(|l| Some(i64::from(l.as_deref() == Some(class.as_str()))))
                            .collect();
                        Column::int(format!("{name}_{class}"), bits)
                    })
                    .collect();
                out.splice_column(name, indicators)?
            }
        };
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::Cell;

    fn cat(name: &str, v: &[Option<&str>]) -> Column {
        Column::categorical(name, v.to_vec())
    }

    #[test]
    fn drops_constant_columns() {
        let f = Frame::new(vec![
            Column::categorical("TransactionId", vec![Some("T1"), Some("T2"), Some("T3")]),
            cat("CurrencyCode", &[Some("UGX"); 3]),
            Column::int("CountryCode", vec![Some(256); 3]),
            Column::float("Amount", vec![Some(1.0), Some(-20.0), Some(5.0)]),
            Column::int("Empty", vec![None; 3]),
        ])
        .unwrap();
        let (kept, dropped) = drop_redundant(&f);
        assert_eq!(dropped, vec!["CurrencyCode", "CountryCode", "Empty"]);
        assert_eq!(kept.names(), vec!["TransactionId", "Amount"]);
        assert_eq!(
            format_dropped(&dropped[..2]),
            "Dropped ['CurrencyCode', 'CountryCode']"
        );
        let (again, none) = drop_redundant(&kept);
        assert_eq!(again, kept);
        assert!(none.is_empty());
        assert_eq!(format_dropped(&[]), "Dropped []");
    }

    #[test]
    fn fill_numeric_and_mode() {
        let f = Frame::new(vec![
            Column::int("i", vec![Some(1), None, Some(3), None]),
            Column::float("x", vec![Some(1.0), None, Some(3.0), Some(10.0)]),
            cat("c", &[Some("a"), Some("a"), Some("b"), None]),
            cat("tie", &[Some("b"), Some("a"), None, None]),
        ])
        .unwrap();
        let out = fill_missing(&f, FillStrategy::default()).frame;
        assert_eq!(out.column("i").unwrap().cell(1), Cell::Int(2));
        assert_eq!(out.column("x").unwrap().cell(1), Cell::Float(14.0 / 3.0));
        assert_eq!(out.column("c").unwrap().cell(3), Cell::Str("a"));
        assert_eq!(out.column("tie").unwrap().cell(2), Cell::Str("a"));

        let med = fill_missing(
            &f,
            FillStrategy {
                numeric: NumericFill::Median,
            },
        )
        .frame;
        assert_eq!(med.column("x").unwrap().cell(1), Cell::Float(3.0));
        assert!(med.columns().iter().all(|c| c.null_count() == 0));
    }

    #[test]
    fn fill_reports_untouchable() {
        let f = Frame::new(vec![
            Column::float("x", vec![Some(1.0), None, Some(3.0)]),
            Column::int("dead", vec![None; 3]),
        ])
        .unwrap();
        let out = fill_missing(&f, FillStrategy::default());
        assert_eq!(out.untouched, vec!["dead"]);
        assert_eq!(out.frame.column("x").unwrap().cell(1), Cell::Float(2.0));
        assert_eq!(out.frame.column("dead").unwrap().null_count(), 3);
    }

    #[test]
    fn to_date_cases() {
        let f = Frame::new(vec![
            cat("t", &[Some("2018-11-15T02:18:49Z")]),
            cat("bad", &[Some("not a date")]),
            Column::int("n", vec![Some(1)]),
        ])
        .unwrap();
        let out = to_date(&f, &["t", "bad"]).unwrap();
        assert_eq!(out.column("t").unwrap().dtype(), DType::DateTime);
        assert_eq!(out.column("t").unwrap().null_count(), 0);
        assert_eq!(out.column("bad").unwrap().null_count(), 1);
        assert!(matches!(to_date(&f, &["n"]), Err(Error::WrongDType { .. })));
        assert_eq!(to_date(&f, &["zz"]), Err(Error::UnknownColumn("zz".into())));
    }

    #[test]
    fn label_encoding() {
        let f = Frame::new(vec![cat("c", &[Some("b"), Some("a"), Some("a"), None])]).unwrap();
        let out = encode_categorical(&f, &["c"], EncodeMethod::Label).unwrap();
        let c = out.column("c").unwrap();
        assert_eq!(
            c.data(),
            &ColumnData::Int(vec![Some(1), Some(0), Some(0), None])
        );
        let enc = LabelEncoding::fit(f.column("c").unwrap()).unwrap();
        assert_eq!(&enc.decode(c).unwrap(), f.column("c").unwrap());
    }

    #[test]
    fn one_hot_encoding() {
        let f = Frame::new(vec![
            Column::int("k", vec![Some(1), Some(2), Some(3)]),
            cat("c", &[Some("x"), Some("y"), None]),
        ])
        .unwrap();
        let out = encode_categorical(&f, &["c"], EncodeMethod::OneHot).unwrap();
        assert_eq!(out.names(), vec!["k", "c_x", "c_y"]);
        assert_eq!(
            out.column("c_x").unwrap().data(),
            &ColumnData::Int(vec![Some(1), Some(0), Some(0)])
        );
        assert_eq!(
            out.column("c_y").unwrap().data(),
            &ColumnData::Int(vec![Some(0), Some(1), Some(0)])
        );
    }

    #[test]
    fn one_hot_class_limit() {
        let many: Vec<Option<String>> = (0..1001).map(|i| Some(format!("v{i}"))).collect();
        let f = Frame::new(vec![Column::categorical("id", many)]).unwrap();
        assert!(matches!(
            encode_categorical(&f, &["id"], EncodeMethod::OneHot),
            Err(Error::TooManyClasses { classes: 1001, .. })
        ));
        assert!(encode_categorical(&f, &["id"], EncodeMethod::Label).is_ok());
    }
}
