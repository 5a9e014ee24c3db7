//! Columnar frame data model: typed nullable columns and row/column surgery.
//!
//! A [`Frame`] is immutable once built. Every transforming operation in the
//! crate returns a fresh frame and validates the shape invariants (equal
//! column lengths, unique non-empty names) on construction.

pub mod csv;
pub mod infer;
pub mod timestamp;

use std::collections::HashSet;
use std::fmt;

use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rng::shuffled_indices;
pub use timestamp::{parse_timestamp, Timestamp};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DType {
    Int,
    Float,
    Bool,
    Categorical,
    DateTime,
}

impl DType {
    pub fn is_numeric(self) -> bool {
        matches!(self, DType::Int | DType::Float)
    }

    /// Categorical for profiling purposes: Bool columns are class labels too.
    pub fn is_categorical(self) -> bool {
        matches!(self, DType::Categorical | DType::Bool)
    }

    pub fn name(self) -> &'static str {
        match self {
            DType::Int => "Int",
            DType::Float => "Float",
            DType::Bool => "Bool",
            DType::Categorical => "Categorical",
            DType::DateTime => "DateTime",
        }
    }
}

impl fmt::Display for DType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Cell storage. `None` is a null cell.
#[derive(Debug, Clone, PartialEq)]
pub enum ColumnData {
    Int(Vec<Option<i64>>),
    Float(Vec<Option<f64>>),
    Bool(Vec<Option<bool>>),
    Categorical(Vec<Option<String>>),
    DateTime(Vec<Option<Timestamp>>),
}

/// Borrowed view of one cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell<'a> {
    Null,
    Int(i64),
    Float(f64),
    Bool(bool),
    Str(&'a str),
    DateTime(Timestamp),
}

impl Cell<'_> {
    pub fn is_null(&self) -> bool {
        matches!(self, Cell::Null)
    }

    /// Text form used by CSV output and class labels. `None` for nulls.
    pub fn to_text(&self) -> Option<String> {
        match *self {
            Cell::Null => None,
            Cell::Int(v) => Some(v.to_string()),
            // Debug formatting is shortest round-trip and always keeps a
            // '.' or exponent, so the text re-infers as Float.
            Cell::Float(v) => Some(format!("{v:?}")),
            Cell::Bool(v) => Some(v.to_string()),
            Cell::Str(s) => Some(s.to_string()),
            Cell::DateTime(t) => Some(t.to_string()),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Cell::Int(v) => Some(v as f64),
            Cell::Float(v) => Some(v),
            _ => None,
        }
    }
}

macro_rules! map_data {
    ($data:expr, $v:ident => $body:expr) => {
        match $data {
            ColumnData::Int($v) => ColumnData::Int($body),
            ColumnData::Float($v) => ColumnData::Float($body),
            ColumnData::Bool($v) => ColumnData::Bool($body),
            ColumnData::Categorical($v) => ColumnData::Categorical($body),
            ColumnData::DateTime($v) => ColumnData::DateTime($body),
        }
    };
}

macro_rules! with_data {
    ($data:expr, $v:ident => $body:expr) => {
        match $data {
            ColumnData::Int($v) => $body,
            ColumnData::Float($v) => $body,
            ColumnData::Bool($v) => $body,
            ColumnData::Categorical($v) => $body,
            ColumnData::DateTime($v) => $body,
        }
    };
}

impl ColumnData {
    pub fn len(&self) -> usize {
        with_data!(self, v => v.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dtype(&self) -> DType {
        match self {
            ColumnData::Int(_) => DType::Int,
            ColumnData::Float(_) => DType::Float,
            ColumnData::Bool(_) => DType::Bool,
            ColumnData::Categorical(_) => DType::Categorical,
            ColumnData::DateTime(_) => DType::DateTime,
        }
    }

    pub fn is_null(&self, row: usize) -> bool {
        with_data!(self, v => v[row].is_none())
    }

    pub fn cell(&self, row: usize) -> Cell<'_> {
        match self {
            ColumnData::Int(v) => v[row].map_or(Cell::Null, Cell::Int),
            ColumnData::Float(v) => v[row].map_or(Cell::Null, Cell::Float),
            ColumnData::Bool(v) => v[row].map_or(Cell::Null, Cell::Bool),
            ColumnData::Categorical(v) => v[row].as_deref().map_or(Cell::Null, Cell::Str),
            ColumnData::DateTime(v) => v[row].map_or(Cell::Null, Cell::DateTime),
        }
    }

    #[allow(clippy::clone_on_copy)]
    pub fn take(&self, rows: &[usize]) -> ColumnData {
        map_data!(self, v => rows.iter().map(|&r| v[r].clone()).collect())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    name: String,
    data: ColumnData,
}

impl Column {
    pub fn new(name: impl Into<String>, data: ColumnData) -> Self {
        let data = match data {
            ColumnData::Float(v) => ColumnData::Float(sanitize_floats(v)),
            other => other,
        };
        Self {
            name: name.into(),
            data,
        }
    }

    pub fn int(name: impl Into<String>, values: Vec<Option<i64>>) -> Self {
        Self::new(name, ColumnData::Int(values))
    }

    /// Non-finite inputs are stored as nulls.
    pub fn float(name: impl Into<String>, values: Vec<Option<f64>>) -> Self {
        Self::new(name, ColumnData::Float(values))
    }

    pub fn boolean(name: impl Into<String>, values: Vec<Option<bool>>) -> Self {
        Self::new(name, ColumnData::Bool(values))
    }

    pub fn categorical<S: Into<String>>(name: impl Into<String>, values: Vec<Option<S>>) -> Self {
        Self::new(
            name,
            ColumnData::Categorical(values.into_iter().map(|v| v.map(Into::into)).collect()),
        )
    }

    pub fn datetime(name: impl Into<String>, values: Vec<Option<Timestamp>>) -> Self {
        Self::new(name, ColumnData::DateTime(values))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dtype(&self) -> DType {
        self.data.dtype()
    }

    pub fn data(&self) -> &ColumnData {
        &self.data
    }

    pub fn into_data(self) -> ColumnData {
        self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn cell(&self, row: usize) -> Cell<'_> {
        self.data.cell(row)
    }

    pub fn null_count(&self) -> usize {
        (0..self.len()).filter(|&r| self.data.is_null(r)).count()
    }

    pub fn non_null_count(&self) -> usize {
        self.len() - self.null_count()
    }

    pub fn renamed(&self, name: impl Into<String>) -> Column {
        Column::new(name, self.data.clone())
    }

    /// Non-null cells of a numeric column as `f64`, in row order.
    pub fn numeric_values(&self) -> Result<Vec<f64>> {
        match &self.data {
            ColumnData::Int(v) => Ok(v.iter().flatten().map(|&x| x as f64).collect()),
            ColumnData::Float(v) => Ok(v.iter().flatten().copied().collect()),
            _ => Err(self.wrong_dtype("numeric")),
        }
    }

    /// Per-row class label text, `None` for nulls.
    pub fn labels(&self) -> Vec<Option<String>> {
        (0..self.len()).map(|r| self.cell(r).to_text()).collect()
    }

    /// Distinct non-null class labels, lexicographically sorted.
    pub fn classes(&self) -> Vec<String> {
        let set: std::collections::BTreeSet<String> = self.labels().into_iter().flatten().collect();
        set.into_iter().collect()
    }

    pub fn distinct_non_null(&self) -> usize {
        match &self.data {
            ColumnData::Float(v) => v
                .iter()
                .flatten()
                .map(|x| x.to_bits())
                .collect::<HashSet<_>>()
                .len(),
            ColumnData::Int(v) => v.iter().flatten().collect::<HashSet<_>>().len(),
            ColumnData::Bool(v) => v.iter().flatten().collect::<HashSet<_>>().len(),
            ColumnData::Categorical(v) => v.iter().flatten().collect::<HashSet<_>>().len(),
            ColumnData::DateTime(v) => v.iter().flatten().collect::<HashSet<_>>().len(),
        }
    }

    pub fn take(&self, rows: &[usize]) -> Column {
        Column {
            name: self.name.clone(),
            data: self.data.take(rows),
        }
    }

    pub(crate) fn wrong_dtype(&self, expected: &'static str) -> Error {
        Error::WrongDType {
            column: self.name.clone(),
            expected,
            found: self.dtype().to_string(),
        }
    }
}

fn sanitize_floats(values: Vec<Option<f64>>) -> Vec<Option<f64>> {
    values
        .into_iter()
        .map(|v| v.filter(|x| x.is_finite()))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SliceMode {
    Head,
    Tail,
    Sample,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Frame {
    columns: Vec<Column>,
    n_rows: usize,
}

impl Frame {
    pub fn new(columns: Vec<Column>) -> Result<Self> {
        let n_rows = columns.first().map_or(0, Column::len);
        let mut seen = HashSet::new();
        for c in &columns {
            if c.name.is_empty() {
                return Err(Error::EmptyColumnName);
            }
            if !seen.insert(c.name.as_str()) {
                return Err(Error::DuplicateColumn(c.name.clone()));
            }
            if c.len() != n_rows {
                return Err(Error::ColumnLength {
                    name: c.name.clone(),
                    expected: n_rows,
                    found: c.len(),
                });
            }
        }
        Ok(Self { columns, n_rows })
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.n_rows, self.columns.len())
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn into_columns(self) -> Vec<Column> {
        self.columns
    }

    pub fn names(&self) -> Vec<&str> {
        self.columns.iter().map(Column::name).collect()
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    pub fn column(&self, name: &str) -> Result<&Column> {
        self.columns
            .iter()
            .find(|c| c.name == name)
            .ok_or_else(|| Error::UnknownColumn(name.to_string()))
    }

    /// Frame without the named columns; survivors keep their order.
    pub fn drop_columns<S: AsRef<str>>(&self, names: &[S]) -> Result<Frame> {
        let mut drop = HashSet::new();
        for n in names {
            let n = n.as_ref();
            self.column(n)?;
            drop.insert(n);
        }
        let kept = self
            .columns
            .iter()
            .filter(|c| !drop.contains(c.name.as_str()))
            .cloned()
            .collect();
        Frame::new(kept)
    }

    /// Rows at the given indices, in that order. Indices may repeat.
    pub fn take_rows(&self, rows: &[usize]) -> Frame {
        let columns: Vec<Column> = self.columns.iter().map(|c| c.take(rows)).collect();
        Frame {
            n_rows: rows.len(),
            columns,
        }
    }

    /// First, last or a seeded random `min(k, n_rows)` rows.
    ///
    /// Sampled rows come back in ascending original index order.
    pub fn slice_rows(&self, mode: SliceMode, k: usize, seed: u64) -> Frame {
        let k = k.min(self.n_rows);
        let rows: Vec<usize> = match mode {
            SliceMode::Head => (0..k).collect(),
            SliceMode::Tail => (self.n_rows - k..self.n_rows).collect(),
            SliceMode::Sample => {
                let mut picked = shuffled_indices(self.n_rows, seed);
                picked.truncate(k);
                picked.sort_unstable();
                picked
            }
        };
        self.take_rows(&rows)
    }

    /// Replaces the column at `name`'s position with `replacement` (which may
    /// carry a different name), keeping column order.
    pub fn replace_column(&self, name: &str, replacement: Column) -> Result<Frame> {
        let idx = self
            .position(name)
            .ok_or_else(|| Error::UnknownColumn(name.to_string()))?;
        let mut cols = self.columns.clone();
        cols[idx] = replacement;
        Frame::new(cols)
    }

    /// Replaces the named column with several columns at the same position.
    pub fn splice_column(&self, name: &str, replacements: Vec<Column>) -> Result<Frame> {
        let idx = self
            .position(name)
            .ok_or_else(|| Error::UnknownColumn(name.to_string()))?;
        let mut cols = self.columns.clone();
        cols.splice(idx..=idx, replacements);
        Frame::new(cols)
    }

    pub fn with_columns(&self, extra: Vec<Column>) -> Result<Frame> {
        let mut cols = self.columns.clone();
        cols.extend(extra);
        Frame::new(cols)
    }
}

struct CellSer<'a>(Cell<'a>);

impl Serialize for CellSer<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0 {
            Cell::Null => s.serialize_none(),
            Cell::Int(v) => s.serialize_i64(v),
            Cell::Float(v) => s.serialize_f64(v),
            Cell::Bool(v) => s.serialize_bool(v),
            Cell::Str(v) => s.serialize_str(v),
            Cell::DateTime(t) => s.collect_str(&t),
        }
    }
}

struct ValuesSer<'a>(&'a Column);

impl Serialize for ValuesSer<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for r in 0..self.0.len() {
            seq.serialize_element(&CellSer(self.0.cell(r)))?;
        }
        seq.end()
    }
}

impl Serialize for Column {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(3))?;
        map.serialize_entry("name", &self.name)?;
        map.serialize_entry("dtype", &self.dtype())?;
        map.serialize_entry("values", &ValuesSer(self))?;
        map.end()
    }
}

impl Serialize for Frame {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(2))?;
        map.serialize_entry("n_rows", &self.n_rows)?;
        map.serialize_entry("columns", &self.columns)?;
        map.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abc() -> Frame {
        Frame::new(vec![
            Column::int("a", vec![Some(0), Some(1), Some(2), Some(3), Some(4)]),
            Column::categorical("b", vec![Some("v"), None, Some("w"), Some("x"), Some("y")]),
            Column::float(
                "c",
                vec![Some(0.5), Some(f64::NAN), None, Some(1.5), Some(2.5)],
            ),
        ])
        .unwrap()
    }

    fn ints(f: &Frame) -> Vec<Option<i64>> {
        match f.column("a").unwrap().data() {
            ColumnData::Int(v) => v.clone(),
            _ => unreachable!(),
        }
    }

    #[test]
    fn construction_invariants() {
        let f = abc();
        assert_eq!(f.shape(), (5, 3));
        assert_eq!(f.column("c").unwrap().null_count(), 2, "NaN stored as null");
        assert_eq!(
            Frame::new(vec![
                Column::int("a", vec![Some(1)]),
                Column::int("a", vec![Some(2)])
            ]),
            Err(Error::DuplicateColumn("a".into()))
        );
        assert_eq!(
            Frame::new(vec![Column::int("", vec![])]),
            Err(Error::EmptyColumnName)
        );
        assert!(matches!(
            Frame::new(vec![
                Column::int("a", vec![Some(1)]),
                Column::int("b", vec![])
            ]),
            Err(Error::ColumnLength { .. })
        ));
    }

    #[test]
    fn drop_columns_cases() {
        let f = abc();
        let none: [&str; 0] = [];
        assert_eq!(f.drop_columns(&none).unwrap(), f);
        assert_eq!(f.drop_columns(&["b"]).unwrap().names(), vec!["a", "c"]);
        assert_eq!(
            f.drop_columns(&["z"]),
            Err(Error::UnknownColumn("z".into()))
        );
    }

    #[test]
    fn head_tail_clamp() {
        let f = abc().take_rows(&[0, 1, 2]);
        assert_eq!(f.slice_rows(SliceMode::Head, 5, 0).n_rows(), 3);
        let tail = f.slice_rows(SliceMode::Tail, 2, 0);
        assert_eq!(ints(&tail), vec![Some(1), Some(2)]);
        assert_eq!(f.slice_rows(SliceMode::Tail, 0, 0).n_rows(), 0);
    }

    #[test]
    fn sample_golden() {
        // Shuffling 0..5 with SplitMix64(0) yields [2, 3, 1, 4, 0]; the
        // first two picks sorted are rows 2 and 3.
        let f = abc();
        let s = f.slice_rows(SliceMode::Sample, 2, 0);
        assert_eq!(ints(&s), vec![Some(2), Some(3)]);
        assert_eq!(s, f.slice_rows(SliceMode::Sample, 2, 0));
    }

    #[test]
    fn serializes_cells() {
        let f = abc().take_rows(&[0, 1]);
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(
            json,
            r#"{"n_rows":2,"columns":[{"name":"a","dtype":"Int","values":[0,1]},{"name":"b","dtype":"Categorical","values":["v",null]},{"name":"c","dtype":"Float","values":[0.5,null]}]}"#
        );
    }
}
