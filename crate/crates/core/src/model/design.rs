use serde::{Deserialize, Serialize};

use super::Matrix;
use crate::error::{Error, Result};
use crate::feature_engineering::LabelEncoding;
use crate::frame::{Column, ColumnData, Frame};

/// The two target classes as label text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetSpec {
    pub name: String,
    pub negative: String,
    pub positive: String,
}

/// Maps frames to a numeric design matrix: every non-target column becomes
/// a feature, categorical ones through a label encoding fitted once.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureSchema {
    pub feature_names: Vec<String>,
    pub encodings: Vec<LabelEncoding>,
    pub target: TargetSpec,
}

fn target_classes(column: &Column) -> Vec<String> {
    match column.data() {
        ColumnData::Int(v) => {
            let mut vals: Vec<i64> = v.iter().flatten().copied().collect();
            vals.sort_unstable();
            vals.dedup();
            vals.iter().map(i64::to_string).collect()
        }
        ColumnData::Float(v) => {
            let mut vals: Vec<f64> = v.iter().flatten().copied().collect();
            vals.sort_by(f64::total_cmp);
            vals.dedup();
            vals.iter().map(|x| format!("{x:?}")).collect()
        }
        _ => column.classes(),
    }
}

impl FeatureSchema {
    /// `positive` defaults to the larger of the two target classes.
    pub fn fit(frame: &Frame, target: &str, positive: Option<&str>) -> Result<Self> {
        let target_col = frame.column(target)?;
        let classes = target_classes(target_col);
        let (negative, positive) = match (classes.as_slice(), positive) {
            ([_], _) | ([], _) => return Err(Error::SingleClass),
            ([a, b], None) => (a.clone(), b.clone()),
            ([a, b], Some(p)) if p == b => (a.clone(), b.clone()),
            ([a, b], Some(p)) if p == a => (b.clone(), a.clone()),
            (_, Some(p)) if classes.len() == 2 => return Err(Error::NonBinaryLabel(p.to_string())),
            _ => return Err(Error::NonBinaryLabel(classes[2].clone())),
        };
        let mut feature_names = Vec::new();
        let mut encodings = Vec::new();
        for col in frame.columns().iter().filter(|c| c.name() != target) {
            if col.dtype().is_categorical() {
                encodings.push(LabelEncoding::fit(col)?);
            }
            feature_names.push(col.name().to_string());
        }
        Ok(Self {
            feature_names,
            encodings,
            target: TargetSpec {
                name: target.to_string(),
                negative,
                positive,
            },
        })
    }

    fn encoding(&self, name: &str) -> Option<&LabelEncoding> {
        self.encodings.iter().find(|e| e.column == name)
    }

    /// Feature matrix in `feature_names` order. Unseen categories encode
    /// as -1; nulls are rejected.
    pub fn features(&self, frame: &Frame) -> Result<Matrix> {
        let mut columns = Vec::with_capacity(self.feature_names.len());
        for name in &self.feature_names {
            let col = frame.column(name)?;
            let values: Vec<Option<f64>> = match (self.encoding(name), col.data()) {
                (Some(enc), _) => match enc.apply(col, Some(-1))?.data() {
                    ColumnData::Int(v) => v.iter().map(|c| c.map(|c| c as f64)).collect(),
                    _ => unreachable!("label encoding yields Int"),
                },
                (None, ColumnData::Int(v)) => v.iter().map(|c| c.map(|c| c as f64)).collect(),
                (None, ColumnData::Float(v)) => v.clone(),
                (None, ColumnData::DateTime(v)) => {
                    v.iter().map(|c| c.map(|t| t.epoch_s as f64)).collect()
                }
                (None, _) => return Err(col.wrong_dtype("numeric")),
            };
            let dense: Option<Vec<f64>> = values.into_iter().collect();
            columns.push(dense.ok_or_else(|| Error::NullInFeatures(name.clone()))?);
        }
        if columns.is_empty() {
            return Matrix::new(frame.n_rows(), 0, Vec::new());
        }
        Matrix::from_columns(&columns)
    }

    /// 0/1 labels; 1 marks the positive class.
    pub fn labels(&self, frame: &Frame) -> Result<Vec<u8>> {
        let col = frame.column(&self.target.name)?;
        let text: Vec<Option<String>> = match col.data() {
            ColumnData::Float(v) => v.iter().map(|x| x.map(|x| format!("{x:?}"))).collect(),
            _ => col.labels(),
        };
        text.into_iter()
            .map(|l| match l {
                None => Err(Error::NullInFeatures(self.target.name.clone())),
                Some(l) if l == self.target.positive => Ok(1),
                Some(l) if l == self.target.negative => Ok(0),
                Some(l) => Err(Error::NonBinaryLabel(l)),
            })
            .collect()
    }
}
