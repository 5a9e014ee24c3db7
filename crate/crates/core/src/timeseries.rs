//! Calendar feature extraction and per-day aggregation against a time column.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::frame::timestamp::days_from_civil;
use crate::frame::{parse_timestamp, Column, ColumnData, Frame, Timestamp};
use crate::stats;

/// Suffixes of the derived columns, in emission order.
pub const DATE_PART_SUFFIXES: [&str; 9] = [
    "dow", "doy", "dom", "hr", "min", "is_wkd", "yr", "qtr", "mth",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Weekday {
    Monday,
    Tuesday,
    Wednesday,
    Thursday,
    Friday,
    Saturday,
    Sunday,
}

impl Weekday {
    const ALL: [Weekday; 7] = [
        Weekday::Monday,
        Weekday::Tuesday,
        Weekday::Wednesday,
        Weekday::Thursday,
        Weekday::Friday,
        Weekday::Saturday,
        Weekday::Sunday,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Weekday::Monday => "Monday",
            Weekday::Tuesday => "Tuesday",
            Weekday::Wednesday => "Wednesday",
            Weekday::Thursday => "Thursday",
            Weekday::Friday => "Friday",
            Weekday::Saturday => "Saturday",
            Weekday::Sunday => "Sunday",
        }
    }

    pub fn is_weekend(self) -> bool {
        matches!(self, Weekday::Saturday | Weekday::Sunday)
    }
}

impl fmt::Display for Weekday {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// 1970-01-01 was a Thursday, index 3 counting from Monday.
pub fn day_of_week(ts: Timestamp) -> Weekday {
    Weekday::ALL[(ts.days_from_epoch() + 3).rem_euclid(7) as usize]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DateParts {
    pub dow: Weekday,
    pub doy: u32,
    pub dom: u32,
    pub hr: u32,
    pub min: u32,
    /// 1 on Saturday and Sunday.
    pub is_wkd: u8,
    pub yr: i64,
    pub qtr: u32,
    pub mth: u32,
}

pub fn date_parts(ts: Timestamp) -> DateParts {
    let c = ts.civil();
    let dow = day_of_week(ts);
    let doy = days_from_civil(c.year, c.month, c.day) - days_from_civil(c.year, 1, 1) + 1;
    DateParts {
        dow,
        doy: doy as u32,
        dom: c.day,
        hr: c.hour,
        min: c.minute,
        is_wkd: u8::from(dow.is_weekend()),
        yr: c.year,
        qtr: c.month.div_ceil(3),
        mth: c.month,
    }
}

fn timestamps_of(col: &Column) -> Result<Vec<Option<Timestamp>>> {
    match col.data() {
        ColumnData::DateTime(v) => Ok(v.clone()),
        ColumnData::Categorical(v) => v
            .iter()
            .map(|s| {
                s.as_deref()
                    .map(|s| parse_timestamp(s).map_err(|_| col.wrong_dtype("DateTime")))
                    .transpose()
            })
            .collect(),
        _ => Err(col.wrong_dtype("DateTime")),
    }
}

fn part_columns(name: &str, stamps: &[Option<Timestamp>]) -> Vec<Column> {
    let parts: Vec<Option<DateParts>> = stamps.iter().map(|t| t.map(date_parts)).collect();
    let int = |suffix: &str, get: fn(&DateParts) -> i64| {
        Column::int(
            format!("{name}_{suffix}"),
            parts.iter().map(|p| p.as_ref().map(get)).collect(),
        )
    };
    vec![
        Column::categorical(
            format!("{name}_dow"),
            parts
                .iter()
                .map(|p| p.as_ref().map(|p| p.dow.name()))
                .collect(),
        ),
        int("doy", |p| i64::from(p.doy)),
        int("dom", |p| i64::from(p.dom)),
        int("hr", |p| i64::from(p.hr)),
        int("min", |p| i64::from(p.min)),
        int("is_wkd", |p| i64::from(p.is_wkd)),
        int("yr", |p| p.yr),
        int("qtr", |p| i64::from(p.qtr)),
        int("mth", |p| i64::from(p.mth)),
    ]
}

/// Appends `<col>_dow … <col>_mth` for each date column and, unless
/// `keep_original`, drops the source column.
///
/// Text columns are parsed as timestamps first and must parse completely.
pub fn extract_dates<S: AsRef<str>>(
    frame: &Frame,
    date_cols: &[S],
    keep_original: bool,
) -> Result<Frame> {
    let mut derived = Vec::new();
    for name in date_cols {
        let col = frame.column(name.as_ref())?;
        derived.extend(part_columns(col.name(), &timestamps_of(col)?));
    }
    let base = if keep_original {
        frame.clone()
    } else {
        frame.drop_columns(date_cols)?
    };
    base.with_columns(derived)
}

/// Daily means of one numeric feature.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeBucketSeries {
    pub feature: String,
    /// Midnight UTC of each day, strictly increasing.
    pub buckets: Vec<Timestamp>,
    pub values: Vec<f64>,
}

/// Groups rows by UTC calendar day of `time_col` and averages each numeric
/// column over its non-null cells. Days without data are absent.
pub fn timebucket_series<S: AsRef<str>>(
    frame: &Frame,
    num_cols: &[S],
    time_col: &str,
) -> Result<Vec<TimeBucketSeries>> {
    let time = frame.column(time_col)?;
    let ColumnData::DateTime(stamps) = time.data() else {
        return Err(time.wrong_dtype("DateTime"));
    };
    num_cols
        .iter()
        .map(|name| {
            let col = frame.column(name.as_ref())?;
            if !col.dtype().is_numeric() {
                return Err(col.wrong_dtype("numeric"));
            }
            let mut days: BTreeMap<Timestamp, Vec<f64>> = BTreeMap::new();
            for (r, ts) in stamps.iter().enumerate() {
                if let (Some(ts), Some(v)) = (ts, col.cell(r).as_f64()) {
                    days.entry(ts.floor_day()).or_default().push(v);
                }
            }
            let (buckets, values) = days
                .into_iter()
                .map(|(day, vals)| (day, stats::mean(&vals).expect("non-empty")))
                .unzip();
            Ok(TimeBucketSeries {
                feature: col.name().to_string(),
                buckets,
                values,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::{Cell, DType};
    use crate::Error;

    fn ts(s: &str) -> Timestamp {
        parse_timestamp(s).unwrap()
    }

    #[test]
    fn transaction_start_parts() {
        let p = date_parts(ts("2018-11-15T02:18:49Z"));
        assert_eq!(
            p,
            DateParts {
                dow: Weekday::Thursday,
                doy: 319,
                dom: 15,
                hr: 2,
                min: 18,
                is_wkd: 0,
                yr: 2018,
                qtr: 4,
                mth: 11
            }
        );
    }

    #[test]
    fn epoch_and_leap() {
        let p = date_parts(ts("1970-01-01T00:00:00Z"));
        assert_eq!(
            (p.dow, p.doy, p.qtr, p.is_wkd),
            (Weekday::Thursday, 1, 1, 0)
        );
        assert_eq!(date_parts(ts("2016-03-01T12:00:00Z")).doy, 61);
        assert_eq!(date_parts(ts("2016-12-31")).doy, 366);
        assert_eq!(day_of_week(ts("2000-03-01")), Weekday::Wednesday);
        assert_eq!(day_of_week(ts("1969-12-31T23:59:59Z")), Weekday::Wednesday);
        assert_eq!(day_of_week(ts("2018-11-17")), Weekday::Saturday);
        assert_eq!(date_parts(ts("2018-11-18")).is_wkd, 1);
    }

    #[test]
    fn extract_dates_columns() {
        let f = Frame::new(vec![
            Column::int("Amount", vec![Some(1000), Some(-20), Some(5)]),
            Column::categorical(
                "TransactionStartTime",
                vec![
                    Some("2018-11-15T02:18:49Z"),
                    Some("2018-11-15T02:19:08Z"),
                    None,
                ],
            ),
        ])
        .unwrap();
        let out = extract_dates(&f, &["TransactionStartTime"], false).unwrap();
        assert_eq!(out.n_cols(), 1 + 9);
        let expected: Vec<String> = std::iter::once("Amount".to_string())
            .chain(
                DATE_PART_SUFFIXES
                    .iter()
                    .map(|s| format!("TransactionStartTime_{s}")),
            )
            .collect();
        assert_eq!(out.names(), expected);
        assert_eq!(
            out.column("TransactionStartTime_dow").unwrap().cell(0),
            Cell::Str("Thursday")
        );
        assert_eq!(
            out.column("TransactionStartTime_min").unwrap().cell(1),
            Cell::Int(19)
        );
        assert_eq!(
            out.column("TransactionStartTime_yr").unwrap().cell(2),
            Cell::Null
        );

        let kept = extract_dates(&f, &["TransactionStartTime"], true).unwrap();
        assert_eq!(kept.n_cols(), 2 + 9);
    }

    #[test]
    fn extract_dates_errors() {
        let f = Frame::new(vec![
            Column::int("n", vec![Some(1)]),
            Column::categorical("s", vec![Some("nope")]),
        ])
        .unwrap();
        assert!(matches!(
            extract_dates(&f, &["n"], false),
            Err(Error::WrongDType { .. })
        ));
        assert!(matches!(
            extract_dates(&f, &["s"], false),
            Err(Error::WrongDType { .. })
        ));
        assert_eq!(
            extract_dates(&f, &["q"], false),
            Err(Error::UnknownColumn("q".into()))
        );
    }

    #[test]
    fn daily_buckets() {
        let f = Frame::new(vec![
            Column::datetime(
                "t",
                vec![
                    Some(ts("2020-01-02T10:00:00Z")),
                    Some(ts("2020-01-01T23:59:59Z")),
                    Some(ts("2020-01-01T00:00:00Z")),
                    Some(ts("2020-01-05")),
                    None,
                ],
            ),
            Column::float(
                "v",
                vec![Some(5.0), Some(1.0), Some(3.0), None, Some(100.0)],
            ),
            Column::categorical("c", vec![Some("a"); 5]),
        ])
        .unwrap();
        let s = timebucket_series(&f, &["v"], "t").unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].buckets, vec![ts("2020-01-01"), ts("2020-01-02")]);
        assert_eq!(s[0].values, vec![2.0, 5.0]);

        assert!(matches!(
            timebucket_series(&f, &["c"], "t"),
            Err(Error::WrongDType { .. })
        ));
        assert!(matches!(
            timebucket_series(&f, &["v"], "v"),
            Err(Error::WrongDType { .. })
        ));
        assert_eq!(f.column("t").unwrap().dtype(), DType::DateTime);
    }
}
