//! RFC 4180 CSV reading and writing with per-column type inference.
//!
//! LF and CRLF record terminators are accepted; output always uses LF.
//! Quoted fields may contain delimiters, doubled quotes and newlines.

use super::infer::{
    infer_dtype_with, is_integer_shaped, parse_bool, parse_datetime, parse_float, parse_int,
};
use super::{Column, ColumnData, DType, Frame};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CsvOptions {
    pub delimiter: u8,
    pub has_header: bool,
    /// Compared after trimming surrounding ASCII whitespace.
    pub null_tokens: Vec<String>,
    /// Number of leading non-null values per column used for inference.
    pub inference_sample: usize,
    /// When false, timestamp-like text is left Categorical.
    pub infer_datetime: bool,
}

impl Default for CsvOptions {
    fn default() -> Self {
        Self {
            delimiter: b',',
            has_header: true,
            null_tokens: ["", "NA", "NaN", "null", "NULL"]
                .into_iter()
                .map(String::from)
                .collect(),
            inference_sample: 1000,
            infer_datetime: true,
        }
    }
}

impl CsvOptions {
    fn is_null(&self, raw: &str) -> bool {
        let t = raw.trim_matches(|c: char| c.is_ascii_whitespace());
        self.null_tokens.iter().any(|tok| tok == t)
    }
}

struct Record {
    line: usize,
    fields: Vec<String>,
    /// An empty physical line with no delimiter or quote.
    blank: bool,
}

fn tokenize(text: &str, delimiter: u8) -> Result<Vec<Record>> {
    let bytes = text.as_bytes();
    let mut records = Vec::new();
    let mut fields: Vec<String> = Vec::new();
    let mut field: Vec<u8> = Vec::new();
    let mut line = 1;
    let mut record_line = 1;
    let mut started = false;
    let mut in_quotes = false;
    let mut quoted = false;

    // Only ASCII bytes are ever matched, so splitting a multi-byte UTF-8
    // sequence is impossible and each field stays valid UTF-8.
    let take = |field: &mut Vec<u8>| String::from_utf8(std::mem::take(field)).expect("utf-8");

    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        if in_quotes {
            if b == b'"' {
                if bytes.get(i + 1) == Some(&b'"') {
                    field.push(b'"');
                    i += 1;
                } else {
                    in_quotes = false;
                }
            } else {
                if b == b'\n' {
                    line += 1;
                }
                field.push(b);
            }
            i += 1;
            continue;
        }
        match b {
            b'"' if field.is_empty() && !quoted => {
                in_quotes = true;
                quoted = true;
                started = true;
            }
            b'\r' if bytes.get(i + 1) == Some(&b'\n') => {}
            b'\n' => {
                fields.push(take(&mut field));
                records.push(Record {
                    line: record_line,
                    blank: !started,
                    fields: std::mem::take(&mut fields),
                });
                line += 1;
                record_line = line;
                started = false;
                quoted = false;
            }
            _ if b == delimiter => {
                fields.push(take(&mut field));
                started = true;
                quoted = false;
            }
            _ => {
                field.push(b);
                started = true;
            }
        }
        i += 1;
    }
    if in_quotes {
        return Err(Error::UnterminatedQuote(record_line));
    }
    if started {
        fields.push(take(&mut field));
        records.push(Record {
            line: record_line,
            blank: false,
            fields,
        });
    }
    Ok(records)
}

/// Parses CSV bytes into a typed [`Frame`].
///
/// Blank lines are a single null cell in one-column files and are skipped
/// otherwise.
pub fn parse_csv(source: &[u8], options: &CsvOptions) -> Result<Frame> {
    let text = std::str::from_utf8(source).map_err(|e| Error::Utf8(e.valid_up_to()))?;
    let mut records = tokenize(text, options.delimiter)?.into_iter();

    let first = records.next().ok_or(Error::EmptyInput)?;
    let width = first.fields.len();
    let (names, mut rows): (Vec<String>, Vec<Vec<String>>) = if options.has_header {
        let names = first
            .fields
            .into_iter()
            .enumerate()
            .map(|(i, n)| {
                if n.is_empty() {
                    format!("unnamed_{i}")
                } else {
                    n
                }
            })
            .collect();
        (names, Vec::new())
    } else {
        let names = (0..width).map(|i| format!("column_{i}")).collect();
        (names, vec![first.fields])
    };

    for rec in records {
        if rec.blank && width > 1 {
            continue;
        }
        if rec.fields.len() != width {
            return Err(Error::RaggedRow {
                line: rec.line,
                expected: width,
                found: rec.fields.len(),
            });
        }
        rows.push(rec.fields);
    }

    let columns = names
        .into_iter()
        .enumerate()
        .map(|(c, name)| {
            let raw: Vec<Option<&str>> = rows
                .iter()
                .map(|r| Some(r[c].as_str()).filter(|s| !options.is_null(s)))
                .collect();
            Column::new(name, convert(&raw, options))
        })
        .collect();
    Frame::new(columns)
}

fn convert(raw: &[Option<&str>], options: &CsvOptions) -> ColumnData {
    let sample: Vec<&str> = raw
        .iter()
        .flatten()
        .take(options.inference_sample)
        .copied()
        .collect();
    let dtype = if sample.is_empty() {
        DType::Categorical
    } else {
        infer_dtype_with(&sample, options.infer_datetime)
    };

    let mut dtype = dtype;
    loop {
        match dtype {
            DType::Int => {
                let overflow = raw
                    .iter()
                    .flatten()
                    .any(|s| parse_int(s).is_none() && is_integer_shaped(s.trim()));
                if overflow {
                    dtype = DType::Float;
                    continue;
                }
                return ColumnData::Int(raw.iter().map(|s| s.and_then(parse_int)).collect());
            }
            DType::Float => {
                let lost = raw
                    .iter()
                    .flatten()
                    .any(|s| parse_float(s).is_none() && is_integer_shaped(s.trim()));
                if lost {
                    dtype = DType::Categorical;
                    continue;
                }
                return ColumnData::Float(raw.iter().map(|s| s.and_then(parse_float)).collect());
            }
            DType::Bool => {
                return ColumnData::Bool(raw.iter().map(|s| s.and_then(parse_bool)).collect())
            }
            DType::DateTime => {
                return ColumnData::DateTime(
                    raw.iter().map(|s| s.and_then(parse_datetime)).collect(),
                )
            }
            DType::Categorical => {
                return ColumnData::Categorical(raw.iter().map(|s| s.map(String::from)).collect())
            }
        }
    }
}

fn push_field(out: &mut String, text: &str, delimiter: u8) {
    let delim = delimiter as char;
    if text.contains([delim, '"', '\n', '\r']) {
        out.push('"');
        out.push_str(&text.replace('"', "\"\""));
        out.push('"');
    } else {
        out.push_str(text);
    }
}

/// Serializes a frame; nulls become the first null token.
pub fn write_csv(frame: &Frame, options: &CsvOptions) -> Vec<u8> {
    let null = options.null_tokens.first().map_or("", String::as_str);
    let delim = options.delimiter as char;
    let mut out = String::new();
    let emit_row = |out: &mut String, cells: &mut dyn Iterator<Item = Option<String>>| {
        for (i, cell) in cells.enumerate() {
            if i > 0 {
                out.push(delim);
            }
            match cell {
                Some(text) => push_field(out, &text, options.delimiter),
                None => push_field(out, null, options.delimiter),
            }
        }
        out.push('\n');
    };
    if options.has_header {
        emit_row(
            &mut out,
            &mut frame.names().into_iter().map(|n| Some(n.to_string())),
        );
    }
    for r in 0..frame.n_rows() {
        emit_row(
            &mut out,
            &mut frame.columns().iter().map(|c| c.cell(r).to_text()),
        );
    }
    out.into_bytes()
}
