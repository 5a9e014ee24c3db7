//! Column type inference over raw text cells.

use super::timestamp::{parse_timestamp, Timestamp};
use super::DType;

/// Share of sampled values (in percent) that must parse for a dtype to win.
pub const THRESHOLD_PERCENT: usize = 95;

fn trim(s: &str) -> &str {
    s.trim_matches(|c: char| c.is_ascii_whitespace())
}

/// Optional sign followed by one or more ASCII digits.
pub(crate) fn is_integer_shaped(s: &str) -> bool {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
}

pub(crate) fn parse_int(s: &str) -> Option<i64> {
    let s = trim(s);
    if is_integer_shaped(s) {
        s.parse().ok()
    } else {
        None
    }
}

pub(crate) fn parse_float(s: &str) -> Option<f64> {
    trim(s).parse::<f64>().ok().filter(|v| v.is_finite())
}

pub(crate) fn parse_bool(s: &str) -> Option<bool> {
    match trim(s) {
        "true" | "True" | "1" => Some(true),
        "false" | "False" | "0" => Some(false),
        _ => None,
    }
}

pub(crate) fn parse_datetime(s: &str) -> Option<Timestamp> {
    parse_timestamp(s).ok()
}

fn meets_threshold(hits: usize, total: usize) -> bool {
    total > 0 && hits * 100 >= THRESHOLD_PERCENT * total
}

/// Picks the first of Int, Float, Bool, DateTime, Categorical for which at
/// least 95% of `raw` parses.
///
/// An integer-looking value that overflows `i64` rules Int out. Bool needs
/// at least one textual `true`/`false` token; a column of bare 0/1 stays
/// numeric.
pub fn infer_dtype<S: AsRef<str>>(raw: &[S]) -> DType {
    infer_dtype_with(raw, true)
}

/// [`infer_dtype`] with DateTime detection optionally disabled, in which
/// case timestamp-like text stays Categorical.
pub fn infer_dtype_with<S: AsRef<str>>(raw: &[S], detect_datetime: bool) -> DType {
    let n = raw.len();
    let count = |f: &dyn Fn(&str) -> bool| raw.iter().filter(|s| f(s.as_ref())).count();

    let overflow = raw.iter().any(|s| {
        let t = trim(s.as_ref());
        is_integer_shaped(t) && t.parse::<i64>().is_err()
    });
    if !overflow && meets_threshold(count(&|s| parse_int(s).is_some()), n) {
        return DType::Int;
    }
    if meets_threshold(count(&|s| parse_float(s).is_some()), n) {
        return DType::Float;
    }
    let has_word = raw
        .iter()
        .any(|s| matches!(trim(s.as_ref()), "true" | "false" | "True" | "False"));
    if has_word && meets_threshold(count(&|s| parse_bool(s).is_some()), n) {
        return DType::Bool;
    }
    if detect_datetime && meets_threshold(count(&|s| parse_datetime(s).is_some()), n) {
        return DType::DateTime;
    }
    DType::Categorical
}
