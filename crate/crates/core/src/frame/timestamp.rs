//! UTC timestamps with second resolution and proleptic Gregorian civil
//! conversions.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SECONDS_PER_DAY: i64 = 86_400;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Timestamp {
    pub epoch_s: i64,
}

/// Broken-down UTC calendar fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Civil {
    pub year: i64,
    pub month: u32,
    pub day: u32,
    pub hour: u32,
    pub minute: u32,
    pub second: u32,
}

pub fn is_leap_year(year: i64) -> bool {
    year % 4 == 0 && (year % 100 != 0 || year % 400 == 0)
}

pub fn days_in_month(year: i64, month: u32) -> u32 {
    match month {
        1 | 3 | 5 | 7 | 8 | 10 | 12 => 31,
        4 | 6 | 9 | 11 => 30,
        2 if is_leap_year(year) => 29,
        2 => 28,
        _ => 0,
    }
}

/// Days since 1970-01-01 for a proleptic Gregorian date.
pub fn days_from_civil(year: i64, month: u32, day: u32) -> i64 {
    let y = if month <= 2 { year - 1 } else { year };
    let era = y.div_euclid(400);
    let yoe = y - era * 400;
    let m = i64::from(month);
    let mp = if m > 2 { m - 3 } else { m + 9 };
    let doy = (153 * mp + 2) / 5 + i64::from(day) - 1;
    let doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    era * 146_097 + doe - 719_468
}

/// Inverse of [`days_from_civil`].
pub fn civil_from_days(days: i64) -> (i64, u32, u32) {
    let z = days + 719_468;
    let era = z.div_euclid(146_097);
    let doe = z - era * 146_097;
    let yoe = (doe - doe / 1460 + doe / 36_524 - doe / 146_096) / 365;
    let doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    let mp = (5 * doy + 2) / 153;
    let day = (doy - (153 * mp + 2) / 5 + 1) as u32;
    let month = if mp < 10 { mp + 3 } else { mp - 9 } as u32;
    let year = yoe + era * 400 + i64::from(month <= 2);
    (year, month, day)
}

impl Timestamp {
    pub fn from_epoch(epoch_s: i64) -> Self {
        Self { epoch_s }
    }

    /// Builds a timestamp from civil fields, validating calendar ranges.
    pub fn from_civil(c: Civil) -> Result<Self> {
        if !(1..=12).contains(&c.month)
            || c.day == 0
            || c.day > days_in_month(c.year, c.month)
            || c.hour > 23
            || c.minute > 59
            || c.second > 59
        {
            return Err(Error::Range(format!(
                "{:04}-{:02}-{:02} {:02}:{:02}:{:02}",
                c.year, c.month, c.day, c.hour, c.minute, c.second
            )));
        }
        let days = days_from_civil(c.year, c.month, c.day);
        let secs = i64::from(c.hour) * 3600 + i64::from(c.minute) * 60 + i64::from(c.second);
        Ok(Self::from_epoch(days * SECONDS_PER_DAY + secs))
    }

    pub fn days_from_epoch(self) -> i64 {
        self.epoch_s.div_euclid(SECONDS_PER_DAY)
    }

    pub fn civil(self) -> Civil {
        let (year, month, day) = civil_from_days(self.days_from_epoch());
        let sod = self.epoch_s.rem_euclid(SECONDS_PER_DAY) as u32;
        Civil {
            year,
            month,
            day,
            hour: sod / 3600,
            minute: sod % 3600 / 60,
            second: sod % 60,
        }
    }

    pub fn year(self) -> i64 {
        self.civil().year
    }
    pub fn month(self) -> u32 {
        self.civil().month
    }
    pub fn day(self) -> u32 {
        self.civil().day
    }
    pub fn hour(self) -> u32 {
        self.civil().hour
    }
    pub fn minute(self) -> u32 {
        self.civil().minute
    }
    pub fn second(self) -> u32 {
        self.civil().second
    }

    /// Midnight UTC of the same calendar day.
    pub fn floor_day(self) -> Self {
        Self::from_epoch(self.days_from_epoch() * SECONDS_PER_DAY)
    }

    pub fn date_string(self) -> String {
        let c = self.civil();
        format!("{:04}-{:02}-{:02}", c.year, c.month, c.day)
    }
}

impl fmt::Display for Timestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.civil();
        write!(
            f,
            "{:04}-{:02}-{:02}T{:02}:{:02}:{:02}Z",
            c.year, c.month, c.day, c.hour, c.minute, c.second
        )
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn digits(&mut self, n: usize) -> Option<u32> {
        let chunk = self.bytes.get(self.pos..self.pos + n)?;
        let mut v = 0u32;
        for &b in chunk {
            if !b.is_ascii_digit() {
                return None;
            }
            v = v * 10 + u32::from(b - b'0');
        }
        self.pos += n;
        Some(v)
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.bytes.get(self.pos) == Some(&b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn done(&self) -> bool {
        self.pos == self.bytes.len()
    }
}

/// Parses `YYYY-MM-DDTHH:MM:SS[.fff][Z|±HH:MM]`, `YYYY-MM-DD HH:MM:SS` or
/// `YYYY-MM-DD`. Offsets are folded into UTC; fractional seconds are
/// truncated.
pub fn parse_timestamp(text: &str) -> Result<Timestamp> {
    let trimmed = text.trim_matches(|c: char| c.is_ascii_whitespace());
    let fail = || Error::Parse(text.to_string());
    let mut cur = Cursor {
        bytes: trimmed.as_bytes(),
        pos: 0,
    };

    let year = cur.digits(4).ok_or_else(fail)?;
    if !cur.eat(b'-') {
        return Err(fail());
    }
    let month = cur.digits(2).ok_or_else(fail)?;
    if !cur.eat(b'-') {
        return Err(fail());
    }
    let day = cur.digits(2).ok_or_else(fail)?;

    let mut civil = Civil {
        year: i64::from(year),
        month,
        day,
        hour: 0,
        minute: 0,
        second: 0,
    };
    let mut offset_s = 0i64;

    if !cur.done() {
        let iso = match cur.peek() {
            Some(b'T') => true,
            Some(b' ') => false,
            _ => return Err(fail()),
        };
        cur.pos += 1;
        civil.hour = cur.digits(2).ok_or_else(fail)?;
        if !cur.eat(b':') {
            return Err(fail());
        }
        civil.minute = cur.digits(2).ok_or_else(fail)?;
        if !cur.eat(b':') {
            return Err(fail());
        }
        civil.second = cur.digits(2).ok_or_else(fail)?;

        if iso {
            if cur.eat(b'.') {
                let start = cur.pos;
                while cur.peek().is_some_and(|b| b.is_ascii_digit()) {
                    cur.pos += 1;
                }
                if cur.pos == start {
                    return Err(fail());
                }
            }
            match cur.peek() {
                Some(b'Z') => cur.pos += 1,
                Some(sign @ (b'+' | b'-')) => {
                    cur.pos += 1;
                    let oh = cur.digits(2).ok_or_else(fail)?;
                    if !cur.eat(b':') {
                        return Err(fail());
                    }
                    let om = cur.digits(2).ok_or_else(fail)?;
                    if oh > 23 || om > 59 {
                        return Err(Error::Range(text.to_string()));
                    }
                    let magnitude = i64::from(oh) * 3600 + i64::from(om) * 60;
                    offset_s = if sign == b'+' { magnitude } else { -magnitude };
                }
                _ => {}
            }
        }
        if !cur.done() {
            return Err(fail());
        }
    }

    let local = Timestamp::from_civil(civil).map_err(|_| Error::Range(text.to_string()))?;
    Ok(Timestamp::from_epoch(local.epoch_s - offset_s))
}
