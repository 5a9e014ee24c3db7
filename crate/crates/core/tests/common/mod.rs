//! Independent oracles and fixture builders shared by the integration
//! tests. Nothing here calls the library routine it is used to check.
#![allow(dead_code)]

use serde_json::{json, Value};
use tabkit::rng::SplitMix64;

/// P(score_pos > score_neg) + ½·P(tie) over all positive/negative pairs.
pub fn brute_auc(y: &[u8], s: &[f64]) -> f64 {
    let mut wins = 0.0;
    let mut pairs = 0.0;
    for (i, &yi) in y.iter().enumerate() {
        for (j, &yj) in y.iter().enumerate() {
            if yi == 1 && yj == 0 {
                pairs += 1.0;
                if s[i] > s[j] {
                    wins += 1.0;
                } else if s[i] == s[j] {
                    wins += 0.5;
                }
            }
        }
    }
    wins / pairs
}

/// `ceil(n·f)` in exact integer arithmetic on the binary value of `f`,
/// for `f` in (0, 1).
pub fn exact_ceil(n: u64, f: f64) -> u64 {
    let bits = f.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mantissa, shift) = if exp == 0 {
        (frac, 1074)
    } else {
        (frac | (1u64 << 52), 1075 - exp)
    };
    let num = n as u128 * mantissa as u128;
    if num == 0 {
        return 0;
    }
    if shift >= 127 {
        return 1;
    }
    let den = 1u128 << shift;
    num.div_ceil(den) as u64
}

/// Textbook SplitMix64, written out again so preview sampling is checked
/// against something other than the crate's own generator.
pub struct Mix(pub u64);

impl Mix {
    pub fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }
}

pub fn oracle_shuffle(n: usize, seed: u64) -> Vec<usize> {
    let mut v: Vec<usize> = (0..n).collect();
    let mut g = Mix(seed);
    let mut i = n;
    while i > 1 {
        i -= 1;
        let j = (g.next() % (i as u64 + 1)) as usize;
        v.swap(i, j);
    }
    v
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kind {
    Int,
    Float,
    Bool,
    Text,
    IsoText,
}

/// Raw table: column names, kinds and per-row text (None = empty cell).
#[derive(Debug, Clone)]
pub struct RawTable {
    pub names: Vec<String>,
    pub kinds: Vec<Kind>,
    pub cells: Vec<Vec<Option<String>>>,
}

const WORDS: [&str; 7] = ["alpha", "beta", "gamma", "delta", "eps", "zeta", "eta"];

/// Random table with every kind represented and at least one value per
/// column.
pub fn random_table(rows: usize, seed: u64) -> RawTable {
    let mut g = SplitMix64::new(seed);
    let kinds = [
        Kind::Int,
        Kind::Float,
        Kind::Bool,
        Kind::Text,
        Kind::IsoText,
        Kind::Float,
        Kind::Int,
    ];
    let names: Vec<String> = (0..kinds.len()).map(|i| format!("col{i}")).collect();
    let null_rate = [0, 3, 10, 25][g.below(4)];
    let cells = (0..rows)
        .map(|r| {
            kinds
                .iter()
                .enumerate()
                .map(|(c, kind)| {
                    if r > 0 && g.below(100) < null_rate {
                        return None;
                    }
                    Some(match kind {
                        Kind::Int => {
                            let span = [3, 1000, 1_000_000_000][c % 3];
                            (g.below(2 * span) as i64 - span as i64).to_string()
                        }
                        Kind::Float => {
                            let v = (g.below(2_000_000) as f64 - 1_000_000.0) / 128.0;
                            let v = if c == 5 { v * 1e6 + 0.5 } else { v };
                            format!("{v:?}")
                        }
                        Kind::Bool => ["true", "false"][g.below(2)].to_string(),
                        Kind::Text => WORDS[g.below(WORDS.len())].to_string(),
                        Kind::IsoText => {
                            let t = 1_500_000_000 + g.below(100_000_000) as i64;
                            iso(t)
                        }
                    })
                })
                .collect()
        })
        .collect();
    RawTable {
        names,
        kinds: kinds.to_vec(),
        cells,
    }
}

fn iso(t: i64) -> String {
    chrono::DateTime::from_timestamp(t, 0)
        .unwrap()
        .format("%Y-%m-%dT%H:%M:%SZ")
        .to_string()
}

impl RawTable {
    pub fn to_csv(&self) -> String {
        let mut s = self.names.join(",");
        s.push('\n');
        for row in &self.cells {
            let fields: Vec<&str> = row.iter().map(|c| c.as_deref().unwrap_or("")).collect();
            s.push_str(&fields.join(","));
            s.push('\n');
        }
        s
    }

    fn column_values(&self, c: usize) -> Vec<Option<&str>> {
        self.cells.iter().map(|r| r[c].as_deref()).collect()
    }

    fn cell_json(&self, r: usize, c: usize) -> Value {
        match (&self.cells[r][c], self.kinds[c]) {
            (None, _) => Value::Null,
            (Some(t), Kind::Int) => json!(t.parse::<i64>().unwrap()),
            (Some(t), Kind::Float) => json!(t.parse::<f64>().unwrap()),
            (Some(t), Kind::Bool) => json!(t == "true"),
            (Some(t), _) => json!(t),
        }
    }

    fn dtype(kind: Kind) -> &'static str {
        match kind {
            Kind::Int => "Int",
            Kind::Float => "Float",
            Kind::Bool => "Bool",
            Kind::Text | Kind::IsoText => "Categorical",
        }
    }

    fn rows_json(&self, rows: &[usize]) -> Value {
        let columns: Vec<Value> = (0..self.names.len())
            .map(|c| {
                json!({
                    "name": self.names[c],
                    "dtype": Self::dtype(self.kinds[c]),
                    "values": rows.iter().map(|&r| self.cell_json(r, c)).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({ "n_rows": rows.len(), "columns": columns })
    }

    /// Flat-scan profile in the describe report's JSON layout.
    pub fn profile(&self, seed: u64) -> Value {
        let n = self.cells.len();
        let head: Vec<usize> = (0..n.min(5)).collect();
        let tail: Vec<usize> = (n.saturating_sub(5)..n).collect();
        let mut random: Vec<usize> = oracle_shuffle(n, seed).into_iter().take(5).collect();
        random.sort_unstable();

        let mut numerical = Vec::new();
        let mut categorical = Vec::new();
        let mut candidates = Vec::new();
        let mut stats = serde_json::Map::new();
        let mut unique = Vec::new();
        let mut missing = Vec::new();
        for (c, name) in self.names.iter().enumerate() {
            let vals = self.column_values(c);
            let present: Vec<&str> = vals.iter().flatten().copied().collect();
            match self.kinds[c] {
                Kind::Int | Kind::Float => {
                    numerical.push(name.clone());
                    let nums: Vec<f64> = present.iter().map(|t| t.parse().unwrap()).collect();
                    stats.insert(name.clone(), numeric_summary(&nums));
                }
                kind => {
                    categorical.push(name.clone());
                    let mut distinct = present.clone();
                    distinct.sort_unstable();
                    distinct.dedup();
                    unique.push(json!({"feature": name, "unique_count": distinct.len()}));
                    if kind == Kind::IsoText {
                        let sample: Vec<&&str> = present.iter().take(1000).collect();
                        let hits = sample
                            .iter()
                            .filter(|t| chrono::DateTime::parse_from_rfc3339(t).is_ok())
                            .count();
                        if hits * 100 >= 95 * sample.len() {
                            candidates.push(name.clone());
                        }
                    }
                }
            }
            let m = vals.iter().filter(|v| v.is_none()).count();
            let pct = if n == 0 {
                0.0
            } else {
                m as f64 * 100.0 / n as f64
            };
            missing.push(json!({"feature": name, "missing_count": m, "missing_percent": pct}));
        }
        let dtypes: serde_json::Map<String, Value> = self
            .names
            .iter()
            .zip(&self.kinds)
            .map(|(n, k)| (n.clone(), json!(Self::dtype(*k))))
            .collect();
        let notes: Vec<String> = candidates
            .iter()
            .map(|c| format!("Column '{c}' holds timestamp text; convert it with to_date"))
            .collect();
        json!({
            "head": self.rows_json(&head),
            "tail": self.rows_json(&tail),
            "random": self.rows_json(&random),
            "shape": [n, self.names.len()],
            "dtypes": dtypes,
            "classes": {
                "numerical": numerical,
                "categorical": categorical,
                "datetime": Vec::<String>::new(),
                "date_candidates": candidates,
            },
            "numeric_stats": stats,
            "unique": unique,
            "missing": missing,
            "notes": notes,
        })
    }
}

fn numeric_summary(values: &[f64]) -> Value {
    if values.is_empty() {
        return Value::Null;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let std = if values.len() < 2 {
        Value::Null
    } else {
        let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
        json!((ss / (n - 1.0)).sqrt())
    };
    let mut s = values.to_vec();
    s.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let q = |p: f64| {
        let h = p * (s.len() - 1) as f64;
        let lo = h.floor() as usize;
        let hi = h.ceil() as usize;
        s[lo] + (h - lo as f64) * (s[hi] - s[lo])
    };
    json!({
        "count": values.len(),
        "mean": mean,
        "std": std,
        "min": s[0],
        "q25": q(0.25),
        "q50": q(0.5),
        "q75": q(0.75),
        "max": s[s.len() - 1],
    })
}

/// Structural equality where numbers may differ by `rel` relative to
/// `max(1, |a|, |b|)`. Returns the first differing path.
pub fn json_close(a: &Value, b: &Value, rel: f64, path: &str) -> Result<(), String> {
    match (a, b) {
        (Value::Number(x), Value::Number(y)) => {
            let (x, y) = (x.as_f64().unwrap(), y.as_f64().unwrap());
            let scale = 1f64.max(x.abs()).max(y.abs());
            if (x - y).abs() <= rel * scale {
                Ok(())
            } else {
                Err(format!("{path}: {x} vs {y}"))
            }
        }
        (Value::Array(x), Value::Array(y)) => {
            if x.len() != y.len() {
                return Err(format!("{path}: length {} vs {}", x.len(), y.len()));
            }
            for (i, (p, q)) in x.iter().zip(y).enumerate() {
                json_close(p, q, rel, &format!("{path}[{i}]"))?;
            }
            Ok(())
        }
        (Value::Object(x), Value::Object(y)) => {
            let kx: Vec<&String> = x.keys().collect();
            let ky: Vec<&String> = y.keys().collect();
            if kx != ky {
                return Err(format!("{path}: keys {kx:?} vs {ky:?}"));
            }
            for (k, v) in x {
                json_close(v, &y[k], rel, &format!("{path}.{k}"))?;
            }
            Ok(())
        }
        _ if a == b => Ok(()),
        _ => Err(format!("{path}: {a} vs {b}")),
    }
}

/// Label and prediction vectors realizing the given confusion counts.
pub fn confusion_vectors(tn: usize, fp: usize, fn_: usize, tp: usize) -> (Vec<u8>, Vec<u8>) {
    let mut t = Vec::new();
    let mut p = Vec::new();
    for (count, a, b) in [(tn, 0, 0), (fp, 0, 1), (fn_, 1, 0), (tp, 1, 1)] {
        t.extend(std::iter::repeat_n(a, count));
        p.extend(std::iter::repeat_n(b, count));
    }
    (t, p)
}
