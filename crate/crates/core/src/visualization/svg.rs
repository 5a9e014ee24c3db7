//! Plain SVG 1.1 output for [`PlotSpec`]s.

use std::fmt::Write;

use super::{BoxStats, PlotSpec, Series};

const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 60.0;
const PALETTE: [&str; 10] = [
    "#4c72b0", "#dd8452", "#55a868", "#c44e52", "#8172b3", "#937860", "#da8bc3", "#8c8c8c",
    "#ccb974", "#64b5cd",
];
const MAX_LABEL_CHARS: usize = 14;

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c if (c as u32) < 0x20 && c != '\t' => out.push(' '),
            c => out.push(c),
        }
    }
    out
}

fn short(label: &str) -> String {
    if label.chars().count() <= MAX_LABEL_CHARS {
        label.to_string()
    } else {
        let mut s: String = label.chars().take(MAX_LABEL_CHARS - 1).collect();
        s.push('…');
        s
    }
}

fn fmt_tick(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e15 {
        format!("{v:.0}")
    } else if v.abs() >= 1e5 || v.abs() < 1e-3 {
        format!("{v:.2e}")
    } else {
        let s = format!("{v:.3}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

/// Round tick positions covering `[lo, hi]`.
fn nice_ticks(lo: f64, hi: f64) -> Vec<f64> {
    let (lo, hi) = if lo == hi {
        (lo - 1.0, hi + 1.0)
    } else {
        (lo, hi)
    };
    let raw = (hi - lo) / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .into_iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag);
    let start = (lo / step).floor() as i64;
    let end = (hi / step).ceil() as i64;
    (start..=end).map(|i| i as f64 * step).collect()
}

/// Maps a data interval onto a pixel interval.
#[derive(Clone, Copy)]
struct Scale {
    d0: f64,
    d1: f64,
    p0: f64,
    p1: f64,
}

impl Scale {
    fn at(&self, v: f64) -> f64 {
        if self.d1 == self.d0 {
            return (self.p0 + self.p1) / 2.0;
        }
        self.p0 + (v - self.d0) / (self.d1 - self.d0) * (self.p1 - self.p0)
    }
}

struct Canvas {
    out: String,
    left: f64,
    right: f64,
    top: f64,
    bottom: f64,
}

impl Canvas {
    fn new(spec: &PlotSpec) -> Self {
        let (w, h) = (f64::from(spec.width), f64::from(spec.height));
        let mut out = String::new();
        out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        let _ = writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\" font-family=\"sans-serif\">",
            spec.width, spec.height, spec.width, spec.height
        );
        let _ = writeln!(
            out,
            "<rect x=\"0\" y=\"0\" width=\"{w}\" height=\"{h}\" fill=\"#ffffff\"/>"
        );
        let _ = writeln!(
            out,
            "<text class=\"title\" x=\"{:.2}\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">{}</text>",
            w / 2.0,
            escape(&spec.title)
        );
        // Keep a usable plot area on very small canvases.
        let left = MARGIN_LEFT.min(w * 0.3);
        let right = (w - MARGIN_RIGHT.min(w * 0.1)).max(left + 1.0);
        let top = MARGIN_TOP.min(h * 0.2);
        let bottom = (h - MARGIN_BOTTOM.min(h * 0.3)).max(top + 1.0);
        Self {
            out,
            left,
            right,
            top,
            bottom,
        }
    }

    fn axes(&mut self, x_label: &str, y_label: &str) {
        let _ = writeln!(
            self.out,
            "<line class=\"axis\" x1=\"{l:.2}\" y1=\"{b:.2}\" x2=\"{r:.2}\" y2=\"{b:.2}\" stroke=\"#000000\"/>\n<line class=\"axis\" x1=\"{l:.2}\" y1=\"{t:.2}\" x2=\"{l:.2}\" y2=\"{b:.2}\" stroke=\"#000000\"/>",
            l = self.left,
            r = self.right,
            t = self.top,
            b = self.bottom
        );
        let _ = writeln!(
            self.out,
            "<text class=\"x-label\" x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-size=\"12\">{}</text>",
            (self.left + self.right) / 2.0,
            self.bottom + 42.0,
            escape(x_label)
        );
        let (cx, cy) = (16.0, (self.top + self.bottom) / 2.0);
        let _ = writeln!(
            self.out,
            "<text class=\"y-label\" x=\"{cx:.2}\" y=\"{cy:.2}\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 {cx:.2} {cy:.2})\">{}</text>",
            escape(y_label)
        );
    }

    fn y_scale(&mut self, lo: f64, hi: f64) -> Scale {
        let ticks = nice_ticks(lo, hi);
        let scale = Scale {
            d0: ticks[0],
            d1: ticks[ticks.len() - 1],
            p0: self.bottom,
            p1: self.top,
        };
        for t in ticks {
            let y = scale.at(t);
            let _ = writeln!(
                self.out,
                "<line class=\"tick\" x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"#000000\"/><text class=\"tick-label\" x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\" font-size=\"10\">{}</text>",
                self.left - 4.0,
                self.left,
                self.left - 6.0,
                y + 3.0,
                fmt_tick(t)
            );
        }
        scale
    }

    fn x_tick(&mut self, x: f64, label: &str) {
        let _ = writeln!(
            self.out,
            "<line class=\"tick\" x1=\"{x:.2}\" y1=\"{b:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\" stroke=\"#000000\"/><text class=\"tick-label\" x=\"{x:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-size=\"10\">{}</text>",
            self.bottom + 4.0,
            self.bottom + 16.0,
            escape(&short(label)),
            b = self.bottom,
        );
    }

    fn rect(&mut self, class: &str, x: f64, y: f64, w: f64, h: f64, fill: &str) {
        let _ = writeln!(
            self.out,
            "<rect class=\"{class}\" x=\"{x:.2}\" y=\"{y:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"{fill}\"/>",
            w.max(0.0),
            h.max(0.0)
        );
    }

    fn finish(mut self) -> String {
        self.out.push_str("</svg>\n");
        self.out
    }
}

fn max_or_one(values: impl Iterator<Item = f64>) -> f64 {
    let m = values.fold(0.0, f64::max);
    if m > 0.0 {
        m
    } else {
        1.0
    }
}

fn draw_bars(c: &mut Canvas, labels: &[String], heights: &[f64]) {
    let y = c.y_scale(0.0, max_or_one(heights.iter().copied()));
    let slot = (c.right - c.left) / labels.len().max(1) as f64;
    for (i, (label, &h)) in labels.iter().zip(heights).enumerate() {
        let x = c.left + i as f64 * slot;
        let top = y.at(h);
        c.rect(
            "bar",
            x + slot * 0.1,
            top,
            slot * 0.8,
            c.bottom - top,
            PALETTE[0],
        );
        c.x_tick(x + slot / 2.0, label);
    }
}

fn draw_groups(c: &mut Canvas, groups: &[String], keys: &[String], counts: &[Vec<f64>]) {
    let y = c.y_scale(0.0, max_or_one(counts.iter().flatten().copied()));
    let slot = (c.right - c.left) / groups.len().max(1) as f64;
    let bar = slot * 0.8 / keys.len().max(1) as f64;
    for (g, (label, row)) in groups.iter().zip(counts).enumerate() {
        let x0 = c.left + g as f64 * slot + slot * 0.1;
        for (k, &h) in row.iter().enumerate() {
            let top = y.at(h);
            c.rect(
                "bar",
                x0 + k as f64 * bar,
                top,
                bar,
                c.bottom - top,
                PALETTE[k % PALETTE.len()],
            );
        }
        c.x_tick(c.left + (g as f64 + 0.5) * slot, label);
    }
    for (k, key) in keys.iter().enumerate() {
        let ly = c.top + 4.0 + k as f64 * 14.0;
        let lx = c.right - 80.0;
        c.rect("legend", lx, ly, 10.0, 10.0, PALETTE[k % PALETTE.len()]);
        let _ = writeln!(
            c.out,
            "<text class=\"legend-label\" x=\"{:.2}\" y=\"{:.2}\" font-size=\"10\">{}</text>",
            lx + 14.0,
            ly + 9.0,
            escape(&short(key))
        );
    }
}

fn draw_bins(c: &mut Canvas, edges: &[f64], counts: &[u64]) {
    let y = c.y_scale(0.0, max_or_one(counts.iter().map(|&n| n as f64)));
    let x = Scale {
        d0: edges[0],
        d1: edges[edges.len() - 1],
        p0: c.left,
        p1: c.right,
    };
    for (i, &n) in counts.iter().enumerate() {
        let (x0, x1) = (x.at(edges[i]), x.at(edges[i + 1]));
        let top = y.at(n as f64);
        c.rect("bar", x0, top, x1 - x0, c.bottom - top, PALETTE[0]);
    }
    for &e in edges {
        c.x_tick(x.at(e), &fmt_tick(e));
    }
}

fn draw_box(c: &mut Canvas, b: &BoxStats) {
    let lo = b
        .outliers
        .iter()
        .copied()
        .fold(b.whisker_low.min(b.q25), f64::min);
    let hi = b
        .outliers
        .iter()
        .copied()
        .fold(b.whisker_high.max(b.q75), f64::max);
    let y = c.y_scale(lo, hi);
    let mid = (c.left + c.right) / 2.0;
    let half = (c.right - c.left) * 0.15;
    c.rect(
        "box",
        mid - half,
        y.at(b.q75),
        2.0 * half,
        y.at(b.q25) - y.at(b.q75),
        PALETTE[0],
    );
    let line = |c: &mut Canvas, class: &str, x1: f64, y1: f64, x2: f64, y2: f64| {
        let _ = writeln!(
            c.out,
            "<line class=\"{class}\" x1=\"{x1:.2}\" y1=\"{y1:.2}\" x2=\"{x2:.2}\" y2=\"{y2:.2}\" stroke=\"#000000\"/>"
        );
    };
    line(
        c,
        "median",
        mid - half,
        y.at(b.q50),
        mid + half,
        y.at(b.q50),
    );
    line(c, "whisker", mid, y.at(b.q75), mid, y.at(b.whisker_high));
    line(c, "whisker", mid, y.at(b.q25), mid, y.at(b.whisker_low));
    line(
        c,
        "whisker",
        mid - half / 2.0,
        y.at(b.whisker_high),
        mid + half / 2.0,
        y.at(b.whisker_high),
    );
    line(
        c,
        "whisker",
        mid - half / 2.0,
        y.at(b.whisker_low),
        mid + half / 2.0,
        y.at(b.whisker_low),
    );
    for &o in &b.outliers {
        let _ = writeln!(
            c.out,
            "<circle class=\"outlier\" cx=\"{mid:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"none\" stroke=\"#000000\"/>",
            y.at(o)
        );
    }
}

fn draw_line(c: &mut Canvas, xs: &[f64], labels: &[String], ys: &[f64]) {
    if xs.is_empty() {
        c.y_scale(0.0, 1.0);
        return;
    }
    let (ylo, yhi) = ys
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| {
            (a.min(v), b.max(v))
        });
    let y = c.y_scale(ylo, yhi);
    let (pad0, pad1) = (c.left + 10.0, c.right - 10.0);
    let x = Scale {
        d0: xs[0],
        d1: xs[xs.len() - 1],
        p0: pad0,
        p1: pad1,
    };
    let points: Vec<String> = xs
        .iter()
        .zip(ys)
        .map(|(&a, &b)| format!("{:.2},{:.2}", x.at(a), y.at(b)))
        .collect();
    let _ = writeln!(
        c.out,
        "<polyline class=\"series\" points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"/>",
        points.join(" "),
        PALETTE[0]
    );
    let step = xs.len().div_ceil(5).max(1);
    for i in (0..xs.len()).step_by(step) {
        c.x_tick(x.at(xs[i]), &labels[i]);
    }
}

fn draw_matrix(c: &mut Canvas, rows: &[String], cols: &[String], cells: &[Vec<f64>]) {
    let max = max_or_one(cells.iter().flatten().copied());
    let cw = (c.right - c.left) / cols.len().max(1) as f64;
    let ch = (c.bottom - c.top) / rows.len().max(1) as f64;
    for (i, row) in cells.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            let shade = 255 - (v / max * 200.0).round().clamp(0.0, 200.0) as u8;
            let fill = format!("#{shade:02x}{shade:02x}ff");
            let (x, y) = (c.left + j as f64 * cw, c.top + i as f64 * ch);
            c.rect("cell", x, y, cw, ch, &fill);
            let _ = writeln!(
                c.out,
                "<text class=\"cell-value\" x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-size=\"12\">{}</text>",
                x + cw / 2.0,
                y + ch / 2.0 + 4.0,
                fmt_tick(v)
            );
        }
    }
    for (j, label) in cols.iter().enumerate() {
        c.x_tick(c.left + (j as f64 + 0.5) * cw, label);
    }
    for (i, label) in rows.iter().enumerate() {
        let _ = writeln!(
            c.out,
            "<text class=\"tick-label\" x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\" font-size=\"10\">{}</text>",
            c.left - 6.0,
            c.top + (i as f64 + 0.5) * ch,
            escape(&short(label))
        );
    }
}

/// Renders a spec as a standalone SVG document. Output bytes depend only on
/// the spec.
pub fn render_svg(spec: &PlotSpec) -> String {
    let mut c = Canvas::new(spec);
    c.axes(&spec.x_label, &spec.y_label);
    match &spec.series {
        Series::Bars { labels, heights } => draw_bars(&mut c, labels, heights),
        Series::Groups {
            groups,
            keys,
            counts,
        } => draw_groups(&mut c, groups, keys, counts),
        Series::Bins { edges, counts } => draw_bins(&mut c, edges, counts),
        Series::Box(b) => draw_box(&mut c, b),
        Series::Line { x, x_labels, y } => draw_line(&mut c, x, x_labels, y),
        Series::Matrix {
            row_labels,
            col_labels,
            cells,
        } => draw_matrix(&mut c, row_labels, col_labels, cells),
    }
    c.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ticks_cover_range() {
        let t = nice_ticks(0.0, 7.0);
        assert!(t[0] <= 0.0 && *t.last().unwrap() >= 7.0);
        assert!(nice_ticks(3.0, 3.0).len() >= 2);
        assert_eq!(fmt_tick(2.0), "2");
        assert_eq!(fmt_tick(0.25), "0.25");
    }

    #[test]
    fn escapes_markup() {
        assert_eq!(escape("a<b & \"c\""), "a&lt;b &amp; &quot;c&quot;");
    }
}
