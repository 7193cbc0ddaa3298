//! Minimal static SVG charts. Output depends only on the data, so reruns
//! are byte-identical.

use std::fmt::Write;

use jtd::ensemble::Histogram;

const W: f64 = 640.0;
const H: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 36.0;
const BOTTOM: f64 = 50.0;
const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e"];

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn new(x: (f64, f64), y: (f64, f64)) -> Self {
        let widen = |(a, b): (f64, f64)| if b > a { (a, b) } else { (a - 0.5, a + 0.5) };
        Self {
            x: widen(x),
            y: widen(y),
        }
    }

    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x.0) / (self.x.1 - self.x.0) * (W - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        H - BOTTOM - (y - self.y.0) / (self.y.1 - self.y.0) * (H - TOP - BOTTOM)
    }
}

fn tick(v: f64) -> String {
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn open(out: &mut String, f: &Frame, title: &str, xlabel: &str, ylabel: &str) {
    let _ = write!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">
<rect width="{W}" height="{H}" fill="white"/>
<text x="{:.1}" y="20" text-anchor="middle" font-size="14">{}</text>
<rect x="{LEFT}" y="{TOP}" width="{:.1}" height="{:.1}" fill="none" stroke="black"/>
"#,
        W / 2.0,
        escape(title),
        W - LEFT - RIGHT,
        H - TOP - BOTTOM
    );
    for k in 0..=4 {
        let xv = f.x.0 + (f.x.1 - f.x.0) * k as f64 / 4.0;
        let yv = f.y.0 + (f.y.1 - f.y.0) * k as f64 / 4.0;
        let (x, y) = (f.px(xv), f.py(yv));
        let _ = writeln!(
            out,
            r#"<line x1="{x:.1}" y1="{:.1}" x2="{x:.1}" y2="{:.1}" stroke="black"/><text x="{x:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            H - BOTTOM,
            H - BOTTOM + 5.0,
            H - BOTTOM + 18.0,
            tick(xv)
        );
        let _ = writeln!(
            out,
            r#"<line x1="{:.1}" y1="{y:.1}" x2="{LEFT}" y2="{y:.1}" stroke="black"/><text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#,
            LEFT - 5.0,
            LEFT - 8.0,
            y + 4.0,
            tick(yv)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
        LEFT + (W - LEFT - RIGHT) / 2.0,
        H - 12.0,
        escape(xlabel)
    );
    let _ = writeln!(
        out,
        r#"<text x="16" y="{:.1}" text-anchor="middle" transform="rotate(-90 16 {:.1})">{}</text>"#,
        TOP + (H - TOP - BOTTOM) / 2.0,
        TOP + (H - TOP - BOTTOM) / 2.0,
        escape(ylabel)
    );
}

fn legend(out: &mut String, labels: &[&str]) {
    for (k, label) in labels.iter().enumerate() {
        let y = TOP + 16.0 + 16.0 * k as f64;
        let _ = writeln!(
            out,
            r#"<rect x="{:.1}" y="{:.1}" width="12" height="3" fill="{}"/><text x="{:.1}" y="{:.1}">{}</text>"#,
            W - RIGHT - 150.0,
            y - 4.0,
            COLORS[k % COLORS.len()],
            W - RIGHT - 132.0,
            y,
            escape(label)
        );
    }
}

/// Overlaid step outlines of histograms sharing one binning.
pub fn histograms(title: &str, series: &[(&str, &Histogram)]) -> String {
    let x0 = series.first().map_or(0.0, |(_, h)| h.edges[0]);
    let x1 = series.first().map_or(1.0, |(_, h)| *h.edges.last().unwrap());
    let ymax = series
        .iter()
        .flat_map(|(_, h)| h.counts.iter())
        .copied()
        .max()
        .unwrap_or(0)
        .max(1) as f64;
    let f = Frame::new((x0, x1), (0.0, ymax * 1.05));
    let mut out = String::new();
    open(&mut out, &f, title, "switching current i_sw", "counts per bin");
    for (k, (_, h)) in series.iter().enumerate() {
        let mut d = format!("M{:.2},{:.2}", f.px(h.edges[0]), f.py(0.0));
        for (i, &c) in h.counts.iter().enumerate() {
            let y = f.py(c as f64);
            let _ = write!(d, " L{:.2},{y:.2} L{:.2},{y:.2}", f.px(h.edges[i]), f.px(h.edges[i + 1]));
        }
        let _ = write!(d, " L{:.2},{:.2}", f.px(x1), f.py(0.0));
        let _ = writeln!(
            out,
            r#"<path d="{d}" fill="none" stroke="{}" stroke-width="1.2"/>"#,
            COLORS[k % COLORS.len()]
        );
    }
    legend(&mut out, &series.iter().map(|(l, _)| *l).collect::<Vec<_>>());
    out.push_str("</svg>\n");
    out
}

pub struct Line<'a> {
    pub label: &'a str,
    pub points: Vec<(f64, f64)>,
}

/// Polylines with markers; `rule` draws a dashed horizontal line.
pub fn lines(
    title: &str,
    xlabel: &str,
    ylabel: &str,
    series: &[Line],
    y_range: Option<(f64, f64)>,
    rule: Option<f64>,
) -> String {
    let all = || series.iter().flat_map(|s| s.points.iter());
    let fold = |g: fn(&(f64, f64)) -> f64| {
        all().map(g).fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| {
            (a.min(v), b.max(v))
        })
    };
    let x = fold(|p| p.0);
    let y = y_range.unwrap_or_else(|| fold(|p| p.1));
    let x = if x.0.is_finite() { x } else { (0.0, 1.0) };
    let y = if y.0.is_finite() { y } else { (0.0, 1.0) };
    let f = Frame::new(x, y);
    let mut out = String::new();
    open(&mut out, &f, title, xlabel, ylabel);
    if let Some(r) = rule {
        let _ = writeln!(
            out,
            r##"<line x1="{LEFT}" y1="{:.2}" x2="{:.1}" y2="{:.2}" stroke="#555" stroke-dasharray="6 4"/>"##,
            f.py(r),
            W - RIGHT,
            f.py(r)
        );
    }
    for (k, s) in series.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let pts: Vec<String> = s
            .points
            .iter()
            .map(|&(a, b)| format!("{:.2},{:.2}", f.px(a), f.py(b)))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            pts.join(" ")
        );
        if s.points.len() <= 60 {
            for &(a, b) in &s.points {
                let _ = writeln!(
                    out,
                    r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{color}"/>"#,
                    f.px(a),
                    f.py(b)
                );
            }
        }
    }
    legend(&mut out, &series.iter().map(|s| s.label).collect::<Vec<_>>());
    out.push_str("</svg>\n");
    out
}
