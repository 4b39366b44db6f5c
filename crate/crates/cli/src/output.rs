//! CSV rows and the optional SVG line plot.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{self, Write};

/// One CSV row: `lambda,value,component,err_est`.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub lambda: f64,
    pub value: f64,
    pub component: String,
    pub err_est: f64,
}

impl Row {
    pub fn new(lambda: f64, value: f64, component: impl Into<String>, err_est: f64) -> Self {
        Row {
            lambda,
            value,
            component: component.into(),
            err_est,
        }
    }

    pub fn exact(lambda: f64, value: f64, component: impl Into<String>) -> Self {
        Self::new(lambda, value, component, 0.0)
    }
}

pub fn write_csv(out: &mut dyn Write, header: &str, rows: &[Row]) -> io::Result<()> {
    writeln!(out, "{header}")?;
    writeln!(out, "lambda,value,component,err_est")?;
    for r in rows {
        writeln!(out, "{},{},{},{}", r.lambda, r.value, r.component, r.err_est)?;
    }
    Ok(())
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 50.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// One polyline per component over `(lambda, value)`, with the data range
/// printed on the axes.
pub fn render_svg(title: &str, rows: &[Row]) -> String {
    let mut series: BTreeMap<&str, Vec<(f64, f64)>> = BTreeMap::new();
    for r in rows.iter().filter(|r| r.lambda.is_finite() && r.value.is_finite()) {
        series.entry(&r.component).or_default().push((r.lambda, r.value));
    }
    let pts = series.values().flatten();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 == x0 {
        x1 = x0 + 1.0;
    }
    if y1 == y0 {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        WIDTH - 2.0 * MARGIN,
        HEIGHT - 2.0 * MARGIN
    );
    let _ = writeln!(s, r#"<text x="{MARGIN}" y="20">{}</text>"#, escape(title));
    let _ = writeln!(s, r#"<text x="{MARGIN}" y="{}">{x0}</text>"#, HEIGHT - MARGIN + 15.0);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="end">{x1}</text>"#,
        WIDTH - MARGIN,
        HEIGHT - MARGIN + 15.0
    );
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{y0}</text>"#, MARGIN - 4.0, HEIGHT - MARGIN);
    let _ = writeln!(s, r#"<text x="{}" y="{MARGIN}" text-anchor="end">{y1}</text>"#, MARGIN - 4.0);
    for (i, (name, pts)) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let path: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.2" points="{}"/>"#,
            path.join(" ")
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" fill="{color}">{}</text>"#,
            WIDTH - MARGIN + 4.0,
            MARGIN + 14.0 * i as f64 + 10.0,
            escape(name)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
