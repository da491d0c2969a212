//! Plot-ready series extracted from a [`ResultTable`], plus a small SVG line plot.

use std::fmt::Write as _;
use std::path::Path;

use super::table::ResultTable;
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    RelL2,
    KendallTau,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::RelL2 => "rel_l2",
            Metric::KendallTau => "kendall_tau",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XAxis {
    ByzantineFraction,
    ObjectCount,
}

/// One curve: a `strategy/algorithm` label with `(x, mean, std)` points.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64, f64)>,
}

/// Groups the cell summaries into series, keeping first-appearance order.
pub fn series(table: &ResultTable, x: XAxis, metric: Metric) -> Vec<Series> {
    let mut out: Vec<Series> = Vec::new();
    for c in table.summaries() {
        let label = format!("{}/{}", c.strategy, c.algorithm);
        let xv = match x {
            XAxis::ByzantineFraction => c.byzantine_fraction,
            XAxis::ObjectCount => c.n as f64,
        };
        let (m, s) = match metric {
            Metric::RelL2 => (c.rel_l2_mean, c.rel_l2_std),
            Metric::KendallTau => (c.tau_mean, c.tau_std),
        };
        match out.iter_mut().find(|s| s.label == label) {
            Some(existing) => existing.points.push((xv, m, s)),
            None => out.push(Series { label, points: vec![(xv, m, s)] }),
        }
    }
    out
}

/// Wide CSV: `x`, then `<label>` and `<label>_std` per series; blank where a series has no point.
pub fn figure_csv(data: &[Series], x_name: &str) -> Result<String> {
    let mut xs: Vec<f64> = data.iter().flat_map(|s| s.points.iter().map(|p| p.0)).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec![x_name.to_string()];
    for s in data {
        header.push(s.label.clone());
        header.push(format!("{}_std", s.label));
    }
    w.write_record(&header)?;
    for x in xs {
        let mut rec = vec![x.to_string()];
        for s in data {
            match s.points.iter().find(|p| p.0 == x) {
                Some(p) => {
                    rec.push(p.1.to_string());
                    rec.push(p.2.to_string());
                }
                None => rec.extend([String::new(), String::new()]),
            }
        }
        w.write_record(&rec)?;
    }
    let bytes = w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"];

/// Line plot of the series means with a legend.
pub fn render_svg(data: &[Series], title: &str, x_label: &str, y_label: &str) -> String {
    let (w, h) = (640.0, 420.0);
    let (left, right, top, bottom) = (70.0, 170.0, 40.0, 50.0);
    let pts = data.iter().flat_map(|s| s.points.iter());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for p in pts {
        x0 = x0.min(p.0);
        x1 = x1.max(p.0);
        y0 = y0.min(p.1);
        y1 = y1.max(p.1);
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 == x0 {
        x1 = x0 + 1.0;
    }
    y0 = y0.min(0.0);
    if y1 <= y0 {
        y1 = y0 + 1.0;
    }
    let pw = w - left - right;
    let ph = h - top - bottom;
    let sx = |x: f64| left + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| top + ph - (y - y0) / (y1 - y0) * ph;

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" font-family="sans-serif" font-size="12">"#);
    let _ = writeln!(svg, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(svg, r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#, left + pw / 2.0, escape(title));
    let _ = writeln!(
        svg,
        r#"<path d="M{left},{top} V{} H{}" fill="none" stroke="black"/>"#,
        top + ph,
        left + pw
    );
    for i in 0..=4 {
        let fx = x0 + (x1 - x0) * i as f64 / 4.0;
        let fy = y0 + (y1 - y0) * i as f64 / 4.0;
        let _ = writeln!(svg, r#"<text x="{:.1}" y="{}" text-anchor="middle">{}</text>"#, sx(fx), top + ph + 18.0, tick(fx));
        let _ = writeln!(svg, r#"<text x="{}" y="{:.1}" text-anchor="end">{}</text>"#, left - 6.0, sy(fy) + 4.0, tick(fy));
    }
    let _ = writeln!(svg, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, left + pw / 2.0, h - 10.0, escape(x_label));
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#,
        top + ph / 2.0,
        top + ph / 2.0,
        escape(y_label)
    );
    for (i, s) in data.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let mut pts: Vec<&(f64, f64, f64)> = s.points.iter().collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let d: Vec<String> = pts.iter().map(|p| format!("{:.2},{:.2}", sx(p.0), sy(p.1))).collect();
        let _ = writeln!(svg, r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#, d.join(" "));
        for p in &pts {
            let _ = writeln!(svg, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#, sx(p.0), sy(p.1));
        }
        let ly = top + 10.0 + 18.0 * i as f64;
        let lx = left + pw + 15.0;
        let _ = writeln!(svg, r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#, lx + 20.0);
        let _ = writeln!(svg, r#"<text x="{}" y="{}">{}</text>"#, lx + 26.0, ly + 4.0, escape(&s.label));
    }
    svg.push_str("</svg>\n");
    svg
}

fn tick(v: f64) -> String {
    let s = format!("{v:.3}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Writes `<stem>_<metric>.csv` and `<stem>_<metric>.svg` next to `csv_path`
/// for both metrics. Returns the written paths.
pub fn write_figures(table: &ResultTable, x: XAxis, csv_path: &Path) -> Result<Vec<std::path::PathBuf>> {
    let stem = csv_path.file_stem().and_then(|s| s.to_str()).unwrap_or("results");
    let dir = csv_path.parent().unwrap_or_else(|| Path::new(""));
    let x_name = match x {
        XAxis::ByzantineFraction => "byzantine_fraction",
        XAxis::ObjectCount => "n",
    };
    let mut written = Vec::new();
    for metric in [Metric::RelL2, Metric::KendallTau] {
        let data = series(table, x, metric);
        let base = dir.join(format!("{stem}_{}", metric.name()));
        let csv_file = base.with_extension("csv");
        std::fs::write(&csv_file, figure_csv(&data, x_name)?)?;
        let svg_file = base.with_extension("svg");
        std::fs::write(&svg_file, render_svg(&data, &format!("{stem}: {}", metric.name()), x_name, metric.name()))?;
        written.push(csv_file);
        written.push(svg_file);
    }
    Ok(written)
}
