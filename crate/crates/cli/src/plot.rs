use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use drsubmax::solvers::CSV_HEADER;

use crate::error::CliError;

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 600.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 30.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 60.0;

pub const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];
/// Dash patterns cycled per series; the first is solid.
pub const DASHES: [&str; 6] = ["", "8 4", "2 4", "12 4 2 4", "4 4", "16 4 4 4"];

/// One polyline: `(iteration, f)` pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

/// Reads a trajectory CSV, requiring the trajectory header and at least one
/// row.
pub fn read_series(path: &Path) -> Result<Series, CliError> {
    let err = |m: String| CliError::validation(format!("{}: {m}", path.display()));
    let mut reader = csv::Reader::from_path(path).map_err(|e| err(e.to_string()))?;
    let headers = reader.headers().map_err(|e| err(e.to_string()))?.clone();
    if headers.is_empty() {
        return Err(err("empty file".into()));
    }
    let expected: Vec<&str> = CSV_HEADER.split(',').collect();
    if headers.iter().collect::<Vec<_>>() != expected {
        return Err(err(format!("header does not match `{CSV_HEADER}`")));
    }
    let mut points = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| err(e.to_string()))?;
        let field = |k: usize| -> Result<f64, CliError> {
            record
                .get(k)
                .and_then(|v| v.parse::<f64>().ok())
                .filter(|v| v.is_finite())
                .ok_or_else(|| err(format!("row {}: column `{}` is not a finite number", i + 2, expected[k])))
        };
        points.push((field(0)?, field(2)?));
    }
    if points.is_empty() {
        return Err(err("no data rows".into()));
    }
    let label = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    Ok(Series { label, points })
}

/// Up to about `count` round tick values covering `[lo, hi]`.
pub fn nice_ticks(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let span = hi - lo;
    let raw = span / count.max(1) as f64;
    let magnitude = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 2.5, 5.0, 10.0]
        .iter()
        .map(|m| m * magnitude)
        .find(|&s| s >= raw)
        .unwrap_or(10.0 * magnitude);
    let first = (lo / step).ceil();
    let mut ticks = Vec::new();
    let mut k = first;
    while k * step <= hi + 1e-9 * step {
        let v = k * step;
        ticks.push(if v.abs() < 1e-12 * step { 0.0 } else { v });
        k += 1.0;
    }
    ticks
}

fn padded_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if hi - lo > 1e-12 * hi.abs().max(1.0) {
        let pad = 0.05 * (hi - lo);
        (lo - pad, hi + pad)
    } else {
        let pad = 0.5 * hi.abs().max(1.0);
        (lo - pad, hi + pad)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn fmt_tick(v: f64) -> String {
    let s = format!("{v:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

/// An 800×600 line chart with one polyline per series and a legend.
pub fn render_svg(series: &[Series]) -> String {
    let (x_lo, x_hi) = {
        let (lo, hi) = padded_range(series.iter().flat_map(|s| s.points.iter().map(|p| p.0)));
        (lo.max(0.0).min(hi), hi)
    };
    let (y_lo, y_hi) = padded_range(series.iter().flat_map(|s| s.points.iter().map(|p| p.1)));
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let sx = |x: f64| MARGIN_LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w;
    let sy = |y: f64| MARGIN_TOP + (y_hi - y) / (y_hi - y_lo) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );
    for t in nice_ticks(x_lo, x_hi, 8) {
        let x = sx(t);
        let y = MARGIN_TOP + plot_h;
        let _ = writeln!(svg, r#"<line x1="{x:.2}" y1="{y}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#, y + 5.0);
        let _ = writeln!(
            svg,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            y + 20.0,
            fmt_tick(t)
        );
    }
    for t in nice_ticks(y_lo, y_hi, 6) {
        let y = sy(t);
        let _ = writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{MARGIN_LEFT}" y2="{y:.2}" stroke="black"/>"#,
            MARGIN_LEFT - 5.0
        );
        let _ = writeln!(
            svg,
            r##"<line x1="{MARGIN_LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#dddddd"/>"##,
            MARGIN_LEFT + plot_w
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            MARGIN_LEFT - 8.0,
            y + 4.0,
            fmt_tick(t)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">iteration</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="20" y="{:.2}" text-anchor="middle" transform="rotate(-90 20 {:.2})">f</text>"#,
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0
    );
    for (i, s) in series.iter().enumerate() {
        let points: Vec<String> = s.points.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        let dash = DASHES[i % DASHES.len()];
        let dash_attr = if dash.is_empty() { String::new() } else { format!(r#" stroke-dasharray="{dash}""#) };
        let _ = writeln!(
            svg,
            r#"<polyline class="series" fill="none" stroke="{}" stroke-width="2"{dash_attr} points="{}"/>"#,
            PALETTE[i % PALETTE.len()],
            points.join(" ")
        );
    }
    let legend_x = MARGIN_LEFT + plot_w - 190.0;
    let legend_y = MARGIN_TOP + 10.0;
    let _ = writeln!(
        svg,
        r##"<rect x="{legend_x:.2}" y="{legend_y:.2}" width="180" height="{:.2}" fill="white" stroke="#888888"/>"##,
        10.0 + 20.0 * series.len() as f64
    );
    for (i, s) in series.iter().enumerate() {
        let y = legend_y + 18.0 + 20.0 * i as f64;
        let dash = DASHES[i % DASHES.len()];
        let dash_attr = if dash.is_empty() { String::new() } else { format!(r#" stroke-dasharray="{dash}""#) };
        let _ = writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{}" stroke-width="2"{dash_attr}/>"#,
            legend_x + 8.0,
            y - 4.0,
            legend_x + 38.0,
            y - 4.0,
            PALETTE[i % PALETTE.len()]
        );
        let _ = writeln!(svg, r#"<text x="{:.2}" y="{y:.2}">{}</text>"#, legend_x + 45.0, escape(&s.label));
    }
    svg.push_str("</svg>\n");
    svg
}

/// Reads every CSV first, so nothing is written when any input is bad.
pub fn plot(inputs: &[impl AsRef<Path>], output: &Path) -> Result<(), CliError> {
    if inputs.is_empty() {
        return Err(CliError::validation("no input CSVs"));
    }
    let series = inputs.iter().map(|p| read_series(p.as_ref())).collect::<Result<Vec<_>, _>>()?;
    fs::write(output, render_svg(&series))?;
    Ok(())
}
