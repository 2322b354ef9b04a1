//! Table serialization: CSV, JSON and static SVG line plots.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::measures::MeasureRecord;
use crate::sweep::MeasureSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "svg" => Ok(Format::Svg),
            other => Err(Error::UnknownFormat(other.into())),
        }
    }
}

pub const CSV_HEADER: &str =
    "t,q,gamma_over_nu,family,coupling,negativity,lbc,witness,vn_entropy,linear_entropy,qjsd_init,qjsd_mm";

/// Shortest round-trip decimal; absent values print as NaN.
fn fmt_opt(v: Option<f64>) -> String {
    match v {
        Some(x) => format!("{x}"),
        None => "NaN".into(),
    }
}

fn to_csv(records: &[MeasureRecord]) -> String {
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            r.t,
            r.q,
            r.gamma_over_nu,
            r.family,
            r.coupling,
            fmt_opt(r.negativity),
            fmt_opt(r.lbc),
            fmt_opt(r.witness),
            fmt_opt(r.vn_entropy),
            fmt_opt(r.linear_entropy),
            fmt_opt(r.qjsd_init),
            fmt_opt(r.qjsd_mm),
        );
    }
    out
}

/// Serializes the table; CSV column order is fixed and JSON mirrors the
/// column names, with unselected measures as null.
pub fn emit(records: &[MeasureRecord], format: Format) -> Result<Vec<u8>> {
    if records.is_empty() {
        return Err(Error::EmptyTable);
    }
    match format {
        Format::Csv => Ok(to_csv(records).into_bytes()),
        Format::Json => {
            serde_json::to_vec_pretty(records).map_err(|e| Error::InvalidSweep(e.to_string()))
        }
        Format::Svg => Ok(render_charts(&charts_from_records(records)).into_bytes()),
    }
}

/// Parses JSON emitted by [`emit`] back into records.
pub fn parse_json(bytes: &[u8]) -> Result<Vec<MeasureRecord>> {
    serde_json::from_slice(bytes).map_err(|e| Error::InvalidSweep(e.to_string()))
}

// ---------------------------------------------------------------------------
// SVG line plots
// ---------------------------------------------------------------------------

/// One polyline: a labelled sequence of (x, y) points.
#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

/// One chart: several series over common axes.
#[derive(Debug, Clone)]
pub struct Chart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

const PLOT_W: f64 = 520.0;
const PLOT_H: f64 = 240.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_T: f64 = 46.0;
const MARGIN_B: f64 = 50.0;
const LEGEND_W: f64 = 190.0;

fn fmt_tick(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s.is_empty() {
        "0".into()
    } else {
        s.to_string()
    }
}

fn value_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in values {
        if v.is_finite() {
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    if !lo.is_finite() || !hi.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        // flat series: open a symmetric window around the value
        let pad = lo.abs().max(1.0) * 0.05;
        return (lo - pad, hi + pad);
    }
    let pad = (hi - lo) * 0.05;
    (lo - pad, hi + pad)
}

/// Renders stacked line charts as a standalone SVG document.
pub fn render_charts(charts: &[Chart]) -> String {
    let total_w = MARGIN_L + PLOT_W + 20.0 + LEGEND_W;
    let chart_h = MARGIN_T + PLOT_H + MARGIN_B;
    let total_h = chart_h * charts.len().max(1) as f64;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{total_w:.0}" height="{total_h:.0}" viewBox="0 0 {total_w:.0} {total_h:.0}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);

    for (ci, chart) in charts.iter().enumerate() {
        let oy = chart_h * ci as f64;
        let (x_lo, x_hi) = value_range(
            chart
                .series
                .iter()
                .flat_map(|s| s.points.iter().map(|p| p.0)),
        );
        let (y_lo, y_hi) = value_range(
            chart
                .series
                .iter()
                .flat_map(|s| s.points.iter().map(|p| p.1)),
        );
        let sx = |x: f64| MARGIN_L + (x - x_lo) / (x_hi - x_lo) * PLOT_W;
        let sy = |y: f64| oy + MARGIN_T + PLOT_H - (y - y_lo) / (y_hi - y_lo) * PLOT_H;

        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-size="14" font-weight="bold">{}</text>"#,
            MARGIN_L,
            oy + 20.0,
            chart.title
        );
        let _ = writeln!(
            svg,
            r#"<rect x="{MARGIN_L:.1}" y="{:.1}" width="{PLOT_W:.1}" height="{PLOT_H:.1}" fill="none" stroke="black"/>"#,
            oy + MARGIN_T
        );

        for i in 0..=4 {
            let fx = x_lo + (x_hi - x_lo) * i as f64 / 4.0;
            let fy = y_lo + (y_hi - y_lo) * i as f64 / 4.0;
            let px = sx(fx);
            let py = sy(fy);
            let _ = writeln!(
                svg,
                r##"<line x1="{px:.1}" y1="{:.1}" x2="{px:.1}" y2="{:.1}" stroke="#ccc"/>"##,
                oy + MARGIN_T,
                oy + MARGIN_T + PLOT_H
            );
            let _ = writeln!(
                svg,
                r#"<text x="{px:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
                oy + MARGIN_T + PLOT_H + 16.0,
                fmt_tick(fx)
            );
            let _ = writeln!(
                svg,
                r##"<line x1="{MARGIN_L:.1}" y1="{py:.1}" x2="{:.1}" y2="{py:.1}" stroke="#ccc"/>"##,
                MARGIN_L + PLOT_W
            );
            let _ = writeln!(
                svg,
                r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#,
                MARGIN_L - 6.0,
                py + 4.0,
                fmt_tick(fy)
            );
        }

        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            MARGIN_L + PLOT_W / 2.0,
            oy + MARGIN_T + PLOT_H + 36.0,
            chart.x_label
        );
        let ylx = 18.0;
        let yly = oy + MARGIN_T + PLOT_H / 2.0;
        let _ = writeln!(
            svg,
            r#"<text x="{ylx:.1}" y="{yly:.1}" text-anchor="middle" transform="rotate(-90 {ylx:.1} {yly:.1})">{}</text>"#,
            chart.y_label
        );

        for (si, series) in chart.series.iter().enumerate() {
            let color = PALETTE[si % PALETTE.len()];
            let pts: Vec<String> = series
                .points
                .iter()
                .filter(|(x, y)| x.is_finite() && y.is_finite())
                .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
                .collect();
            if pts.len() >= 2 {
                let _ = writeln!(
                    svg,
                    r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
                    pts.join(" ")
                );
            }
            let lx = MARGIN_L + PLOT_W + 18.0;
            let ly = oy + MARGIN_T + 14.0 * si as f64 + 8.0;
            let _ = writeln!(
                svg,
                r#"<line x1="{lx:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{color}" stroke-width="2"/>"#,
                lx + 18.0
            );
            let _ = writeln!(
                svg,
                r#"<text x="{:.1}" y="{:.1}">{}</text>"#,
                lx + 24.0,
                ly + 4.0,
                series.label
            );
        }
    }
    svg.push_str("</svg>\n");
    svg
}

fn charts_from_records(records: &[MeasureRecord]) -> Vec<Chart> {
    let mut keys: Vec<(f64, f64)> = records.iter().map(|r| (r.gamma_over_nu, r.q)).collect();
    keys.sort_by(|a, b| a.partial_cmp(b).unwrap());
    keys.dedup();

    type Accessor = fn(&MeasureRecord) -> Option<f64>;
    let accessors: [(&str, Accessor); 7] = [
        ("negativity", |r| r.negativity),
        ("lbc", |r| r.lbc),
        ("witness", |r| r.witness),
        ("vn_entropy", |r| r.vn_entropy),
        ("linear_entropy", |r| r.linear_entropy),
        ("qjsd_init", |r| r.qjsd_init),
        ("qjsd_mm", |r| r.qjsd_mm),
    ];
    debug_assert_eq!(accessors.len(), MeasureSet::NAMES.len());

    let mut charts = Vec::new();
    for (name, get) in accessors {
        let mut series = Vec::new();
        for &(gamma, q) in &keys {
            let points: Vec<(f64, f64)> = records
                .iter()
                .filter(|r| r.gamma_over_nu == gamma && r.q == q)
                .filter_map(|r| get(r).map(|v| (r.t, v)))
                .collect();
            if !points.is_empty() {
                series.push(Series {
                    label: format!("q={}, γ/ν={}", fmt_tick(q), fmt_tick(gamma)),
                    points,
                });
            }
        }
        if !series.is_empty() {
            let title = format!("{} — {}/{}", name, records[0].family, records[0].coupling);
            charts.push(Chart {
                title,
                x_label: "νt".into(),
                y_label: name.into(),
                series,
            });
        }
    }
    charts
}
