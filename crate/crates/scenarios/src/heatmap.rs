//! Standalone SVG heatmaps with the underlying CSV written alongside.
//!
//! Colour mapping (fixed, so panels are comparable across runs): each value is
//! normalised to `[0, 1]` over `[vmin, vmax]` (the data range unless given),
//! clamped, and interpolated linearly in RGB between the stops of
//! [`COLOR_STOPS`]: white at the minimum through light and mid blue to navy
//! `#08306b` at the maximum. A constant map is drawn entirely in the minimum
//! colour. Row 0 is drawn at the top.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{io_err, Result, ScenarioError};

pub const COLOR_STOPS: [(f64, [u8; 3]); 5] = [
    (0.0, [0xff, 0xff, 0xff]),
    (0.25, [0xc6, 0xdb, 0xef]),
    (0.5, [0x6b, 0xae, 0xd6]),
    (0.75, [0x21, 0x71, 0xb5]),
    (1.0, [0x08, 0x30, 0x6b]),
];

#[derive(Debug, Clone, Default)]
pub struct HeatmapOptions {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    /// Colour range; the data range when `None`.
    pub range: Option<(f64, f64)>,
    /// Header of the emitted CSV; `c0, c1, …` when empty.
    pub column_names: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct HeatmapFiles {
    pub svg: PathBuf,
    pub csv: PathBuf,
}

/// `#rrggbb` for `x ∈ [0, 1]`.
pub fn color(x: f64) -> String {
    let x = if x.is_nan() { 0.0 } else { x.clamp(0.0, 1.0) };
    let i = COLOR_STOPS.windows(2).position(|w| x <= w[1].0).unwrap_or(COLOR_STOPS.len() - 2);
    let (a, ca) = COLOR_STOPS[i];
    let (b, cb) = COLOR_STOPS[i + 1];
    let s = (x - a) / (b - a);
    let mix = |k: usize| (ca[k] as f64 + s * (cb[k] as f64 - ca[k] as f64)).round() as u8;
    format!("#{:02x}{:02x}{:02x}", mix(0), mix(1), mix(2))
}

fn validate(data: &[Vec<f64>]) -> Result<usize> {
    let cols = data.first().map_or(0, Vec::len);
    if data.is_empty() || cols == 0 {
        return Err(ScenarioError::Config("heatmap data is empty".into()));
    }
    if let Some(r) = data.iter().position(|row| row.len() != cols) {
        return Err(ScenarioError::Config(format!(
            "heatmap data is not rectangular: row {r} has {} columns, expected {cols}",
            data[r].len()
        )));
    }
    if data.iter().flatten().any(|v| !v.is_finite()) {
        return Err(ScenarioError::Config("heatmap data contains non-finite values".into()));
    }
    Ok(cols)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Writes `path` (SVG) and the same stem with `.csv`.
pub fn emit_heatmap(data: &[Vec<f64>], path: &Path, opts: &HeatmapOptions) -> Result<HeatmapFiles> {
    let cols = validate(data)?;
    let rows = data.len();
    let (lo, hi) = opts.range.unwrap_or_else(|| {
        data.iter().flatten().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)))
    });
    let norm = |v: f64| if hi > lo { (v - lo) / (hi - lo) } else { 0.0 };

    let cw = (800.0 / cols as f64).clamp(4.0, 60.0);
    let ch = (400.0 / rows as f64).clamp(4.0, 60.0);
    let (left, top) = (60.0, 40.0);
    let (w, h) = (cw * cols as f64, ch * rows as f64);
    let bar_x = left + w + 20.0;
    let width = bar_x + 80.0;
    let height = top + h + 50.0;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    );
    let _ = writeln!(svg, r##"<rect x="0" y="0" width="{width:.0}" height="{height:.0}" fill="#f7f7f7"/>"##);
    let _ = writeln!(
        svg,
        r#"<text x="{left}" y="24" font-family="sans-serif" font-size="14">{}</text>"#,
        escape(&opts.title)
    );
    for (r, row) in data.iter().enumerate() {
        for (c, &v) in row.iter().enumerate() {
            let _ = writeln!(
                svg,
                r#"<rect class="cell" x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
                left + c as f64 * cw,
                top + r as f64 * ch,
                cw,
                ch,
                color(norm(v))
            );
        }
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="12" text-anchor="middle">{}</text>"#,
        left + w / 2.0,
        top + h + 30.0,
        escape(&opts.x_label)
    );
    let _ = writeln!(
        svg,
        r#"<text x="20" y="{:.1}" font-family="sans-serif" font-size="12" text-anchor="middle" transform="rotate(-90 20 {:.1})">{}</text>"#,
        top + h / 2.0,
        top + h / 2.0,
        escape(&opts.y_label)
    );
    let _ = writeln!(svg, r#"<defs><linearGradient id="scale" x1="0" y1="1" x2="0" y2="0">"#);
    for (s, c) in COLOR_STOPS {
        let _ = writeln!(
            svg,
            r#"<stop offset="{s}" stop-color="{}"/>"#,
            format_args!("#{:02x}{:02x}{:02x}", c[0], c[1], c[2])
        );
    }
    let _ = writeln!(svg, "</linearGradient></defs>");
    let _ = writeln!(
        svg,
        r##"<rect class="colorbar" x="{bar_x:.1}" y="{top}" width="16" height="{h:.1}" fill="url(#scale)" stroke="#333"/>"##
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11">{hi:.3}</text>"#,
        bar_x + 22.0,
        top + 10.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11">{lo:.3}</text>"#,
        bar_x + 22.0,
        top + h
    );
    svg.push_str("</svg>\n");
    std::fs::write(path, svg).map_err(io_err(path))?;

    let csv_path = path.with_extension("csv");
    let mut wtr = csv::Writer::from_path(&csv_path).map_err(|source| ScenarioError::Csv { path: csv_path.clone(), source })?;
    let header: Vec<String> = if opts.column_names.len() == cols {
        opts.column_names.clone()
    } else {
        (0..cols).map(|c| format!("c{c}")).collect()
    };
    let csv_err = |source| ScenarioError::Csv { path: csv_path.clone(), source };
    wtr.write_record(&header).map_err(csv_err)?;
    for row in data {
        wtr.write_record(row.iter().map(|v| v.to_string())).map_err(csv_err)?;
    }
    wtr.flush().map_err(io_err(&csv_path))?;
    Ok(HeatmapFiles { svg: path.to_path_buf(), csv: csv_path })
}
