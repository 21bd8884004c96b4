//! CSV and SVG emission. Files are written to a temporary sibling and renamed
//! into place only after every file of a run has been rendered.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{CliError, Result};

pub const CSV_HEADER: &str =
    "sweep_var,sweep_value,coverage_analytic,coverage_err,ase_analytic,coverage_mc,coverage_mc_se,ase_mc,ase_mc_se";

/// One evaluated grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub sweep_value: f64,
    pub coverage: f64,
    pub coverage_err: f64,
    pub ase: f64,
    pub mc: Option<McColumns>,
    /// Dense-network limit or bound on the coverage, when one applies.
    pub coverage_limit: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McColumns {
    pub coverage: f64,
    pub coverage_se: f64,
    pub ase: f64,
    pub ase_se: f64,
}

/// CSV text: `#` comment lines, the header, one line per row.
pub fn render_csv(comments: &[String], sweep_var: &str, rows: &[Row]) -> String {
    let mut out = String::new();
    for c in comments {
        for line in c.lines() {
            let _ = writeln!(out, "# {line}");
        }
    }
    let _ = writeln!(out, "{CSV_HEADER}");
    for r in rows {
        let _ = write!(
            out,
            "{sweep_var},{},{},{},{}",
            num(r.sweep_value),
            num(r.coverage),
            num(r.coverage_err),
            num(r.ase)
        );
        match &r.mc {
            Some(m) => {
                let _ = writeln!(out, ",{},{},{},{}", num(m.coverage), num(m.coverage_se), num(m.ase), num(m.ase_se));
            }
            None => out.push_str(",,,,\n"),
        }
    }
    out
}

/// Shortest round-trip form, switching to exponent notation outside
/// `[1e-4, 1e15)`.
pub fn num(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || !v.is_finite() || (1e-4..1e15).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// `sweep_var,sweep_value,coverage_limit` for the rows that have one.
pub fn render_limit_csv(comments: &[String], sweep_var: &str, rows: &[Row]) -> Option<String> {
    if rows.iter().all(|r| r.coverage_limit.is_none()) {
        return None;
    }
    let mut out = String::new();
    for c in comments {
        for line in c.lines() {
            let _ = writeln!(out, "# {line}");
        }
    }
    out.push_str("sweep_var,sweep_value,coverage_limit\n");
    for r in rows {
        if let Some(l) = r.coverage_limit {
            let _ = writeln!(out, "{sweep_var},{},{}", num(r.sweep_value), num(l));
        }
    }
    Some(out)
}

/// `out.csv` → `out.limit.csv`.
pub fn limit_path(csv: &Path) -> PathBuf {
    csv.with_extension("limit.csv")
}

/// Writes every `(path, contents)` pair, or none of them.
pub fn write_all(files: &[(PathBuf, String)]) -> Result<()> {
    let mut staged = Vec::with_capacity(files.len());
    for (path, text) in files {
        let dir = match path.parent() {
            Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
            _ => PathBuf::from("."),
        };
        std::fs::create_dir_all(&dir).map_err(|e| CliError::io(format!("creating {}", dir.display()), e))?;
        let mut tmp = tempfile::NamedTempFile::new_in(&dir)
            .map_err(|e| CliError::io(format!("staging {}", path.display()), e))?;
        tmp.write_all(text.as_bytes())
            .and_then(|_| tmp.flush())
            .map_err(|e| CliError::io(format!("writing {}", path.display()), e))?;
        staged.push((tmp, path));
    }
    for (tmp, path) in staged {
        tmp.persist(path)
            .map_err(|e| CliError::io(format!("renaming into {}", path.display()), e.error))?;
    }
    Ok(())
}

/// One curve on a panel.
#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    /// Symmetric error bars drawn as markers, for Monte Carlo estimates.
    pub errors: Option<Vec<f64>>,
    pub dashed: bool,
}

#[derive(Debug, Clone)]
pub struct Panel {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub log_y: bool,
    pub series: Vec<Series>,
}

const PANEL_W: f64 = 480.0;
const PANEL_H: f64 = 360.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 55.0;
const COLOURS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

/// Static SVG with the panels side by side.
pub fn render_svg(panels: &[Panel]) -> String {
    let width = PANEL_W * panels.len().max(1) as f64;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{PANEL_H}" viewBox="0 0 {width} {PANEL_H}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="{width}" height="{PANEL_H}" fill="white"/>"#);
    for (i, p) in panels.iter().enumerate() {
        render_panel(&mut s, p, i as f64 * PANEL_W);
    }
    s.push_str("</svg>\n");
    s
}

fn render_panel(s: &mut String, panel: &Panel, x0: f64) {
    let tx = |v: f64| if panel.log_x { v.log10() } else { v };
    let ty = |v: f64| if panel.log_y { v.log10() } else { v };
    let usable = |x: f64, y: f64| {
        x.is_finite() && y.is_finite() && (!panel.log_x || x > 0.0) && (!panel.log_y || y > 0.0)
    };
    let pts: Vec<(f64, f64)> = panel
        .series
        .iter()
        .flat_map(|se| se.points.iter().copied())
        .filter(|&(x, y)| usable(x, y))
        .map(|(x, y)| (tx(x), ty(y)))
        .collect();
    let (mut xmin, mut xmax, mut ymin, mut ymax) = pts.iter().fold(
        (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY),
        |(a, b, c, d), &(x, y)| (a.min(x), b.max(x), c.min(y), d.max(y)),
    );
    if !xmin.is_finite() {
        (xmin, xmax, ymin, ymax) = (0.0, 1.0, 0.0, 1.0);
    }
    if xmax == xmin {
        xmin -= 0.5;
        xmax += 0.5;
    }
    if !panel.log_y {
        ymin = ymin.min(0.0);
    }
    if ymax == ymin {
        ymax = ymin + 1.0;
    }
    let pad = 0.05 * (ymax - ymin);
    let (ymin, ymax) = (ymin - if panel.log_y { pad } else { 0.0 }, ymax + pad);

    let left = x0 + MARGIN_L;
    let right = x0 + PANEL_W - MARGIN_R;
    let top = MARGIN_T;
    let bottom = PANEL_H - MARGIN_B;
    let sx = |x: f64| left + (x - xmin) / (xmax - xmin) * (right - left);
    let sy = |y: f64| bottom - (y - ymin) / (ymax - ymin) * (bottom - top);

    let _ = writeln!(
        s,
        r#"<rect x="{left:.1}" y="{top:.1}" width="{:.1}" height="{:.1}" fill="none" stroke="black"/>"#,
        right - left,
        bottom - top
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="20" text-anchor="middle" font-size="13">{}</text>"#,
        (left + right) / 2.0,
        escape(&panel.title)
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
        (left + right) / 2.0,
        PANEL_H - 12.0,
        escape(&panel.x_label)
    );
    let _ = writeln!(
        s,
        r#"<text transform="translate({:.1},{:.1}) rotate(-90)" text-anchor="middle">{}</text>"#,
        x0 + 16.0,
        (top + bottom) / 2.0,
        escape(&panel.y_label)
    );
    for (v, label) in ticks(xmin, xmax, panel.log_x) {
        let x = sx(v);
        let _ = writeln!(s, r#"<line x1="{x:.1}" y1="{bottom:.1}" x2="{x:.1}" y2="{:.1}" stroke="black"/>"#, bottom + 4.0);
        let _ = writeln!(s, r#"<text x="{x:.1}" y="{:.1}" text-anchor="middle">{label}</text>"#, bottom + 16.0);
    }
    for (v, label) in ticks(ymin, ymax, panel.log_y) {
        let y = sy(v);
        let _ = writeln!(s, r#"<line x1="{:.1}" y1="{y:.1}" x2="{left:.1}" y2="{y:.1}" stroke="black"/>"#, left - 4.0);
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{label}</text>"#, left - 6.0, y + 4.0);
    }

    for (k, se) in panel.series.iter().enumerate() {
        let colour = COLOURS[k % COLOURS.len()];
        let legend_y = top + 14.0 + 14.0 * k as f64;
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{legend_y:.1}" fill="{colour}">{}</text>"#,
            left + 8.0,
            escape(&se.label)
        );
        let mapped: Vec<(usize, f64, f64)> = se
            .points
            .iter()
            .enumerate()
            .filter(|(_, &(x, y))| usable(x, y))
            .map(|(i, &(x, y))| (i, sx(tx(x)), sy(ty(y))))
            .collect();
        match &se.errors {
            Some(errs) => {
                for &(i, x, y) in &mapped {
                    let (raw_x, raw_y) = se.points[i];
                    let e = errs.get(i).copied().unwrap_or(0.0);
                    let lo = raw_y - e;
                    let hi = raw_y + e;
                    if e > 0.0 && usable(raw_x, lo) {
                        let _ = writeln!(
                            s,
                            r#"<line x1="{x:.1}" y1="{:.1}" x2="{x:.1}" y2="{:.1}" stroke="{colour}"/>"#,
                            sy(ty(lo)),
                            sy(ty(hi))
                        );
                    }
                    let _ = writeln!(s, r#"<circle cx="{x:.1}" cy="{y:.1}" r="2.5" fill="{colour}"/>"#);
                }
            }
            None => {
                if mapped.is_empty() {
                    continue;
                }
                let path: Vec<String> = mapped.iter().map(|&(_, x, y)| format!("{x:.1},{y:.1}")).collect();
                let dash = if se.dashed { r#" stroke-dasharray="5,3""# } else { "" };
                let _ = writeln!(
                    s,
                    r#"<polyline points="{}" fill="none" stroke="{colour}" stroke-width="1.5"{dash}/>"#,
                    path.join(" ")
                );
            }
        }
    }
}

fn ticks(lo: f64, hi: f64, log: bool) -> Vec<(f64, String)> {
    if log {
        let first = lo.ceil() as i64;
        let last = hi.floor() as i64;
        let step = ((last - first) / 6).max(1);
        return (first..=last)
            .step_by(step as usize)
            .map(|e| (e as f64, format!("1e{e}")))
            .collect();
    }
    let raw = (hi - lo) / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag);
    let mut out = Vec::new();
    let mut v = (lo / step).ceil() * step;
    while v <= hi + 1e-9 * step {
        let label = if step >= 1.0 { format!("{v:.0}") } else { format!("{v:.*}", (-step.log10().floor()) as usize) };
        out.push((v, label));
        v += step;
    }
    out
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
