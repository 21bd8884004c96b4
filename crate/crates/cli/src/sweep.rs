//! Grid evaluation and the files a sweep produces.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use udn_core::analytic::{ase, ase_simplified, coverage_probability, coverage_simplified, FadingSpec};
use udn_core::asymptotics::{adapted_coverage_limit, dense_coverage_upper_bound};
use udn_core::model::NetworkParams;
use udn_core::montecarlo::{ase_from_samples, coverage_from_samples, run_trials};

use crate::config::{Resolved, Scenario, SweepVariable};
use crate::error::Result;
use crate::output::{self, McColumns, Panel, Row, Series};

/// ASE columns are per km², matching the density unit.
const M2_PER_KM2: f64 = 1e6;

/// Evaluates every grid point; rows come back in grid order.
pub fn evaluate(resolved: &Resolved) -> Result<Vec<Row>> {
    resolved
        .grid
        .par_iter()
        .map(|&v| evaluate_point(resolved, v))
        .collect()
}

fn evaluate_point(resolved: &Resolved, value: f64) -> Result<Row> {
    let p = resolved.params_at(value)?;
    let (coverage, coverage_err, ase_value) = match resolved.scenario {
        Scenario::Corollary => (coverage_simplified(&p)?, 0.0, ase_simplified(&p)?),
        Scenario::General | Scenario::Adapted => {
            let fading = FadingSpec::exponential(p.mu)?;
            let c = coverage_probability(&p, &fading)?;
            let a = ase(&p, &fading)?;
            (c.value, c.est_abs_error, a.value)
        }
    };
    let mc = match resolved.sim_config(&p)? {
        Some(cfg) => {
            let samples = run_trials(&p, &cfg)?;
            let c = coverage_from_samples(&samples, p.threshold, cfg.seed);
            let a = ase_from_samples(&samples, p.lambda, p.threshold, cfg.seed).estimate;
            Some(McColumns {
                coverage: c.mean,
                coverage_se: c.std_error,
                ase: M2_PER_KM2 * a.mean,
                ase_se: M2_PER_KM2 * a.std_error,
            })
        }
        None => None,
    };
    Ok(Row {
        sweep_value: value,
        coverage,
        coverage_err,
        ase: M2_PER_KM2 * ase_value,
        mc,
        coverage_limit: coverage_limit(resolved, &p)?,
    })
}

/// The dense-network bound (general scenario, `β₁ ≤ 2`) or the adapted
/// coverage limit (adapted scenario, `β₁ = 0`).
fn coverage_limit(resolved: &Resolved, p: &NetworkParams) -> Result<Option<f64>> {
    Ok(match (resolved.scenario, &resolved.schedule) {
        (Scenario::General, _) if p.model.beta1() <= 2.0 => {
            Some(dense_coverage_upper_bound(p, resolved.thm3_d0.into())?.value)
        }
        (Scenario::Adapted, Some(s)) if p.model.beta1() == 0.0 => {
            Some(adapted_coverage_limit(s.k(), p, resolved.mu_convention.into())?.value)
        }
        _ => None,
    })
}

/// Provenance lines written above the CSV header.
pub fn provenance(command: &str, resolved: &Resolved) -> Vec<String> {
    vec![
        format!("udn {} {command}", env!("CARGO_PKG_VERSION")),
        "resolved configuration:".to_string(),
        resolved.echo.trim_end().to_string(),
    ]
}

/// A labelled sweep result, one curve per quantity on the plot.
pub struct Curve<'a> {
    pub label: String,
    pub resolved: &'a Resolved,
    pub rows: &'a [Row],
}

/// Coverage and ASE panels for one or more curves.
pub fn panels(curves: &[Curve<'_>]) -> Vec<Panel> {
    let Some(first) = curves.first() else { return Vec::new() };
    let var = first.resolved.variable;
    let log_x = matches!(var, SweepVariable::Density);
    let x_label = match var {
        SweepVariable::Density => "BS density (BS/km²)",
        SweepVariable::Threshold => "SINR threshold (dB)",
        SweepVariable::Alignment => "beam alignment probability",
        SweepVariable::D0 => "breakpoint distance (m)",
    };
    let mut cov = Vec::new();
    let mut ase_series = Vec::new();
    for c in curves {
        let xs = c.rows.iter().map(|r| r.sweep_value);
        cov.push(Series {
            label: c.label.clone(),
            points: xs.clone().zip(c.rows.iter().map(|r| r.coverage)).collect(),
            errors: None,
            dashed: false,
        });
        ase_series.push(Series {
            label: c.label.clone(),
            points: xs.clone().zip(c.rows.iter().map(|r| r.ase)).collect(),
            errors: None,
            dashed: false,
        });
        if c.rows.iter().all(|r| r.mc.is_some()) {
            let mc: Vec<McColumns> = c.rows.iter().filter_map(|r| r.mc).collect();
            cov.push(Series {
                label: format!("{} (MC)", c.label),
                points: xs.clone().zip(mc.iter().map(|m| m.coverage)).collect(),
                errors: Some(mc.iter().map(|m| 3.0 * m.coverage_se).collect()),
                dashed: false,
            });
            ase_series.push(Series {
                label: format!("{} (MC)", c.label),
                points: xs.clone().zip(mc.iter().map(|m| m.ase)).collect(),
                errors: Some(mc.iter().map(|m| 3.0 * m.ase_se).collect()),
                dashed: false,
            });
        }
        if c.rows.iter().any(|r| r.coverage_limit.is_some()) {
            cov.push(Series {
                label: format!("{} (limit)", c.label),
                points: c
                    .rows
                    .iter()
                    .filter_map(|r| r.coverage_limit.map(|l| (r.sweep_value, l)))
                    .collect(),
                errors: None,
                dashed: true,
            });
        }
    }
    vec![
        Panel {
            title: "Coverage probability".into(),
            x_label: x_label.into(),
            y_label: "P[SINR > T]".into(),
            log_x,
            log_y: false,
            series: cov,
        },
        Panel {
            title: "Constrained ASE".into(),
            x_label: x_label.into(),
            y_label: "bit/s/Hz/km²".into(),
            log_x,
            log_y: log_x,
            series: ase_series,
        },
    ]
}

/// Files for a single sweep: the CSV, its limit companion and, if asked
/// for, the SVG.
pub fn sweep_files(
    resolved: &Resolved,
    rows: &[Row],
    csv: &Path,
    svg: Option<&Path>,
) -> Vec<(PathBuf, String)> {
    let comments = provenance("sweep", resolved);
    let label = resolved.variable.label();
    let mut files = vec![(csv.to_path_buf(), output::render_csv(&comments, label, rows))];
    if let Some(text) = output::render_limit_csv(&comments, label, rows) {
        files.push((output::limit_path(csv), text));
    }
    if let Some(svg) = svg {
        let curve = Curve {
            label: "analytic".into(),
            resolved,
            rows,
        };
        files.push((svg.to_path_buf(), output::render_svg(&panels(&[curve]))));
    }
    files
}
