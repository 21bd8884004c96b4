//! Pinned figure grids. Each preset is a list of labelled run configurations
//! whose CSVs land next to each other in one directory, plus one SVG.

use std::path::{Path, PathBuf};

use crate::config::{
    AdaptationSection, Overrides, ParamsSection, RunConfig, Scale, Scenario, SimSection, SweepSection,
    SweepVariable,
};
use crate::error::Result;
use crate::output::{self, Row};
use crate::sweep::{self, Curve};

/// Monte Carlo trials per grid point unless `--trials` or `--no-mc` is given.
pub const PRESET_TRIALS: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Fig2,
    Fig3,
    Fig4,
}

impl Preset {
    pub fn name(&self) -> &'static str {
        match self {
            Preset::Fig2 => "fig2",
            Preset::Fig3 => "fig3",
            Preset::Fig4 => "fig4",
        }
    }

    /// `(series label, file stem, config)` triples.
    pub fn series(&self) -> Vec<(String, String, RunConfig)> {
        let sim = Some(SimSection::new(PRESET_TRIALS, 1));
        match self {
            // Coverage and ASE against density for three near-field exponents.
            Preset::Fig2 => [1.0, 2.0, 3.0]
                .iter()
                .map(|&b1| {
                    let cfg = RunConfig {
                        params: ParamsSection {
                            beta1: Some(b1),
                            ..Default::default()
                        },
                        sweep: SweepSection {
                            variable: SweepVariable::Density,
                            scale: Scale::Log,
                            start: Some(1.0),
                            stop: Some(1e6),
                            points: Some(13),
                            values: None,
                        },
                        sim: sim.clone(),
                        ..Default::default()
                    };
                    (format!("β₁ = {b1}"), format!("fig2_beta1_{b1}"), cfg)
                })
                .collect(),
            // Interference-limited ASE against the beam alignment probability.
            Preset::Fig3 => {
                let mut out = Vec::new();
                for t_db in [0.0, 7.0] {
                    for d0 in [5.0, 10.0] {
                        let cfg = RunConfig {
                            scenario: Scenario::Corollary,
                            params: ParamsSection {
                                density_per_km2: Some(1000.0),
                                threshold_db: Some(t_db),
                                d0_m: Some(d0),
                                ..Default::default()
                            },
                            sweep: SweepSection {
                                variable: SweepVariable::Alignment,
                                scale: Scale::Linear,
                                start: Some(0.05),
                                stop: Some(1.0),
                                points: Some(20),
                                values: None,
                            },
                            sim: sim.clone(),
                            ..Default::default()
                        };
                        out.push((
                            format!("T = {t_db} dB, d₀ = {d0} m"),
                            format!("fig3_t{t_db}db_d0_{d0}m"),
                            cfg,
                        ));
                    }
                }
                out
            }
            // Flat near field with the beam schedule K = 1 BS/km².
            Preset::Fig4 => {
                let mut values = Vec::new();
                for e in 0..7 {
                    let decade = 10f64.powi(e);
                    values.push(decade);
                    values.push(3.0 * decade);
                }
                values.push(9e6);
                let cfg = RunConfig {
                    scenario: Scenario::Adapted,
                    params: ParamsSection {
                        beta1: Some(0.0),
                        ..Default::default()
                    },
                    sweep: SweepSection {
                        variable: SweepVariable::Density,
                        scale: Scale::Log,
                        values: Some(values),
                        ..Default::default()
                    },
                    adaptation: Some(AdaptationSection {
                        k_per_km2: 1.0,
                        front_back_db: f64::INFINITY,
                    }),
                    sim,
                    ..Default::default()
                };
                vec![("adapted, K = 1 BS/km²".into(), "fig4_adapted_k1".into(), cfg)]
            }
        }
    }

    /// Evaluates every series and returns the files to write under `dir`.
    pub fn run(&self, dir: &Path, overrides: &Overrides) -> Result<Vec<(PathBuf, String)>> {
        let overrides = Overrides {
            out: None,
            ..overrides.clone()
        };
        let mut resolved = Vec::new();
        for (label, stem, mut cfg) in self.series() {
            cfg.apply(&overrides);
            resolved.push((label, stem, cfg.resolve()?));
        }
        let mut results: Vec<Vec<Row>> = Vec::new();
        for (_, _, r) in &resolved {
            results.push(sweep::evaluate(r)?);
        }
        let mut files = Vec::new();
        let mut curves = Vec::new();
        for ((label, stem, r), rows) in resolved.iter().zip(&results) {
            let mut comments = sweep::provenance(self.name(), r);
            comments.insert(1, format!("series: {label}"));
            let var = r.variable.label();
            let csv = dir.join(format!("{stem}.csv"));
            files.push((csv.clone(), output::render_csv(&comments, var, rows)));
            if let Some(text) = output::render_limit_csv(&comments, var, rows) {
                files.push((output::limit_path(&csv), text));
            }
            curves.push(Curve {
                label: label.clone(),
                resolved: r,
                rows,
            });
        }
        let svg = output::render_svg(&sweep::panels(&curves));
        files.push((dir.join(format!("{}.svg", self.name())), svg));
        Ok(files)
    }
}
