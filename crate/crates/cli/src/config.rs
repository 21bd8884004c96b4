//! Run configuration: the TOML schema, flag overrides and resolution into
//! model parameters.
//!
//! User-facing units are BS/km² for densities, metres for distances, degrees
//! for beamwidths and dB for gains, thresholds and the SNR at the breakpoint.
//! `inf` / `-inf` are accepted where a linear value of `∞` / `0` makes sense.
//!
//! ```toml
//! scenario = "general"          # general | corollary | adapted
//! mu_convention = "paper"       # paper | campbell
//! thm3_d0 = "paper"             # paper | d0sq
//!
//! [params]                      # every key optional, defaults shown
//! density_per_km2 = 1000.0
//! beta1 = 2.0
//! beta2 = 4.0
//! d0_m = 10.0
//! alpha0_db = 0.0
//! mu = 1.0
//! threshold_db = 7.0
//! snr_at_d0_db = 20.0           # inf for a noiseless network
//! main_bs_db = 20.0
//! side_bs_db = 0.0              # -inf for no side lobe
//! beamwidth_bs_deg = 30.0
//! main_ue_db = 10.0
//! side_ue_db = -10.0
//! beamwidth_ue_deg = 90.0
//!
//! [sweep]
//! variable = "density"          # density | threshold | alignment | d0
//! scale = "log"                 # log | linear
//! start = 1.0
//! stop = 1e6
//! points = 13
//! # values = [1.0, 10.0]        # explicit grid instead of start/stop/points
//!
//! [adaptation]                  # required by the adapted scenario
//! k_per_km2 = 1.0
//! front_back_db = inf
//!
//! [sim]                         # optional; enables Monte Carlo columns
//! trials = 100000
//! seed = 1
//! guard = 5.0
//!
//! [output]
//! csv = "out.csv"
//! svg = "out.svg"
//! ```

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use udn_core::asymptotics::{AdaptationSchedule, BoundForm, MuConvention};
use udn_core::model::{db_to_linear, per_km2_to_per_m2, BeamPattern, DualSlopeModel, NetworkParams};
use udn_core::montecarlo::SimConfig;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scenario {
    #[default]
    General,
    /// Interference-limited: no noise, no side lobes, flat near field.
    Corollary,
    /// Beams follow the adaptation schedule as the density varies.
    Adapted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum MuToggle {
    #[default]
    Paper,
    Campbell,
}

impl From<MuToggle> for MuConvention {
    fn from(t: MuToggle) -> Self {
        match t {
            MuToggle::Paper => MuConvention::Paper,
            MuToggle::Campbell => MuConvention::Campbell,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum D0Toggle {
    #[default]
    Paper,
    D0sq,
}

impl From<D0Toggle> for BoundForm {
    fn from(t: D0Toggle) -> Self {
        match t {
            D0Toggle::Paper => BoundForm::Paper,
            D0Toggle::D0sq => BoundForm::D0Squared,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepVariable {
    #[default]
    Density,
    Threshold,
    /// Beam alignment probability `q`; both beamwidths are set to `2π√q`.
    Alignment,
    D0,
}

impl SweepVariable {
    /// Column label, including the unit.
    pub fn label(&self) -> &'static str {
        match self {
            SweepVariable::Density => "density_per_km2",
            SweepVariable::Threshold => "threshold_db",
            SweepVariable::Alignment => "alignment",
            SweepVariable::D0 => "d0_m",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    #[default]
    Log,
    Linear,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSection {
    pub density_per_km2: Option<f64>,
    pub beta1: Option<f64>,
    pub beta2: Option<f64>,
    pub d0_m: Option<f64>,
    pub alpha0_db: Option<f64>,
    pub mu: Option<f64>,
    pub threshold_db: Option<f64>,
    pub snr_at_d0_db: Option<f64>,
    pub main_bs_db: Option<f64>,
    pub side_bs_db: Option<f64>,
    pub beamwidth_bs_deg: Option<f64>,
    pub main_ue_db: Option<f64>,
    pub side_ue_db: Option<f64>,
    pub beamwidth_ue_deg: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    #[serde(default)]
    pub variable: SweepVariable,
    #[serde(default)]
    pub scale: Scale,
    pub start: Option<f64>,
    pub stop: Option<f64>,
    pub points: Option<usize>,
    pub values: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdaptationSection {
    pub k_per_km2: f64,
    #[serde(default = "infinite")]
    pub front_back_db: f64,
}

fn infinite() -> f64 {
    f64::INFINITY
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimSection {
    pub trials: u64,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_guard")]
    pub guard: f64,
}

fn default_seed() -> u64 {
    1
}

fn default_guard() -> f64 {
    SimConfig::DEFAULT_GUARD
}

impl SimSection {
    pub fn new(trials: u64, seed: u64) -> Self {
        Self {
            trials,
            seed,
            guard: SimConfig::DEFAULT_GUARD,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub csv: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub scenario: Scenario,
    #[serde(default)]
    pub mu_convention: MuToggle,
    #[serde(default)]
    pub thm3_d0: D0Toggle,
    #[serde(default)]
    pub params: ParamsSection,
    #[serde(default)]
    pub sweep: SweepSection,
    pub adaptation: Option<AdaptationSection>,
    pub sim: Option<SimSection>,
    /// Not echoed into outputs, so that the CSV does not depend on where it
    /// is written.
    #[serde(default, skip_serializing)]
    pub output: OutputSection,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub no_mc: bool,
    pub mu_convention: Option<MuToggle>,
    pub thm3_d0: Option<D0Toggle>,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| CliError::config("document", e.message().to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
        Self::from_toml(&text)
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(out) = &o.out {
            self.output.csv = Some(out.clone());
        }
        if let Some(trials) = o.trials {
            match &mut self.sim {
                Some(sim) => sim.trials = trials,
                None => self.sim = Some(SimSection::new(trials, default_seed())),
            }
        }
        if let (Some(seed), Some(sim)) = (o.seed, &mut self.sim) {
            sim.seed = seed;
        }
        if o.no_mc {
            self.sim = None;
        }
        if let Some(m) = o.mu_convention {
            self.mu_convention = m;
        }
        if let Some(d) = o.thm3_d0 {
            self.thm3_d0 = d;
        }
    }

    /// Checks every field and scenario precondition and fills in defaults.
    pub fn resolve(&self) -> Result<Resolved> {
        let p = &self.params;
        let var = self.sweep.variable;

        let conflict = |field: &str, why: &str| CliError::config(format!("params.{field}"), why);
        let swept = |field: &str, v: SweepVariable, given: bool| -> Result<()> {
            if given && var == v {
                return Err(conflict(field, "is the sweep variable and must not be set"));
            }
            Ok(())
        };
        swept("density_per_km2", SweepVariable::Density, p.density_per_km2.is_some())?;
        swept("threshold_db", SweepVariable::Threshold, p.threshold_db.is_some())?;
        swept("d0_m", SweepVariable::D0, p.d0_m.is_some())?;
        swept("beamwidth_bs_deg", SweepVariable::Alignment, p.beamwidth_bs_deg.is_some())?;
        swept("beamwidth_ue_deg", SweepVariable::Alignment, p.beamwidth_ue_deg.is_some())?;

        let mut beta1 = p.beta1.unwrap_or(2.0);
        let mut snr_db = p.snr_at_d0_db.unwrap_or(20.0);
        let mut side_bs_db = p.side_bs_db.unwrap_or(0.0);
        let mut side_ue_db = p.side_ue_db.unwrap_or(-10.0);

        match self.scenario {
            Scenario::General => {}
            Scenario::Corollary => {
                let forced = [
                    ("beta1", p.beta1, 0.0),
                    ("snr_at_d0_db", p.snr_at_d0_db, f64::INFINITY),
                    ("side_bs_db", p.side_bs_db, f64::NEG_INFINITY),
                    ("side_ue_db", p.side_ue_db, f64::NEG_INFINITY),
                ];
                for (field, given, required) in forced {
                    if given.is_some_and(|v| v != required) {
                        return Err(conflict(field, &format!("the corollary scenario requires {required}")));
                    }
                }
                beta1 = 0.0;
                snr_db = f64::INFINITY;
                side_bs_db = f64::NEG_INFINITY;
                side_ue_db = f64::NEG_INFINITY;
            }
            Scenario::Adapted => {
                if self.adaptation.is_none() {
                    return Err(CliError::config("adaptation", "the adapted scenario needs an [adaptation] section"));
                }
                if var != SweepVariable::Density {
                    return Err(CliError::config("sweep.variable", "the adapted scenario sweeps density"));
                }
                let scheduled = [
                    ("side_bs_db", p.side_bs_db),
                    ("side_ue_db", p.side_ue_db),
                    ("main_ue_db", p.main_ue_db),
                    ("beamwidth_bs_deg", p.beamwidth_bs_deg),
                    ("beamwidth_ue_deg", p.beamwidth_ue_deg),
                ];
                for (field, given) in scheduled {
                    if given.is_some() {
                        return Err(conflict(field, "is set by the adaptation schedule"));
                    }
                }
            }
        }
        if self.scenario != Scenario::Adapted && self.adaptation.is_some() {
            return Err(CliError::config("adaptation", "only valid with scenario = \"adapted\""));
        }

        let finite = |field: &str, v: f64| -> Result<f64> {
            if v.is_finite() {
                Ok(v)
            } else {
                Err(CliError::config(format!("params.{field}"), "must be finite"))
            }
        };
        let beta2 = finite("beta2", p.beta2.unwrap_or(4.0))?;
        let d0 = finite("d0_m", p.d0_m.unwrap_or(10.0))?;
        let alpha0 = db_to_linear(finite("alpha0_db", p.alpha0_db.unwrap_or(0.0))?);
        let beta1 = finite("beta1", beta1)?;
        let model = DualSlopeModel::new(alpha0, beta1, beta2, d0).map_err(field_error("params"))?;

        if snr_db.is_nan() || snr_db == f64::NEG_INFINITY {
            return Err(conflict("snr_at_d0_db", "must be a number or inf"));
        }
        let main_bs = db_to_linear(finite("main_bs_db", p.main_bs_db.unwrap_or(20.0))?);
        let main_ue = db_to_linear(finite("main_ue_db", p.main_ue_db.unwrap_or(10.0))?);
        let side = |field: &str, v: f64| -> Result<f64> {
            if v.is_nan() || v == f64::INFINITY {
                return Err(conflict(field, "must be a number or -inf"));
            }
            Ok(db_to_linear(v))
        };
        let beams = BeamPattern::new(
            main_bs,
            side("side_bs_db", side_bs_db)?,
            finite("beamwidth_bs_deg", p.beamwidth_bs_deg.unwrap_or(30.0))?.to_radians(),
            main_ue,
            side("side_ue_db", side_ue_db)?,
            finite("beamwidth_ue_deg", p.beamwidth_ue_deg.unwrap_or(90.0))?.to_radians(),
        )
        .map_err(field_error("params"))?;

        let density = finite("density_per_km2", p.density_per_km2.unwrap_or(1000.0))?;
        let threshold = db_to_linear(finite("threshold_db", p.threshold_db.unwrap_or(7.0))?);
        let mu = finite("mu", p.mu.unwrap_or(1.0))?;
        let sigma2 = model.at_breakpoint() / db_to_linear(snr_db);
        let base = NetworkParams::new(per_km2_to_per_m2(density), mu, sigma2, threshold, model, beams)
            .map_err(field_error("params"))?;

        let schedule = match &self.adaptation {
            Some(a) => {
                if !(a.front_back_db > 0.0) {
                    return Err(CliError::config("adaptation.front_back_db", "must be positive (or inf)"));
                }
                let s = AdaptationSchedule::new(per_km2_to_per_m2(a.k_per_km2), db_to_linear(a.front_back_db))
                    .map_err(field_error("adaptation"))?;
                Some(s)
            }
            None => None,
        };

        let grid = self.sweep.grid()?;
        for &v in &grid {
            let ok = match var {
                SweepVariable::Density | SweepVariable::D0 => v > 0.0 && v.is_finite(),
                SweepVariable::Threshold => v.is_finite(),
                SweepVariable::Alignment => v > 0.0 && v <= 1.0,
            };
            if !ok {
                return Err(CliError::config("sweep", format!("grid value {v} is out of range for {}", var.label())));
            }
        }

        if let Some(sim) = &self.sim {
            if sim.trials < 1 {
                return Err(CliError::config("sim.trials", "must be >= 1"));
            }
            if !(sim.guard >= 1.0) {
                return Err(CliError::config("sim.guard", "must be >= 1"));
            }
        }

        let resolved = Resolved {
            scenario: self.scenario,
            variable: var,
            grid,
            base,
            snr_at_d0_db: snr_db,
            schedule,
            sim: self.sim.clone(),
            mu_convention: self.mu_convention,
            thm3_d0: self.thm3_d0,
            echo: self.echo(beta1, snr_db, side_bs_db, side_ue_db),
        };
        // Every grid point must map to a valid parameter set.
        for &v in &resolved.grid {
            resolved.params_at(v)?;
        }
        Ok(resolved)
    }

    /// The configuration with every default filled in, output paths left out.
    fn echo(&self, beta1: f64, snr_db: f64, side_bs_db: f64, side_ue_db: f64) -> String {
        let p = &self.params;
        let var = self.sweep.variable;
        let unless = |v: SweepVariable, x: f64| if var == v { None } else { Some(x) };
        let adapted = self.scenario == Scenario::Adapted;
        let unless_adapted = |x: f64| if adapted { None } else { Some(x) };
        let full = RunConfig {
            scenario: self.scenario,
            mu_convention: self.mu_convention,
            thm3_d0: self.thm3_d0,
            params: ParamsSection {
                density_per_km2: unless(SweepVariable::Density, p.density_per_km2.unwrap_or(1000.0)),
                beta1: Some(beta1),
                beta2: Some(p.beta2.unwrap_or(4.0)),
                d0_m: unless(SweepVariable::D0, p.d0_m.unwrap_or(10.0)),
                alpha0_db: Some(p.alpha0_db.unwrap_or(0.0)),
                mu: Some(p.mu.unwrap_or(1.0)),
                threshold_db: unless(SweepVariable::Threshold, p.threshold_db.unwrap_or(7.0)),
                snr_at_d0_db: Some(snr_db),
                main_bs_db: Some(p.main_bs_db.unwrap_or(20.0)),
                side_bs_db: unless_adapted(side_bs_db),
                beamwidth_bs_deg: unless_adapted(p.beamwidth_bs_deg.unwrap_or(30.0))
                    .filter(|_| var != SweepVariable::Alignment),
                main_ue_db: unless_adapted(p.main_ue_db.unwrap_or(10.0)),
                side_ue_db: unless_adapted(side_ue_db),
                beamwidth_ue_deg: unless_adapted(p.beamwidth_ue_deg.unwrap_or(90.0))
                    .filter(|_| var != SweepVariable::Alignment),
            },
            sweep: self.sweep.clone(),
            adaptation: self.adaptation.clone(),
            sim: self.sim.clone(),
            output: OutputSection::default(),
        };
        toml::to_string(&full).unwrap_or_default()
    }
}

fn field_error(section: &'static str) -> impl Fn(udn_core::Error) -> CliError {
    move |e| match e {
        udn_core::Error::InvalidParameter { field, reason } => {
            CliError::config(format!("{section}.{field}"), reason)
        }
        other => CliError::config(section, other.to_string()),
    }
}

impl SweepSection {
    /// Grid in user units.
    pub fn grid(&self) -> Result<Vec<f64>> {
        if let Some(values) = &self.values {
            if self.start.is_some() || self.stop.is_some() || self.points.is_some() {
                return Err(CliError::config("sweep.values", "give either values or start/stop/points"));
            }
            if values.is_empty() {
                return Err(CliError::config("sweep.values", "must not be empty"));
            }
            return Ok(values.clone());
        }
        let (Some(start), Some(stop), Some(points)) = (self.start, self.stop, self.points) else {
            return Err(CliError::config("sweep", "needs values or all of start, stop, points"));
        };
        if points < 1 {
            return Err(CliError::config("sweep.points", "must be >= 1"));
        }
        if !(start.is_finite() && stop.is_finite()) {
            return Err(CliError::config("sweep.start", "start and stop must be finite"));
        }
        if points == 1 {
            return Ok(vec![start]);
        }
        let n = (points - 1) as f64;
        Ok(match self.scale {
            Scale::Linear => (0..points).map(|i| start + (stop - start) * i as f64 / n).collect(),
            Scale::Log => {
                if !(start > 0.0 && stop > 0.0) {
                    return Err(CliError::config("sweep.scale", "a log grid needs positive start and stop"));
                }
                let (a, b) = (start.log10(), stop.log10());
                (0..points).map(|i| 10f64.powf(a + (b - a) * i as f64 / n)).collect()
            }
        })
    }
}

/// A validated configuration.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub scenario: Scenario,
    pub variable: SweepVariable,
    /// Grid in user units.
    pub grid: Vec<f64>,
    /// Parameters before the sweep value is applied.
    pub base: NetworkParams,
    pub snr_at_d0_db: f64,
    pub schedule: Option<AdaptationSchedule>,
    pub sim: Option<SimSection>,
    pub mu_convention: MuToggle,
    pub thm3_d0: D0Toggle,
    /// TOML text of the fully resolved configuration.
    pub echo: String,
}

impl Resolved {
    /// Parameters at one grid value.
    pub fn params_at(&self, value: f64) -> Result<NetworkParams> {
        let b = &self.base;
        let p = match self.variable {
            SweepVariable::Density => b.with_lambda(per_km2_to_per_m2(value))?,
            SweepVariable::Threshold => b.with_threshold(db_to_linear(value))?,
            SweepVariable::Alignment => {
                let width = 2.0 * PI * value.sqrt();
                let mut beams = b.beams;
                beams.width_bs = width;
                beams.width_ue = width;
                b.with_beams(beams)?
            }
            SweepVariable::D0 => {
                let model = b.model.with_d0(value)?;
                // Keep the SNR at the breakpoint fixed.
                let sigma2 = model.at_breakpoint() / db_to_linear(self.snr_at_d0_db);
                b.with_model(model)?.with_sigma2(sigma2)?
            }
        };
        match &self.schedule {
            Some(s) => Ok(s.apply(&p)?),
            None => Ok(p),
        }
    }

    pub fn sim_config(&self, params: &NetworkParams) -> Result<Option<SimConfig>> {
        let Some(sim) = &self.sim else { return Ok(None) };
        let radius = SimConfig::default_window_radius(params, sim.guard);
        Ok(Some(SimConfig::with_window(params, sim.trials, sim.seed, radius, sim.guard)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use udn_core::model::linear_to_db;

    #[test]
    fn defaults_match_reference_parameters() {
        let cfg = RunConfig::from_toml("[sweep]\nvalues = [1000.0]\n").unwrap();
        let r = cfg.resolve().unwrap();
        let p = r.params_at(1000.0).unwrap();
        let reference = NetworkParams::reference(2.0, 1000.0).unwrap();
        assert_eq!(p.gains(), reference.gains());
        assert!((p.sigma2 - reference.sigma2).abs() < 1e-18);
        assert!((p.threshold - reference.threshold).abs() < 1e-12);
        assert!((p.lambda - reference.lambda).abs() < 1e-18);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let e = RunConfig::from_toml("[params]\nbeta3 = 1.0\n").unwrap_err();
        assert!(e.to_string().contains("beta3"), "{e}");
        assert_eq!(e.exit_code(), 2);
        assert!(RunConfig::from_toml("colour = 1\n").is_err());
    }

    #[test]
    fn errors_name_the_field() {
        let cases = [
            ("[params]\nbeta1 = 5.0\n[sweep]\nvalues=[1.0]\n", "beta1"),
            ("[params]\nbeta2 = 1.5\n[sweep]\nvalues=[1.0]\n", "beta2"),
            ("[params]\nmu = -1.0\n[sweep]\nvalues=[1.0]\n", "mu"),
            ("[sweep]\nvalues=[-1.0]\n", "sweep"),
            ("[sweep]\nstart = 1.0\nstop = 10.0\n", "sweep"),
            ("[params]\ndensity_per_km2 = 5.0\n[sweep]\nvalues=[1.0]\n", "density_per_km2"),
            ("scenario = \"corollary\"\n[params]\nbeta1 = 2.0\n[sweep]\nvalues=[1.0]\n", "beta1"),
            ("scenario = \"adapted\"\n[sweep]\nvalues=[1.0]\n", "adaptation"),
            ("[sweep]\nvalues=[1.0]\n[sim]\ntrials = 0\n", "sim.trials"),
        ];
        for (text, field) in cases {
            let e = RunConfig::from_toml(text).unwrap().resolve().unwrap_err();
            match &e {
                CliError::Config { field: f, .. } => assert!(f.contains(field), "{text}: {e}"),
                other => panic!("{text}: {other}"),
            }
            assert_eq!(e.exit_code(), 2);
        }
    }

    #[test]
    fn corollary_forces_its_preconditions() {
        let cfg = RunConfig::from_toml("scenario = \"corollary\"\n[sweep]\nvalues=[100.0]\n").unwrap();
        let p = cfg.resolve().unwrap().params_at(100.0).unwrap();
        assert_eq!(p.sigma2, 0.0);
        assert_eq!(p.model.beta1(), 0.0);
        assert!(!p.beams.has_side_lobes());
    }

    #[test]
    fn infeasible_schedule_exits_with_four() {
        let text = "scenario = \"adapted\"\n[params]\nbeta1 = 0.0\n[sweep]\nvalues=[1e5]\n\
                    [adaptation]\nk_per_km2 = 1.0\nfront_back_db = 20.0\n";
        let e = RunConfig::from_toml(text).unwrap().resolve().unwrap_err();
        assert_eq!(e.exit_code(), 4, "{e}");
    }

    #[test]
    fn log_grid_hits_decades() {
        let s = SweepSection {
            start: Some(1.0),
            stop: Some(1e6),
            points: Some(7),
            ..Default::default()
        };
        let g = s.grid().unwrap();
        for (i, v) in g.iter().enumerate() {
            assert_eq!(*v, 10f64.powi(i as i32));
        }
    }

    #[test]
    fn db_round_trip() {
        for i in -400..=400 {
            let db = i as f64 / 10.0;
            assert!((linear_to_db(db_to_linear(db)) - db).abs() <= 1e-12);
            let lin = 10f64.powf(i as f64 / 37.0);
            assert!(((db_to_linear(linear_to_db(lin)) - lin) / lin).abs() <= 1e-12);
        }
    }

    #[test]
    fn overrides_take_precedence() {
        let mut cfg = RunConfig::from_toml("[sweep]\nvalues=[1.0]\n[sim]\ntrials = 10\nseed = 3\n").unwrap();
        cfg.apply(&Overrides {
            trials: Some(20),
            seed: Some(4),
            mu_convention: Some(MuToggle::Campbell),
            ..Default::default()
        });
        assert_eq!(cfg.sim, Some(SimSection { trials: 20, seed: 4, guard: 5.0 }));
        assert_eq!(cfg.mu_convention, MuToggle::Campbell);
        cfg.apply(&Overrides {
            no_mc: true,
            ..Default::default()
        });
        assert!(cfg.sim.is_none());
    }

    #[test]
    fn echo_parses_back() {
        let cfg = RunConfig::from_toml(
            "scenario = \"corollary\"\n[sweep]\nvariable = \"alignment\"\nscale = \"linear\"\nstart = 0.1\nstop = 1.0\npoints = 4\n",
        )
        .unwrap();
        let r = cfg.resolve().unwrap();
        let back = RunConfig::from_toml(&r.echo).unwrap().resolve().unwrap();
        assert_eq!(back.echo, r.echo);
        assert_eq!(back.grid, r.grid);
    }
}
