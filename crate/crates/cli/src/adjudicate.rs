//! Monte Carlo adjudication of the two convention toggles: where the fading
//! rate enters the adapted coverage limit, and which tail term completes the
//! dense-network coverage bound.

use std::f64::consts::{LN_2, PI};
use std::fmt::Write as _;

use udn_core::asymptotics::{
    adapted_coverage_limit, adapted_coverage_limit_exact, dense_coverage_upper_bound, AdaptationSchedule,
    BoundForm, MuConvention,
};
use udn_core::model::{per_km2_to_per_m2, BeamPattern, DualSlopeModel, NetworkParams};
use udn_core::montecarlo::{coverage_from_samples, run_trials, Estimate, SimConfig};

use crate::error::Result;

/// Smallest trial count the CLI accepts for an adjudication run.
pub const MIN_TRIALS: u64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Setup {
    pub mu: f64,
    pub trials: u64,
    pub seed: u64,
}

impl Default for Setup {
    fn default() -> Self {
        Self {
            mu: 2.0,
            trials: MIN_TRIALS,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// Exactly one candidate is consistent with the simulation.
    Definite(String),
    /// More than one candidate is consistent.
    Inconclusive,
    /// None is.
    Neither,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Definite(name) => write!(f, "{name}"),
            Verdict::Inconclusive => write!(f, "inconclusive"),
            Verdict::Neither => write!(f, "neither"),
        }
    }
}

fn verdict(candidates: &[Candidate]) -> Verdict {
    let inside: Vec<&Candidate> = candidates.iter().filter(|c| c.consistent).collect();
    match inside.as_slice() {
        [one] => Verdict::Definite(one.name.clone()),
        [] => Verdict::Neither,
        _ => Verdict::Inconclusive,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub name: String,
    pub value: f64,
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MuReport {
    pub params: NetworkParams,
    pub k: f64,
    pub mc: Estimate,
    pub candidates: Vec<Candidate>,
    /// Exact constant-density limit, for reference.
    pub exact: f64,
    pub verdict: Verdict,
}

/// Noiseless flat near field under the schedule with `ε = ∞`, and `K`, `T`
/// and `d₀` chosen so the Campbell exponent is `ln 2`.
pub fn mu_case(mu: f64) -> Result<(NetworkParams, f64)> {
    let k = per_km2_to_per_m2(1.0);
    let t = 0.005;
    let d0 = (LN_2 / (2.0 * PI * k * t)).sqrt();
    let model = DualSlopeModel::new(1.0, 0.0, 4.0, d0)?;
    let lambda = per_km2_to_per_m2(1e6);
    let schedule = AdaptationSchedule::new(k, f64::INFINITY)?;
    let base = NetworkParams::new(lambda, mu, 0.0, t, model, BeamPattern::symmetric(100.0, 0.0, 1.0)?)?;
    Ok((schedule.apply(&base)?, k))
}

pub fn adjudicate_mu(setup: &Setup) -> Result<MuReport> {
    let (params, k) = mu_case(setup.mu)?;
    let config = SimConfig::new(&params, setup.trials, setup.seed)?;
    let samples = run_trials(&params, &config)?;
    let mc = coverage_from_samples(&samples, params.threshold, setup.seed);
    let mut candidates = Vec::new();
    for (name, conv) in [("paper", MuConvention::Paper), ("campbell", MuConvention::Campbell)] {
        let value = adapted_coverage_limit(k, &params, conv)?.value;
        candidates.push(Candidate {
            name: name.into(),
            value,
            consistent: mc.contains(value, 3.0),
        });
    }
    Ok(MuReport {
        exact: adapted_coverage_limit_exact(k, &params)?.value,
        verdict: verdict(&candidates),
        params,
        k,
        mc,
        candidates,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct D0Report {
    pub density_per_km2: f64,
    pub mc: Estimate,
    /// Estimate of `P[r₀ ≥ d₀]`, the event the tail term stands for.
    pub mc_far: Estimate,
    pub candidates: Vec<D0Candidate>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq)]
pub struct D0Candidate {
    pub candidate: Candidate,
    pub first_term: f64,
    pub tail: f64,
}

/// A bound variant is consistent when its total is at least the simulated
/// coverage and its tail at least the simulated `P[r₀ ≥ d₀]`, each up to 3σ.
pub fn adjudicate_d0(setup: &Setup, density_per_km2: f64) -> Result<D0Report> {
    let params = NetworkParams::reference(2.0, density_per_km2)?;
    let config = SimConfig::new(&params, setup.trials, setup.seed)?;
    let samples = run_trials(&params, &config)?;
    let mc = coverage_from_samples(&samples, params.threshold, setup.seed);
    let d0 = params.model.d0();
    let mc_far = Estimate::from_values(
        samples.iter().map(|s| if s.serving_distance >= d0 { 1.0 } else { 0.0 }),
        setup.seed,
    );
    let mut candidates = Vec::new();
    for (name, form) in [("paper", BoundForm::Paper), ("d0sq", BoundForm::D0Squared)] {
        let b = dense_coverage_upper_bound(&params, form)?;
        let consistent = b.value >= mc.mean - 3.0 * mc.std_error && b.tail >= mc_far.mean - 3.0 * mc_far.std_error;
        candidates.push(D0Candidate {
            candidate: Candidate {
                name: name.into(),
                value: b.value,
                consistent,
            },
            first_term: b.first_term,
            tail: b.tail,
        });
    }
    let plain: Vec<Candidate> = candidates.iter().map(|c| c.candidate.clone()).collect();
    Ok(D0Report {
        density_per_km2,
        mc,
        mc_far,
        candidates,
        verdict: verdict(&plain),
    })
}

/// Markdown report of both toggles.
pub fn render(setup: &Setup, mu: &MuReport, d0: &D0Report) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# Adjudication report\n");
    let _ = writeln!(s, "udn {}, {} trials, seed {}\n", env!("CARGO_PKG_VERSION"), setup.trials, setup.seed);

    let p = &mu.params;
    let _ = writeln!(s, "## Fading rate in the adapted coverage limit\n");
    let _ = writeln!(
        s,
        "Flat near field, no noise, no side lobes, K = {} BS/km², λ = {} BS/km², \
         T = {}, d₀ = {:.3} m, μ = {}.\n",
        mu.k * 1e6,
        p.lambda * 1e6,
        p.threshold,
        p.model.d0(),
        p.mu
    );
    let _ = writeln!(s, "| convention | limit | inside MC ± 3σ |");
    let _ = writeln!(s, "|---|---|---|");
    for c in &mu.candidates {
        let _ = writeln!(s, "| {} | {:.6} | {} |", c.name, c.value, yes_no(c.consistent));
    }
    let _ = writeln!(
        s,
        "\nMC coverage {:.6} ± {:.6} (3σ = {:.6}); exact constant-density limit {:.6}.\n",
        mu.mc.mean,
        mu.mc.std_error,
        3.0 * mu.mc.std_error,
        mu.exact
    );
    let _ = writeln!(s, "Verdict: **{}**\n", mu.verdict);

    let _ = writeln!(s, "## Tail term of the dense coverage bound\n");
    let _ = writeln!(s, "Reference parameters with β₁ = 2 at λ = {} BS/km².\n", d0.density_per_km2);
    let _ = writeln!(s, "| variant | first term | tail | bound | consistent |");
    let _ = writeln!(s, "|---|---|---|---|---|");
    for c in &d0.candidates {
        let _ = writeln!(
            s,
            "| {} | {:.6} | {:.6} | {:.6} | {} |",
            c.candidate.name,
            c.first_term,
            c.tail,
            c.candidate.value,
            yes_no(c.candidate.consistent)
        );
    }
    let _ = writeln!(
        s,
        "\nMC coverage {:.6} ± {:.6}; MC P[r₀ ≥ d₀] {:.6} ± {:.6}.\n",
        d0.mc.mean, d0.mc.std_error, d0.mc_far.mean, d0.mc_far.std_error
    );
    let _ = writeln!(s, "Verdict: **{}**", d0.verdict);
    s
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}
