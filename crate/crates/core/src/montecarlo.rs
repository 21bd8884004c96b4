//! Monte Carlo simulator of the typical user in a PPP network.
//!
//! Base stations are marked with an interferer gain class drawn from
//! [`gain_distribution`]; independent marking makes each class an
//! independent PPP of density `λ b_k`, and each is generated radially from
//! the UE outwards by exponential spacings in `πr²` until its class radius.
//! Every class radius covers the base window, so the union restricted to the
//! window is the PPP of density `λ`. The nearest point in the window serves
//! with the aligned gain `N_B N_U`; its mark is dropped.
//!
//! Randomness is keyed by `(seed, trial, attempt, slot)` through the ChaCha
//! stream id, and the draw index is the position in that stream, so a trial
//! is reproducible on its own and independent of scheduling.

use std::f64::consts::{LN_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Poisson};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{gain_distribution, DualSlopeModel, NetworkParams};

const CLASSES: usize = 4;
const FADING_SLOT: u64 = 4;
const MAX_ATTEMPTS: u32 = 32;

/// Simulation controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub trials: u64,
    pub seed: u64,
    /// Radius in metres of the disc around the UE that holds the serving BS.
    pub window_radius: f64,
    /// Per gain class, the radius out to which that class is generated as
    /// interferers. Never below `window_radius`; sparse or strong classes
    /// reach further.
    pub class_radii: [f64; CLASSES],
    /// The window must be at least this many nearest-neighbour scales
    /// `(λπ)^{-1/2}` wide.
    pub min_guard_multiplier: f64,
}

impl SimConfig {
    pub const DEFAULT_GUARD: f64 = 5.0;
    /// Largest admissible share of the mean interference lost to the window.
    pub const TRUNCATION_TOLERANCE: f64 = 1e-3;

    /// Config with the default window for `params`.
    pub fn new(params: &NetworkParams, trials: u64, seed: u64) -> Result<Self> {
        let radius = Self::default_window_radius(params, Self::DEFAULT_GUARD);
        Self::with_window(params, trials, seed, radius, Self::DEFAULT_GUARD)
    }

    /// Config with base window `window_radius`; the class radii are extended
    /// as far as the truncation tolerance needs.
    pub fn with_window(
        params: &NetworkParams,
        trials: u64,
        seed: u64,
        window_radius: f64,
        min_guard_multiplier: f64,
    ) -> Result<Self> {
        let config = Self {
            trials,
            seed,
            window_radius,
            class_radii: class_window_radii(params, window_radius),
            min_guard_multiplier,
        };
        config.check(params)?;
        Ok(config)
    }

    /// Same seed and window, different trial count.
    pub fn with_trials(&self, trials: u64) -> Self {
        Self { trials, ..*self }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self { seed, ..*self }
    }

    /// Every radius multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            window_radius: factor * self.window_radius,
            class_radii: self.class_radii.map(|r| factor * r),
            ..*self
        }
    }

    pub fn check(&self, params: &NetworkParams) -> Result<()> {
        params.validate()?;
        if self.trials < 1 {
            return Err(Error::invalid("trials", "must be >= 1"));
        }
        if !(self.min_guard_multiplier >= 1.0) {
            return Err(Error::invalid("min_guard_multiplier", "must be >= 1"));
        }
        if !(self.window_radius > 0.0 && self.window_radius.is_finite()) {
            return Err(Error::invalid("window_radius", "must be positive and finite"));
        }
        if !self.class_radii.iter().all(|&r| r >= self.window_radius && r.is_finite()) {
            return Err(Error::invalid("class_radii", "must be finite and at least window_radius"));
        }
        let guard = self.min_guard_multiplier * nearest_neighbor_scale(params.lambda);
        if self.window_radius < guard {
            return Err(Error::invalid(
                "window_radius",
                format!("{} m is below the guard radius {guard} m", self.window_radius),
            ));
        }
        let ratio = truncation_ratio(params, &self.class_radii);
        if ratio > Self::TRUNCATION_TOLERANCE {
            return Err(Error::invalid(
                "class_radii",
                format!(
                    "{:?} m loses a fraction {ratio:e} of the mean interference (limit {:e})",
                    self.class_radii,
                    Self::TRUNCATION_TOLERANCE
                ),
            ));
        }
        Ok(())
    }

    /// `max(20 d₀, guard·(λπ)^{-1/2})`.
    pub fn default_window_radius(params: &NetworkParams, guard: f64) -> f64 {
        (20.0 * params.model.d0()).max(guard * nearest_neighbor_scale(params.lambda))
    }
}

/// `(λπ)^{-1/2}`.
pub fn nearest_neighbor_scale(lambda: f64) -> f64 {
    (lambda * PI).sqrt().recip()
}

/// Mean nearest-point distance `1/(2√λ)` of a PPP of density `λ`.
fn reference_radius(lambda: f64) -> f64 {
    0.5 / lambda.sqrt()
}

/// `∫_a^∞ r L(r) dr`.
fn radial_moment(m: &DualSlopeModel, a: f64) -> f64 {
    let d0 = m.d0();
    let b1 = m.beta1();
    let mut total = 0.0;
    if a < d0 {
        total += if b1 == 2.0 {
            m.alpha0() * (d0 / a).ln()
        } else {
            m.alpha0() * (d0.powf(2.0 - b1) - a.powf(2.0 - b1)) / (2.0 - b1)
        };
    }
    total + m.far_coefficient() * a.max(d0).powf(2.0 - m.beta2()) / (m.beta2() - 2.0)
}

/// `(λ_k G_k, ∫_{r_k}^∞ r L(r) dr)` per class, where `r_k` is the class's own
/// mean nearest distance; the product is the class's mean interference from
/// there outwards, up to `2π`.
fn class_weights(params: &NetworkParams) -> [(f64, f64); CLASSES] {
    let dist = gain_distribution(&params.beams);
    std::array::from_fn(|k| {
        let density = params.lambda * dist.probabilities[k];
        let weight = density * dist.gains[k];
        if weight > 0.0 {
            (weight, radial_moment(&params.model, reference_radius(density)))
        } else {
            (0.0, 0.0)
        }
    })
}

/// Class radii of at least `base` that each lose at most an equal share of
/// the truncation tolerance, with a small margin.
pub fn class_window_radii(params: &NetworkParams, base: f64) -> [f64; CLASSES] {
    let m = &params.model;
    let weights = class_weights(params);
    let reference: f64 = weights.iter().map(|(w, i)| w * i).sum();
    let active = weights.iter().filter(|(w, _)| *w > 0.0).count().max(1) as f64;
    let e = m.beta2() - 2.0;
    weights.map(|(w, _)| {
        if w == 0.0 {
            return base;
        }
        // For R ≥ d₀ the lost part is w C R^{2−β₂}/(β₂−2).
        let target = 0.99 * SimConfig::TRUNCATION_TOLERANCE * reference / active;
        let needed = (w * m.far_coefficient() / (e * target)).powf(1.0 / e);
        base.max(needed)
    })
}

/// Share of the gain-weighted mean interference, each class counted from
/// its own mean nearest distance, that lies beyond the class radii.
pub fn truncation_ratio(params: &NetworkParams, class_radii: &[f64; CLASSES]) -> f64 {
    let weights = class_weights(params);
    let reference: f64 = weights.iter().map(|(w, i)| w * i).sum();
    if reference == 0.0 {
        return 0.0;
    }
    let lost: f64 = weights
        .iter()
        .zip(class_radii)
        .map(|(&(w, _), &r)| if w > 0.0 { w * radial_moment(&params.model, r) } else { 0.0 })
        .sum();
    lost / reference
}

/// One network realization seen from the typical UE.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinrSample {
    /// Linear SINR; `+∞` when there is neither noise nor interference.
    pub sinr: f64,
    pub serving_distance: f64,
    pub serving_fading: f64,
    /// Interferers in the window, any gain.
    pub n_interferers: u64,
    /// Interferers per gain class.
    pub class_counts: [u64; CLASSES],
    /// Realizations discarded because the window was empty.
    pub redraws: u32,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    /// Sample standard deviation over `√trials`.
    pub std_error: f64,
    pub trials: u64,
    pub seed: u64,
}

impl Estimate {
    /// Builds the estimate from per-trial values in trial order.
    pub fn from_values(values: impl IntoIterator<Item = f64>, seed: u64) -> Self {
        let mut n = 0u64;
        let mut mean = 0.0;
        let mut m2 = 0.0;
        for v in values {
            n += 1;
            let delta = v - mean;
            mean += delta / n as f64;
            m2 += delta * (v - mean);
        }
        let std_error = if n > 1 {
            (m2 / (n - 1) as f64).sqrt() / (n as f64).sqrt()
        } else {
            0.0
        };
        Estimate {
            mean,
            std_error,
            trials: n,
            seed,
        }
    }

    pub fn contains(&self, value: f64, sigmas: f64) -> bool {
        (self.mean - value).abs() <= sigmas * self.std_error
    }
}

/// ASE estimate in bit/s/Hz/m².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AseEstimate {
    pub estimate: Estimate,
    /// Trials with infinite SINR left out of the mean.
    pub excluded: u64,
    /// More than 0.1% of the trials were excluded.
    pub warning: bool,
}

/// `r^{-β}` from `r²`, with cheap paths for the common exponents.
#[derive(Debug, Clone, Copy)]
enum InversePower {
    Zero,
    Half,
    One,
    ThreeHalves,
    Two,
    General(f64),
}

impl InversePower {
    fn new(beta: f64) -> Self {
        match beta {
            0.0 => InversePower::Zero,
            1.0 => InversePower::Half,
            2.0 => InversePower::One,
            3.0 => InversePower::ThreeHalves,
            4.0 => InversePower::Two,
            b => InversePower::General(-0.5 * b),
        }
    }

    #[inline]
    fn of_square(self, r2: f64) -> f64 {
        match self {
            InversePower::Zero => 1.0,
            InversePower::Half => r2.sqrt().recip(),
            InversePower::One => r2.recip(),
            InversePower::ThreeHalves => (r2 * r2.sqrt()).recip(),
            InversePower::Two => (r2 * r2).recip(),
            InversePower::General(e) => r2.powf(e),
        }
    }
}

/// Path loss as a function of `r²`.
#[derive(Debug, Clone, Copy)]
struct PathLoss {
    alpha0: f64,
    far: f64,
    d0_sq: f64,
    near_power: InversePower,
    far_power: InversePower,
}

impl PathLoss {
    fn new(m: &DualSlopeModel) -> Self {
        Self {
            alpha0: m.alpha0(),
            far: m.far_coefficient(),
            d0_sq: m.d0() * m.d0(),
            near_power: InversePower::new(m.beta1()),
            far_power: InversePower::new(m.beta2()),
        }
    }

    #[inline]
    fn of_square(&self, r2: f64) -> f64 {
        if r2 < self.d0_sq {
            self.alpha0 * self.near_power.of_square(r2)
        } else {
            self.far * self.far_power.of_square(r2)
        }
    }
}

/// Everything a trial needs, computed once per run.
struct Simulator {
    lambda_classes: [f64; CLASSES],
    gains: [f64; CLASSES],
    serving_gain: f64,
    mu: f64,
    sigma2: f64,
    window_sq: f64,
    class_sq: [f64; CLASSES],
    path_loss: PathLoss,
    key: <ChaCha8Rng as SeedableRng>::Seed,
}

/// Per-class outcome: the nearest point and the interference of the others.
#[derive(Debug, Clone, Copy, Default)]
struct ClassDraw {
    first_r2: Option<f64>,
    first_power: f64,
    rest_power: f64,
    count: u64,
}

impl Simulator {
    fn new(params: &NetworkParams, config: &SimConfig) -> Result<Self> {
        config.check(params)?;
        let dist = gain_distribution(&params.beams);
        let lambda_classes = dist.probabilities.map(|b| params.lambda * b);
        Ok(Self {
            lambda_classes,
            gains: dist.gains,
            serving_gain: params.beams.serving_gain(),
            mu: params.mu,
            sigma2: params.sigma2,
            window_sq: config.window_radius * config.window_radius,
            class_sq: config.class_radii.map(|r| r * r),
            path_loss: PathLoss::new(&params.model),
            key: ChaCha8Rng::seed_from_u64(config.seed).get_seed(),
        })
    }

    fn rng(&self, trial: u64, attempt: u32, slot: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::from_seed(self.key);
        rng.set_stream((trial << 8) | ((attempt as u64) << 3) | slot);
        rng
    }

    fn class(&self, k: usize, trial: u64, attempt: u32) -> ClassDraw {
        let density = self.lambda_classes[k];
        if density == 0.0 {
            return ClassDraw::default();
        }
        let mut rng = self.rng(trial, attempt, k as u64);
        let step = 1.0 / (density * PI);
        let spacing: f64 = rng.sample(Exp1);
        let first = spacing * step;
        let limit = self.class_sq[k];
        if first > limit {
            return ClassDraw::default();
        }
        let gain = self.gains[k];
        if gain == 0.0 {
            // These BSs never contribute; only their number is recorded.
            let mean = density * PI * (limit - first);
            let rest = if mean > 0.0 {
                Poisson::new(mean).map(|p| p.sample(&mut rng) as u64).unwrap_or(0)
            } else {
                0
            };
            return ClassDraw {
                first_r2: Some(first),
                first_power: 0.0,
                rest_power: 0.0,
                count: 1 + rest,
            };
        }
        let inv_mu = 1.0 / self.mu;
        let g: f64 = rng.sample::<f64, _>(Exp1) * inv_mu;
        let first_power = gain * g * self.path_loss.of_square(first);
        let mut rest_power = 0.0;
        let mut count = 1;
        let mut r2 = first;
        loop {
            let spacing: f64 = rng.sample(Exp1);
            r2 += spacing * step;
            if r2 > limit {
                break;
            }
            let g: f64 = rng.sample::<f64, _>(Exp1) * inv_mu;
            rest_power += g * self.path_loss.of_square(r2);
            count += 1;
        }
        ClassDraw {
            first_r2: Some(first),
            first_power,
            rest_power: gain * rest_power,
            count,
        }
    }

    fn trial(&self, trial: u64) -> Result<SinrSample> {
        for attempt in 0..MAX_ATTEMPTS {
            let draws: [ClassDraw; CLASSES] = std::array::from_fn(|k| self.class(k, trial, attempt));
            let serving = (0..CLASSES)
                .filter_map(|k| draws[k].first_r2.map(|r2| (k, r2)))
                .filter(|&(_, r2)| r2 <= self.window_sq)
                .min_by(|a, b| a.1.total_cmp(&b.1));
            let Some((serving_class, r2)) = serving else {
                continue;
            };
            let mut interference = 0.0;
            let mut class_counts = [0u64; CLASSES];
            for (k, d) in draws.iter().enumerate() {
                interference += d.rest_power;
                class_counts[k] = d.count;
                if k != serving_class {
                    interference += d.first_power;
                }
            }
            class_counts[serving_class] -= 1;
            let mut rng = self.rng(trial, attempt, FADING_SLOT);
            let h: f64 = rng.sample::<f64, _>(Exp1) / self.mu;
            let signal = self.serving_gain * self.path_loss.of_square(r2) * h;
            let denominator = interference + self.sigma2;
            let sinr = if denominator == 0.0 {
                f64::INFINITY
            } else {
                signal / denominator
            };
            return Ok(SinrSample {
                sinr,
                serving_distance: r2.sqrt(),
                serving_fading: h,
                n_interferers: class_counts.iter().sum(),
                class_counts,
                redraws: attempt,
            });
        }
        Err(Error::Domain(format!(
            "trial {trial}: window empty in {MAX_ATTEMPTS} consecutive draws"
        )))
    }
}

/// One independent realization, deterministic in `(config.seed, trial_index)`.
pub fn sample_snapshot(params: &NetworkParams, config: &SimConfig, trial_index: u64) -> Result<SinrSample> {
    Simulator::new(params, config)?.trial(trial_index)
}

/// All `config.trials` realizations in trial order.
pub fn run_trials(params: &NetworkParams, config: &SimConfig) -> Result<Vec<SinrSample>> {
    let sim = Simulator::new(params, config)?;
    (0..config.trials)
        .into_par_iter()
        .map(|i| sim.trial(i))
        .collect()
}

/// `P[SINR > T]` from samples, with the binomial standard error.
pub fn coverage_from_samples(samples: &[SinrSample], threshold: f64, seed: u64) -> Estimate {
    Estimate::from_values(
        samples.iter().map(|s| if s.sinr > threshold { 1.0 } else { 0.0 }),
        seed,
    )
}

/// `λ·E[log₂(1+SINR)·1{SINR ≥ T}]` from samples; infinite SINR is excluded.
pub fn ase_from_samples(samples: &[SinrSample], lambda: f64, threshold: f64, seed: u64) -> AseEstimate {
    let excluded = samples.iter().filter(|s| s.sinr.is_infinite()).count() as u64;
    let estimate = Estimate::from_values(
        samples.iter().filter(|s| s.sinr.is_finite()).map(|s| {
            if s.sinr >= threshold {
                lambda * s.sinr.ln_1p() / LN_2
            } else {
                0.0
            }
        }),
        seed,
    );
    AseEstimate {
        estimate,
        excluded,
        warning: excluded as f64 > 1e-3 * samples.len() as f64,
    }
}

pub fn estimate_coverage(params: &NetworkParams, config: &SimConfig) -> Result<Estimate> {
    let samples = run_trials(params, config)?;
    Ok(coverage_from_samples(&samples, params.threshold, config.seed))
}

pub fn estimate_ase(params: &NetworkParams, config: &SimConfig) -> Result<AseEstimate> {
    let samples = run_trials(params, config)?;
    Ok(ase_from_samples(&samples, params.lambda, params.threshold, config.seed))
}

/// Coverage at several thresholds on the same realizations.
pub fn estimate_coverage_curve(
    params: &NetworkParams,
    config: &SimConfig,
    thresholds: &[f64],
) -> Result<Vec<Estimate>> {
    let samples = run_trials(params, config)?;
    Ok(thresholds
        .iter()
        .map(|&t| coverage_from_samples(&samples, t, config.seed))
        .collect())
}
