//! Exact coverage probability and constrained ASE by nested quadrature, and
//! the interference-limited closed forms.
//!
//! The serving link is Rayleigh with the rate in [`NetworkParams::mu`]; the
//! interferer fading is described by a [`FadingSpec`]. For exponential
//! interferer fading the fading average is done in closed form and only the
//! radial integral is numeric. For any other density the radial integral is
//! done in closed form through upper incomplete gamma functions and the
//! fading average is numeric.
//!
//! The outer integral over the serving distance `r₀` is taken in the
//! probability variable `u = 1 − e^{−λπr₀²}`, split at `r₀ = d₀`.

use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::model::{path_loss_unchecked, DualSlopeModel, NetworkParams};
use crate::special::{
    gamma, integrate, power_kernel, rho, upper_incomplete_gamma, Integral, QuadratureSpec,
};

/// Below this argument the fading averages switch to a short power series.
const SERIES_THRESHOLD: f64 = 1e-3;

/// Target absolute accuracy of `log L_I` relative to the outer tolerance.
const INNER_TOLERANCE_FACTOR: f64 = 1e-2;

type Density = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Law of the interferer fading power `g`.
#[derive(Clone)]
pub enum FadingSpec {
    /// `g ~ Exp(rate)`.
    Exponential { rate: f64 },
    /// Arbitrary density on `[0, ∞)`.
    Custom(CustomFading),
}

#[derive(Clone)]
pub struct CustomFading {
    label: String,
    density: Density,
}

impl CustomFading {
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn density(&self, g: f64) -> f64 {
        (self.density)(g)
    }
}

impl fmt::Debug for FadingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FadingSpec::Exponential { rate } => {
                f.debug_struct("Exponential").field("rate", rate).finish()
            }
            FadingSpec::Custom(c) => f.debug_tuple("Custom").field(&c.label).finish(),
        }
    }
}

impl FadingSpec {
    pub fn exponential(rate: f64) -> Result<Self> {
        if !(rate > 0.0 && rate.is_finite()) {
            return Err(Error::invalid("rate", "fading rate must be positive and finite"));
        }
        Ok(FadingSpec::Exponential { rate })
    }

    /// Wraps a density after checking that it integrates to one within
    /// `spec.rel_tol` (or the quadrature error, if larger).
    pub fn custom<F>(label: impl Into<String>, density: F, spec: &QuadratureSpec) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let density: Density = Arc::new(density);
        let mass = integrate(|g| density(g), 0.0, f64::INFINITY, spec)?;
        let slack = spec.rel_tol.max(mass.abs_error);
        if (mass.value - 1.0).abs() > slack {
            return Err(Error::invalid(
                "density",
                format!("integrates to {} instead of 1", mass.value),
            ));
        }
        Ok(FadingSpec::Custom(CustomFading {
            label: label.into(),
            density,
        }))
    }

    pub fn mean(&self, spec: &QuadratureSpec) -> Result<f64> {
        match self {
            FadingSpec::Exponential { rate } => Ok(1.0 / rate),
            FadingSpec::Custom(c) => {
                integrate(|g| g * c.density(g), 0.0, f64::INFINITY, spec).map(|r| r.value)
            }
        }
    }
}

/// A probability with a propagated error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageResult {
    pub value: f64,
    pub est_abs_error: f64,
}

/// Constrained ASE in bit/s/Hz/m².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AseResult {
    pub value: f64,
    pub est_abs_error: f64,
}

/// Nested-quadrature evaluator. The free functions of this module use the
/// default tolerances.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Analytic {
    pub quadrature: QuadratureSpec,
}

/// Value plus absolute error bound.
#[derive(Debug, Clone, Copy, Default)]
struct Approx {
    value: f64,
    error: f64,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    value: f64,
    error: f64,
    converged: bool,
}

impl Default for Segment {
    fn default() -> Self {
        Segment {
            value: 0.0,
            error: 0.0,
            converged: true,
        }
    }
}

/// Keeps the best estimate of an inner integral that ran out of subdivisions
/// and charges its error bound to the caller.
fn soften(r: Result<Integral>) -> Result<Integral> {
    match r {
        Err(Error::NonConvergence {
            estimate,
            abs_error,
        }) => Ok(Integral {
            value: estimate,
            abs_error,
            evaluations: 0,
        }),
        other => other,
    }
}

/// Runs `f` inside an integrand that must return `f64`; the first failure is
/// kept and reported after the integral returns.
struct Failure(Option<Error>);

impl Failure {
    fn new() -> Self {
        Failure(None)
    }

    fn catch(&mut self, r: Result<Approx>) -> Approx {
        match r {
            Ok(a) => a,
            Err(e) => {
                if self.0.is_none() {
                    self.0 = Some(e);
                }
                Approx::default()
            }
        }
    }

    fn check(self) -> Result<()> {
        match self.0 {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }
}

fn clamp_probability(value: f64, error: f64) -> CoverageResult {
    let clamped = value.clamp(0.0, 1.0);
    CoverageResult {
        value: clamped,
        est_abs_error: error + (value - clamped).abs(),
    }
}

impl Analytic {
    pub fn new(quadrature: QuadratureSpec) -> Result<Self> {
        quadrature.validate()?;
        Ok(Self { quadrature })
    }

    fn inner_spec(&self) -> QuadratureSpec {
        self.quadrature.scaled(INNER_TOLERANCE_FACTOR)
    }

    /// `E[e^{−xI}]` for a serving distance `r₀`; interferers lie beyond `r₀`.
    pub fn laplace_interference(
        &self,
        x: f64,
        params: &NetworkParams,
        fading: &FadingSpec,
        r0: f64,
    ) -> Result<f64> {
        if !(x >= 0.0) {
            return Err(Error::Domain(format!("Laplace argument must be >= 0, got {x}")));
        }
        if !(r0 >= 0.0) {
            return Err(Error::Domain(format!("serving distance must be >= 0, got {r0}")));
        }
        params.validate()?;
        Ok(self.log_laplace(x, params, fading, r0)?.value.exp())
    }

    /// `log E[e^{−xI}]` with an absolute error bound.
    fn log_laplace(
        &self,
        x: f64,
        params: &NetworkParams,
        fading: &FadingSpec,
        r0: f64,
    ) -> Result<Approx> {
        if x == 0.0 {
            return Ok(Approx::default());
        }
        if x.is_infinite() {
            return Ok(Approx {
                value: f64::NEG_INFINITY,
                error: 0.0,
            });
        }
        let gains = params.gains();
        let mut total = Approx::default();
        for (a, b) in gains.iter() {
            if a == 0.0 || b == 0.0 {
                continue;
            }
            let weight = 2.0 * PI * params.lambda * b;
            let tol = self.quadrature.abs_tol * INNER_TOLERANCE_FACTOR / weight;
            let radial = match fading {
                FadingSpec::Exponential { rate } => {
                    exponential_radial(x * a / rate, &params.model, r0, tol, &self.inner_spec())?
                }
                FadingSpec::Custom(c) => {
                    custom_radial(x * a, c, &params.model, r0, tol, &self.inner_spec())?
                }
            };
            total.value -= weight * radial.value;
            total.error += weight * radial.error;
        }
        Ok(total)
    }

    /// `P[SINR > T | r₀]`.
    fn conditional_coverage(
        &self,
        params: &NetworkParams,
        fading: &FadingSpec,
        r0: f64,
        threshold: f64,
    ) -> Result<Approx> {
        if threshold.is_infinite() {
            return Ok(Approx::default());
        }
        let serving = params.beams.serving_gain() * path_loss_unchecked(r0, &params.model);
        let x = params.mu * threshold / serving;
        if !x.is_finite() {
            return Ok(Approx::default());
        }
        let noise = x * params.sigma2;
        if noise > 750.0 {
            return Ok(Approx::default());
        }
        let log_l = self.log_laplace(x, params, fading, r0)?;
        let value = (log_l.value - noise).exp();
        Ok(Approx {
            value,
            error: value * log_l.error,
        })
    }

    /// Integrates `h(r₀)` against the nearest-BS distance law.
    fn over_serving_distance<H>(&self, params: &NetworkParams, mut h: H) -> Result<Approx>
    where
        H: FnMut(f64) -> Result<Approx>,
    {
        let nu = params.near_field_intensity();
        let lpi = params.lambda * PI;
        let d0 = params.model.d0();
        let radius = |y: f64| (y / lpi).sqrt();

        let near_top = -(-nu).exp_m1();
        let near = self.outer_segment(0.0, near_top, &self.quadrature, |u| {
            h(radius(-(-u).ln_1p()).min(d0 * (1.0 - f64::EPSILON)))
        })?;

        let far_weight = (-nu).exp();
        let far = if far_weight > 0.0 {
            let spec = QuadratureSpec {
                abs_tol: self.quadrature.abs_tol / far_weight,
                ..self.quadrature
            };
            self.outer_segment(0.0, 1.0, &spec, |w| h(radius(nu - (-w).ln_1p()).max(d0)))?
        } else {
            Segment::default()
        };

        let value = near.value + far_weight * far.value;
        let error = near.error + far_weight * far.error;
        if !(near.converged && far.converged) {
            return Err(Error::NonConvergence {
                estimate: value,
                abs_error: error,
            });
        }
        Ok(Approx { value, error })
    }

    /// Integrates `h` over `[lo, hi]` (a range of length at most one), adding
    /// the worst pointwise inner error to the quadrature error.
    fn outer_segment<H>(&self, lo: f64, hi: f64, spec: &QuadratureSpec, mut h: H) -> Result<Segment>
    where
        H: FnMut(f64) -> Result<Approx>,
    {
        let mut failure = Failure::new();
        let mut worst = 0.0_f64;
        let r = integrate(
            |u| {
                let a = failure.catch(h(u));
                worst = worst.max(a.error);
                a.value
            },
            lo,
            hi,
            spec,
        );
        failure.check()?;
        let (r, converged) = match r {
            Ok(r) => (r, true),
            Err(Error::NonConvergence {
                estimate,
                abs_error,
            }) => (
                Integral {
                    value: estimate,
                    abs_error,
                    evaluations: 0,
                },
                false,
            ),
            Err(e) => return Err(e),
        };
        Ok(Segment {
            value: r.value,
            error: r.abs_error + worst * (hi - lo),
            converged,
        })
    }

    pub fn coverage(&self, params: &NetworkParams, fading: &FadingSpec) -> Result<CoverageResult> {
        params.validate()?;
        let t = params.threshold;
        let a = self.over_serving_distance(params, |r| {
            self.conditional_coverage(params, fading, r, t)
        });
        let a = match a {
            Err(Error::NonConvergence {
                estimate,
                abs_error,
            }) => {
                let c = clamp_probability(estimate, abs_error);
                return Err(Error::NonConvergence {
                    estimate: c.value,
                    abs_error: c.est_abs_error,
                });
            }
            other => other?,
        };
        Ok(clamp_probability(a.value, a.error))
    }

    /// `∫_{ln(1+T)}^∞ P[SINR > e^t − 1 | r₀] dt`.
    fn rate_tail(&self, params: &NetworkParams, fading: &FadingSpec, r0: f64) -> Result<Approx> {
        let mut failure = Failure::new();
        let mut worst = 0.0_f64;
        let start = params.threshold.ln_1p();
        let r = soften(integrate(
            |t| {
                let a = failure.catch(self.conditional_coverage(params, fading, r0, t.exp_m1()));
                worst = worst.max(a.error);
                a.value
            },
            start,
            f64::INFINITY,
            &self.inner_spec(),
        ))?;
        failure.check()?;
        // The t-range is infinite, but the integrand decays at least like
        // exp(−c·e^t); the worst pointwise error times the effective length
        // of the range is a safe bound.
        let effective = r.value.max(1.0);
        Ok(Approx {
            value: r.value,
            error: r.abs_error + worst * effective,
        })
    }

    pub fn ase(&self, params: &NetworkParams, fading: &FadingSpec) -> Result<AseResult> {
        params.validate()?;
        let t = params.threshold;
        let log_term = t.ln_1p() / LN_2;
        let per_bs = self.over_serving_distance(params, |r| {
            let tail = self.rate_tail(params, fading, r)?;
            let at_t = self.conditional_coverage(params, fading, r, t)?;
            Ok(Approx {
                value: tail.value / LN_2 + log_term * at_t.value,
                error: tail.error / LN_2 + log_term * at_t.error,
            })
        });
        let per_bs = match per_bs {
            Err(Error::NonConvergence {
                estimate,
                abs_error,
            }) => {
                return Err(Error::NonConvergence {
                    estimate: params.lambda * estimate.max(0.0),
                    abs_error: params.lambda * abs_error,
                })
            }
            other => other?,
        };
        let value = params.lambda * per_bs.value;
        let clamped = value.max(0.0);
        Ok(AseResult {
            value: clamped,
            est_abs_error: params.lambda * per_bs.error + (value - clamped).abs(),
        })
    }
}

/// `∫_{r₀}^∞ v · cL(v)/(1 + cL(v)) dv`, the exponential-fading radial term
/// with `c = x·a/μ`.
fn exponential_radial(
    c: f64,
    model: &DualSlopeModel,
    r0: f64,
    tol: f64,
    spec: &QuadratureSpec,
) -> Result<Approx> {
    let d0 = model.d0();
    let mut out = Approx::default();
    if r0 < d0 {
        let part = near_power_segment(c * model.alpha0(), model.beta1(), r0, d0, tol, spec)?;
        out.value += part.value;
        out.error += part.error;
    }
    let part = far_power_segment(c * model.far_coefficient(), model.beta2(), r0.max(d0), tol, spec)?;
    out.value += part.value;
    out.error += part.error;
    Ok(out)
}

/// `∫_lo^hi v · k v^{−β}/(1 + k v^{−β}) dv` for finite `hi`.
fn near_power_segment(
    k: f64,
    beta: f64,
    lo: f64,
    hi: f64,
    tol: f64,
    spec: &QuadratureSpec,
) -> Result<Approx> {
    if beta == 0.0 {
        return Ok(Approx {
            value: 0.5 * (hi * hi - lo * lo) * k / (1.0 + k),
            error: 0.0,
        });
    }
    let p = 0.5 * beta;
    let scale = k.powf(1.0 / p);
    if !scale.is_finite() {
        // Every interferer inside the segment is certain to be strong.
        return Ok(Approx {
            value: 0.5 * (hi * hi - lo * lo),
            error: 0.0,
        });
    }
    if scale == 0.0 || !(lo * lo / scale).is_finite() {
        let integral = if beta == 2.0 {
            (hi / lo).ln()
        } else {
            (hi.powf(2.0 - beta) - lo.powf(2.0 - beta)) / (2.0 - beta)
        };
        return Ok(Approx {
            value: k * integral,
            error: 0.0,
        });
    }
    let spec = QuadratureSpec {
        abs_tol: (2.0 * tol / scale).max(f64::MIN_POSITIVE),
        ..*spec
    };
    let kernel = soften(power_kernel(p, lo * lo / scale, hi * hi / scale, &spec))?;
    Ok(Approx {
        value: 0.5 * scale * kernel.value,
        error: 0.5 * scale * kernel.abs_error,
    })
}

/// `∫_lo^∞ v · k v^{−β}/(1 + k v^{−β}) dv` for `β > 2`.
fn far_power_segment(k: f64, beta: f64, lo: f64, tol: f64, spec: &QuadratureSpec) -> Result<Approx> {
    let p = 0.5 * beta;
    let scale = k.powf(1.0 / p);
    if !scale.is_finite() {
        return Err(Error::Domain(
            "interference diverges: infinite far-field Laplace argument".into(),
        ));
    }
    if scale == 0.0 || !(lo * lo / scale).is_finite() {
        return Ok(Approx {
            value: k * lo.powf(2.0 - beta) / (beta - 2.0),
            error: 0.0,
        });
    }
    let spec = QuadratureSpec {
        abs_tol: (2.0 * tol / scale).max(f64::MIN_POSITIVE),
        ..*spec
    };
    let kernel = soften(power_kernel(p, lo * lo / scale, f64::INFINITY, &spec))?;
    Ok(Approx {
        value: 0.5 * scale * kernel.value,
        error: 0.5 * scale * kernel.abs_error,
    })
}

/// `E_g ∫_{r₀}^∞ v (1 − e^{−s g L(v)}) dv` for an arbitrary fading density.
fn custom_radial(
    s: f64,
    fading: &CustomFading,
    model: &DualSlopeModel,
    r0: f64,
    tol: f64,
    spec: &QuadratureSpec,
) -> Result<Approx> {
    let mut failure = Failure::new();
    let spec = QuadratureSpec {
        abs_tol: tol.max(f64::MIN_POSITIVE),
        ..*spec
    };
    let r = soften(integrate(
        |g| {
            let f = fading.density(g);
            if f == 0.0 {
                return 0.0;
            }
            f * failure.catch(radial_given_fading(s * g, model, r0)).value
        },
        0.0,
        f64::INFINITY,
        &spec,
    ))?;
    failure.check()?;
    Ok(Approx {
        value: r.value,
        error: r.abs_error,
    })
}

/// `ψ(y) = ∫_{r₀}^∞ v (1 − e^{−y L(v)}) dv` through upper incomplete gamma
/// functions of negative order.
fn radial_given_fading(y: f64, model: &DualSlopeModel, r0: f64) -> Result<Approx> {
    if y == 0.0 {
        return Ok(Approx::default());
    }
    let d0 = model.d0();
    let mut value = 0.0;
    if r0 < d0 {
        value += near_gamma_form(y * model.alpha0(), model.beta1(), r0, d0)?;
    }
    value += far_gamma_form(y * model.far_coefficient(), model.beta2(), r0.max(d0))?;
    Ok(Approx { value, error: 0.0 })
}

/// `∫_lo^hi v (1 − e^{−k v^{−β}}) dv`.
fn near_gamma_form(k: f64, beta: f64, lo: f64, hi: f64) -> Result<f64> {
    let half_area = 0.5 * (hi * hi - lo * lo);
    if beta == 0.0 {
        return Ok(-half_area * (-k).exp_m1());
    }
    let z_lo = k * lo.powf(-beta);
    let z_hi = k * hi.powf(-beta);
    if z_lo < SERIES_THRESHOLD {
        // 1 − e^{−z} = z − z²/2 + z³/6 with z = k v^{−β}.
        let mut sum = 0.0;
        let mut factorial = 1.0;
        for n in 1..=3 {
            factorial *= n as f64;
            let nb = n as f64 * beta;
            let moment = if (2.0 - nb).abs() < 1e-12 {
                k.powi(n) * (hi / lo).ln()
            } else {
                (hi * hi * z_hi.powi(n) - lo * lo * z_lo.powi(n)) / (2.0 - nb)
            };
            let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
            sum += sign * moment / factorial;
        }
        return Ok(sum);
    }
    let a = -2.0 / beta;
    // (k)^{2/β} Γ(a, z)/β with z = k v^{−β} equals v² z^{−a} Γ(a, z)/β.
    let scaled = |v: f64, z: f64| -> Result<f64> {
        if v == 0.0 || z.is_infinite() {
            return Ok(0.0);
        }
        Ok(v * v * z.powf(-a) * upper_incomplete_gamma(a, z)? / beta)
    };
    Ok(scaled(lo, z_lo)? - scaled(hi, z_hi)? + half_area)
}

/// `∫_lo^∞ v (1 − e^{−k v^{−β}}) dv` for `β > 2`.
fn far_gamma_form(k: f64, beta: f64, lo: f64) -> Result<f64> {
    let z = k * lo.powf(-beta);
    let lo2 = lo * lo;
    if z < SERIES_THRESHOLD {
        return Ok(lo2
            * (z / (beta - 2.0) - z * z / (4.0 * (beta - 1.0)) + z.powi(3) / (6.0 * (3.0 * beta - 2.0))));
    }
    let a = -2.0 / beta;
    let bracket = z.powf(-a) * (upper_incomplete_gamma(a, z)? - gamma(a)?);
    Ok(lo2 * (bracket / beta - 0.5))
}

fn check_beta1_in_near(params: &NetworkParams, r0: f64, near: bool) -> Result<()> {
    let d0 = params.model.d0();
    if near && !(r0 > 0.0 && r0 < d0) {
        return Err(Error::Precondition(format!(
            "near-field Laplace transform needs 0 < r0 < d0 = {d0}, got {r0}"
        )));
    }
    if !near && !(r0 >= d0 && r0.is_finite()) {
        return Err(Error::Precondition(format!(
            "far-field Laplace transform needs r0 >= d0 = {d0}, got {r0}"
        )));
    }
    Ok(())
}

/// Laplace transform of the interference when the serving BS is inside the
/// breakpoint.
pub fn laplace_interference_near(
    x: f64,
    params: &NetworkParams,
    fading: &FadingSpec,
    r0: f64,
) -> Result<f64> {
    check_beta1_in_near(params, r0, true)?;
    Analytic::default().laplace_interference(x, params, fading, r0)
}

/// Laplace transform of the interference when the serving BS is beyond the
/// breakpoint; every interferer is then in the far field.
pub fn laplace_interference_far(
    x: f64,
    params: &NetworkParams,
    fading: &FadingSpec,
    r0: f64,
) -> Result<f64> {
    check_beta1_in_near(params, r0, false)?;
    Analytic::default().laplace_interference(x, params, fading, r0)
}

pub fn coverage_probability(params: &NetworkParams, fading: &FadingSpec) -> Result<CoverageResult> {
    Analytic::default().coverage(params, fading)
}

pub fn ase(params: &NetworkParams, fading: &FadingSpec) -> Result<AseResult> {
    Analytic::default().ase(params, fading)
}

/// Checks the interference-limited, side-lobe-free, flat-near-field regime.
pub fn check_interference_limited(params: &NetworkParams) -> Result<()> {
    if params.sigma2 != 0.0 {
        return Err(Error::Precondition("closed form needs sigma2 = 0".into()));
    }
    if params.beams.side_bs != 0.0 || params.beams.side_ue != 0.0 {
        return Err(Error::Precondition(
            "closed form needs zero side-lobe gains (n_B = n_U = 0)".into(),
        ));
    }
    if params.model.beta1() != 0.0 {
        return Err(Error::Precondition("closed form needs beta1 = 0".into()));
    }
    Ok(())
}

fn check_closed_form_inputs(q: f64, threshold: f64, beta2: f64, nu: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::Domain(format!("alignment probability {q} outside [0, 1]")));
    }
    if !(threshold >= 0.0) {
        return Err(Error::Domain(format!("threshold must be >= 0, got {threshold}")));
    }
    if !(beta2 > 2.0) {
        return Err(Error::Domain(format!("beta2 must exceed 2, got {beta2}")));
    }
    if !(nu >= 0.0) {
        return Err(Error::Domain(format!("near-field intensity must be >= 0, got {nu}")));
    }
    Ok(())
}

/// Interference-limited coverage in terms of the alignment probability `q`,
/// threshold `T`, far-field exponent `β₂` and near-field intensity `ν`.
pub fn coverage_closed_form(q: f64, threshold: f64, beta2: f64, nu: f64) -> Result<f64> {
    check_closed_form_inputs(q, threshold, beta2, nu)?;
    if threshold.is_infinite() {
        return Ok(0.0);
    }
    let r = rho(threshold, beta2)?;
    Ok(closed_form_with_rho(q, threshold, r, nu))
}

/// `−ln(1 − qτ)` with `τ = T/(1+T)`, without forming `1 − qτ` (which
/// rounds to zero for `q = 1` and large `T`).
pub(crate) fn log_inverse_gap(q: f64, threshold: f64) -> f64 {
    threshold.ln_1p() - ((1.0 - q) * threshold).ln_1p()
}

fn closed_form_with_rho(q: f64, threshold: f64, rho: f64, nu: f64) -> f64 {
    let tau = threshold / (1.0 + threshold);
    let gap = log_inverse_gap(q, threshold);
    let first = (gap - q * nu * (tau + rho)).exp();
    let second = if q == 0.0 {
        0.0
    } else {
        (q.ln() + (tau + rho).ln() - (q * rho).ln_1p() + gap - nu * (1.0 + q * rho)).exp()
    };
    (first - second).clamp(0.0, 1.0)
}

pub fn coverage_simplified(params: &NetworkParams) -> Result<f64> {
    check_interference_limited(params)?;
    coverage_closed_form(
        params.beams.alignment_probability(),
        params.threshold,
        params.model.beta2(),
        params.near_field_intensity(),
    )
}

/// Interference-limited constrained ASE per BS (bit/s/Hz) from the closed
/// form, with the threshold integral done numerically.
pub fn ase_closed_form_per_bs(
    q: f64,
    threshold: f64,
    beta2: f64,
    nu: f64,
    spec: &QuadratureSpec,
) -> Result<Integral> {
    check_closed_form_inputs(q, threshold, beta2, nu)?;
    if q == 0.0 {
        return Err(Error::Divergence(
            "without interference the rate integral is unbounded".into(),
        ));
    }
    let mut failure: Option<Error> = None;
    let tail = integrate(
        |t| {
            let tt = t.exp_m1();
            match coverage_closed_form(q, tt, beta2, nu) {
                Ok(v) => v,
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            }
        },
        threshold.ln_1p(),
        f64::INFINITY,
        spec,
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    let at_t = coverage_closed_form(q, threshold, beta2, nu)?;
    Ok(Integral {
        value: tail.value / LN_2 + threshold.ln_1p() / LN_2 * at_t,
        abs_error: tail.abs_error / LN_2,
        evaluations: tail.evaluations,
    })
}

pub fn ase_simplified(params: &NetworkParams) -> Result<f64> {
    check_interference_limited(params)?;
    let per_bs = ase_closed_form_per_bs(
        params.beams.alignment_probability(),
        params.threshold,
        params.model.beta2(),
        params.near_field_intensity(),
        &QuadratureSpec::default(),
    )?;
    Ok(params.lambda * per_bs.value)
}
