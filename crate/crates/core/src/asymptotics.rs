//! Dense-network limits: the vanishing-coverage bound for `β₁ ≤ 2`, the
//! `λ·SINR` limit for a flat near field, and beam-pattern adaptation
//! `E[G]/(N_B N_U) = K/λ` with its coverage and ASE-slope limits.

use std::f64::consts::{LN_2, PI};

use crate::analytic::{coverage_closed_form, log_inverse_gap};
use crate::error::{Error, Result};
use crate::model::{expected_gain, gamma_moment, BeamPattern, NetworkParams};
use crate::special::{integrate, integrate_split, power_kernel, rho, Integral, QuadratureSpec};

const TWO_PI: f64 = 2.0 * PI;

/// Where the fading rate `μ` enters the dense limits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MuConvention {
    /// `2πμ` in the `λ·SINR` limit and `μ²` in the adapted coverage exponent.
    Paper,
    /// Campbell's theorem with `E[g] = 1/μ`: `2π/μ` in the `λ·SINR` limit and
    /// no `μ` in the adapted coverage exponent.
    Campbell,
}

/// Variant of the dense-network coverage bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundForm {
    /// `λπ∫₀^{d₀²} exp(−λπqu(1+J(u))) du + e^{−λπd₀}/(λπd₀)`.
    Paper,
    /// Same first term with the tail `e^{−λπd₀²}/(λπd₀²)`.
    D0Squared,
    /// `λπ∫₀^{d₀²} exp(−λπu(1+qJ(u))) du + e^{−λπd₀²}`: the nearest-BS law is
    /// not thinned by `q`, and the tail is exactly `P[r₀ ≥ d₀]`.
    Derived,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageBound {
    /// `min(1, first_term + tail)`.
    pub value: f64,
    pub first_term: f64,
    pub tail: f64,
    pub est_abs_error: f64,
    pub form: BoundForm,
}

impl CoverageBound {
    pub fn unclamped(&self) -> f64 {
        self.first_term + self.tail
    }
}

/// `J(u) = ∫_1^{M} T/(T + t^{p}) dt` with `p = β₁/2`.
fn j_integral(threshold: f64, p: f64, m: f64, spec: &QuadratureSpec) -> Result<Integral> {
    if m <= 1.0 {
        return Ok(Integral {
            value: 0.0,
            abs_error: 0.0,
            evaluations: 0,
        });
    }
    if p == 0.0 {
        return Ok(Integral {
            value: (m - 1.0) * threshold / (threshold + 1.0),
            abs_error: 0.0,
            evaluations: 0,
        });
    }
    let scale = threshold.powf(1.0 / p);
    let k = power_kernel(p, 1.0 / scale, m / scale, spec)?;
    Ok(Integral {
        value: scale * k.value,
        abs_error: scale * k.abs_error,
        evaluations: k.evaluations,
    })
}

/// Upper bound on coverage obtained by keeping only main-lobe interferers
/// inside the breakpoint, dropping noise, and bounding the event `r₀ ≥ d₀`.
pub fn dense_coverage_upper_bound(params: &NetworkParams, form: BoundForm) -> Result<CoverageBound> {
    dense_coverage_upper_bound_with(params, form, &QuadratureSpec::default())
}

pub fn dense_coverage_upper_bound_with(
    params: &NetworkParams,
    form: BoundForm,
    spec: &QuadratureSpec,
) -> Result<CoverageBound> {
    params.validate()?;
    let beta1 = params.model.beta1();
    let d0 = params.model.d0();
    let q = params.beams.alignment_probability();
    let t = params.threshold;
    let lpi = params.lambda * PI;
    let nu = lpi * d0 * d0;
    let p = 0.5 * beta1;

    // In s = λπu the first term is ∫₀^ν exp(−a(s)) ds.
    let mut failure: Option<Error> = None;
    let mut worst = 0.0_f64;
    let inner = spec.scaled(1e-2);
    let mut integrand = |s: f64| {
        if s == 0.0 {
            return 1.0;
        }
        let j = match j_integral(t, p, nu / s, &inner) {
            Ok(j) => j,
            Err(e) => {
                failure.get_or_insert(e);
                return 0.0;
            }
        };
        let exponent = match form {
            BoundForm::Paper | BoundForm::D0Squared => s * q * (1.0 + j.value),
            BoundForm::Derived => s * (1.0 + q * j.value),
        };
        let v = (-exponent).exp();
        worst = worst.max(v * s * q * j.abs_error);
        v
    };
    let splits: Vec<f64> = (0..12)
        .map(|k| 10f64.powi(k - 3))
        .filter(|&x| x < nu)
        .collect();
    let first = integrate_split(&mut integrand, 0.0, nu, &splits, spec)?;
    if let Some(e) = failure {
        return Err(e);
    }

    let tail = match form {
        BoundForm::Paper => {
            let x = lpi * d0;
            (-x).exp() / x
        }
        BoundForm::D0Squared => (-nu).exp() / nu,
        BoundForm::Derived => (-nu).exp(),
    };
    let raw = first.value + tail;
    let value = raw.min(1.0);
    Ok(CoverageBound {
        value,
        first_term: first.value,
        tail,
        est_abs_error: first.abs_error + worst * nu,
        form,
    })
}

/// Limit of `λ·SINR` as `λ → ∞` for a flat near field (`β₁ = 0`) with the
/// serving fading fixed at `h`.
pub fn sinr_density_limit(params: &NetworkParams, convention: MuConvention, h: f64) -> Result<f64> {
    params.validate()?;
    if params.model.beta1() != 0.0 {
        return Err(Error::Precondition(
            "the λ·SINR limit needs a flat near field (beta1 = 0)".into(),
        ));
    }
    if !(h >= 0.0) {
        return Err(Error::Domain(format!("fading value must be >= 0, got {h}")));
    }
    let gamma = gamma_moment(&params.model)?;
    let mean_gain = expected_gain(&params.gains());
    let factor = match convention {
        MuConvention::Paper => TWO_PI * params.mu,
        MuConvention::Campbell => TWO_PI / params.mu,
    };
    Ok(params.beams.serving_gain() * params.model.alpha0() * h / (mean_gain * factor * gamma))
}

/// Target `E[G]/(N_B N_U) = K/λ`.
pub fn adapted_expected_gain(k: f64, lambda: f64) -> Result<f64> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::invalid("k", "adaptation constant must be positive"));
    }
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::invalid("lambda", "density must be positive"));
    }
    let ratio = k / lambda;
    if ratio > 1.0 {
        return Err(Error::Infeasible(format!(
            "K/λ = {ratio} > 1 would need a gain above the omnidirectional one"
        )));
    }
    Ok(ratio)
}

/// Common beamwidth on both ends giving `E[G]/(N_B N_U) = K/λ` when both ends
/// have front-back ratio `ε` (`ε = ∞` for no side lobes).
pub fn symmetric_beamwidth(k: f64, lambda: f64, epsilon: f64) -> Result<f64> {
    let ratio = adapted_expected_gain(k, lambda)?;
    if !(epsilon > 1.0) {
        return Err(Error::invalid("epsilon", "front-back ratio must exceed 1"));
    }
    let s = ratio.sqrt();
    let theta = if epsilon.is_infinite() {
        TWO_PI * s
    } else {
        TWO_PI * (epsilon * s - 1.0) / (epsilon - 1.0)
    };
    if !(theta > 0.0) {
        return Err(Error::Infeasible(format!(
            "beamwidth {theta} <= 0: ε·sqrt(K/λ) = {} must exceed 1",
            epsilon * s
        )));
    }
    Ok(theta.min(TWO_PI))
}

/// Symmetric adaptation rule with constant `K` and front-back ratio `ε`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptationSchedule {
    k: f64,
    epsilon: f64,
    lambda_min: f64,
    lambda_max: f64,
}

impl AdaptationSchedule {
    /// `k` in BS/m². The beamwidth is in `(0, 2π]` for `λ ∈ [K, ε²K)`.
    pub fn new(k: f64, epsilon: f64) -> Result<Self> {
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::invalid("k", "adaptation constant must be positive"));
        }
        if !(epsilon > 1.0) {
            return Err(Error::invalid("epsilon", "front-back ratio must exceed 1"));
        }
        Ok(Self {
            k,
            epsilon,
            lambda_min: k,
            lambda_max: epsilon * epsilon * k,
        })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Densities for which the rule is feasible: `[lower, upper)`.
    pub fn validity_range(&self) -> (f64, f64) {
        (self.lambda_min, self.lambda_max)
    }

    pub fn beamwidth(&self, lambda: f64) -> Result<f64> {
        if lambda < self.lambda_min || lambda >= self.lambda_max {
            return Err(Error::Infeasible(format!(
                "density {lambda} outside the feasible range [{}, {})",
                self.lambda_min, self.lambda_max
            )));
        }
        symmetric_beamwidth(self.k, lambda, self.epsilon)
    }

    /// Beam pattern with main-lobe gain `main` on both ends at density `λ`.
    pub fn beams(&self, lambda: f64, main: f64) -> Result<BeamPattern> {
        let theta = self.beamwidth(lambda)?;
        BeamPattern::symmetric(main, main / self.epsilon, theta)
    }

    /// `params` with its beams replaced by the adapted pattern at `params.lambda`,
    /// keeping the BS main-lobe gain on both ends.
    pub fn apply(&self, params: &NetworkParams) -> Result<NetworkParams> {
        let beams = self.beams(params.lambda, params.beams.main_bs)?;
        params.with_beams(beams)
    }
}

/// A probability evaluated in log space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogProbability {
    pub value: f64,
    pub log_value: f64,
}

impl LogProbability {
    fn from_log(log_value: f64) -> Self {
        Self {
            value: log_value.exp(),
            log_value,
        }
    }
}

fn check_flat_near_field(params: &NetworkParams) -> Result<()> {
    params.validate()?;
    if params.model.beta1() != 0.0 {
        return Err(Error::Precondition(
            "adapted limits need a flat near field (beta1 = 0)".into(),
        ));
    }
    Ok(())
}

/// First-order (Campbell) coverage limit under adaptation with constant `k`
/// (same units as `params.lambda`).
pub fn adapted_coverage_limit(
    k: f64,
    params: &NetworkParams,
    convention: MuConvention,
) -> Result<LogProbability> {
    check_flat_near_field(params)?;
    if !(k > 0.0) {
        return Err(Error::invalid("k", "adaptation constant must be positive"));
    }
    let gamma = gamma_moment(&params.model)?;
    let mu_factor = match convention {
        MuConvention::Paper => params.mu * params.mu,
        MuConvention::Campbell => 1.0,
    };
    let exponent = 2.0 * k * PI * mu_factor * params.threshold * gamma / params.model.alpha0();
    Ok(LogProbability::from_log(-exponent))
}

/// Exact coverage limit under adaptation without side lobes: the main-lobe
/// interferers form a PPP of constant density `K`, and the limit is
/// `exp(−Kπd₀²(T/(1+T) + ρ(T, β₂)))`, independent of `μ`.
pub fn adapted_coverage_limit_exact(k: f64, params: &NetworkParams) -> Result<LogProbability> {
    check_flat_near_field(params)?;
    if params.beams.has_side_lobes() {
        return Err(Error::Precondition(
            "exact adapted limit assumes zero side-lobe gains".into(),
        ));
    }
    Ok(LogProbability::from_log(-adapted_exponent(
        k,
        params.threshold,
        params.model.beta2(),
        params.model.d0(),
    )?))
}

fn adapted_exponent(k: f64, threshold: f64, beta2: f64, d0: f64) -> Result<f64> {
    if !(k > 0.0) {
        return Err(Error::invalid("k", "adaptation constant must be positive"));
    }
    let tau = threshold / (1.0 + threshold);
    Ok(k * PI * d0 * d0 * (tau + rho(threshold, beta2)?))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AseSlope {
    /// Constrained ASE per unit density (bit/s/Hz per BS).
    pub value: f64,
    /// Argument of the logarithm in the closed-form slope, when there is one.
    pub log_argument: Option<f64>,
    /// Set when the closed form gives a negative slope.
    pub warning: bool,
}

/// Closed-form slope `ln(α₀h/(2πμγ) − 1)·exp(−2Kπμ²Tγ/α₀)` of the ASE under
/// adaptation, with the random serving fading replaced by `h`.
pub fn adapted_ase_slope(
    k: f64,
    params: &NetworkParams,
    h: f64,
    convention: MuConvention,
) -> Result<AseSlope> {
    let limit = adapted_coverage_limit(k, params, convention)?;
    let gamma = gamma_moment(&params.model)?;
    let mu_factor = match convention {
        MuConvention::Paper => params.mu,
        MuConvention::Campbell => 1.0 / params.mu,
    };
    let argument = params.model.alpha0() * h / (TWO_PI * mu_factor * gamma) - 1.0;
    if !(argument > 0.0) {
        return Err(Error::Domain(format!(
            "slope logarithm has non-positive argument {argument}"
        )));
    }
    Ok(AseSlope {
        value: argument.ln() * limit.value,
        log_argument: Some(argument),
        warning: argument <= 1.0,
    })
}

/// Exact ASE slope under adaptation without side lobes. The SIR law is then
/// independent of `λ`, so the slope is the constrained ASE per BS of that law.
pub fn adapted_ase_slope_exact(k: f64, params: &NetworkParams) -> Result<AseSlope> {
    check_flat_near_field(params)?;
    if params.beams.has_side_lobes() {
        return Err(Error::Precondition(
            "exact adapted limit assumes zero side-lobe gains".into(),
        ));
    }
    let beta2 = params.model.beta2();
    let d0 = params.model.d0();
    let t = params.threshold;
    let mut failure: Option<Error> = None;
    let tail = integrate(
        |x| match adapted_exponent(k, x.exp_m1(), beta2, d0) {
            _ if x.exp_m1().is_infinite() => 0.0,
            Ok(e) => (-e).exp(),
            Err(err) => {
                failure.get_or_insert(err);
                0.0
            }
        },
        t.ln_1p(),
        f64::INFINITY,
        &QuadratureSpec::default(),
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    let at_t = (-adapted_exponent(k, t, beta2, d0)?).exp();
    Ok(AseSlope {
        value: tail.value / LN_2 + t.ln_1p() / LN_2 * at_t,
        log_argument: None,
        warning: false,
    })
}

/// `∂P_c/∂ν` of the interference-limited closed form.
pub fn coverage_derivative_near_field(q: f64, threshold: f64, beta2: f64, nu: f64) -> Result<f64> {
    if !(q > 0.0 && q <= 1.0) {
        return Err(Error::Domain(format!("alignment probability {q} outside (0, 1]")));
    }
    if !(threshold > 0.0) || !(nu > 0.0) {
        return Err(Error::Domain("threshold and near-field intensity must be > 0".into()));
    }
    let tau = threshold / (1.0 + threshold);
    let r = rho(threshold, beta2)?;
    let a = q * (tau + r);
    let gap = log_inverse_gap(q, threshold);
    Ok((a.ln() + gap - nu * (1.0 + q * r)).exp() - (a.ln() + gap - nu * a).exp())
}

/// Central finite difference of the closed form in `ν`, for cross-checks.
pub fn coverage_derivative_finite_difference(
    q: f64,
    threshold: f64,
    beta2: f64,
    nu: f64,
    step: f64,
) -> Result<f64> {
    let up = coverage_closed_form(q, threshold, beta2, nu + step)?;
    let down = coverage_closed_form(q, threshold, beta2, nu - step)?;
    Ok((up - down) / (2.0 * step))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{db_to_linear, gain_distribution, DualSlopeModel};

    fn flat(lambda: f64, threshold: f64, mu: f64) -> NetworkParams {
        let model = DualSlopeModel::new(1.0, 0.0, 4.0, 10.0).unwrap();
        let beams = BeamPattern::new(10.0, 0.0, 1.0, 10.0, 0.0, 1.0).unwrap();
        NetworkParams::new(lambda, mu, 0.0, threshold, model, beams).unwrap()
    }

    #[test]
    fn sinr_limit_unit_example() {
        let model = DualSlopeModel::new(1.0, 0.0, 4.0, 10.0).unwrap();
        let p = NetworkParams::new(1e-3, 1.0, 0.0, 1.0, model, BeamPattern::omni()).unwrap();
        let v = sinr_density_limit(&p, MuConvention::Paper, 1.0).unwrap();
        assert!((v - 1.0 / (2.0 * PI * 100.0)).abs() < 1e-15);
        assert!((v - 1.5915e-3).abs() < 1e-7);
        let c = sinr_density_limit(&p, MuConvention::Campbell, 1.0).unwrap();
        assert_eq!(v, c);
        let p2 = p.with_mu(2.0).unwrap();
        let ratio = sinr_density_limit(&p2, MuConvention::Campbell, 1.0).unwrap()
            / sinr_density_limit(&p2, MuConvention::Paper, 1.0).unwrap();
        assert!((ratio - 4.0).abs() < 1e-12);
    }

    #[test]
    fn sinr_limit_scales_with_alpha0_at_fixed_gamma() {
        // Doubling α₀ and halving d₀² keeps γ = α₀d₀²(1/2 + 1/(β₂−2)) fixed.
        let m1 = DualSlopeModel::new(1.0, 0.0, 4.0, 10.0).unwrap();
        let m2 = DualSlopeModel::new(2.0, 0.0, 4.0, 10.0 / 2f64.sqrt()).unwrap();
        let p1 = NetworkParams::new(1e-3, 1.0, 0.0, 1.0, m1, BeamPattern::omni()).unwrap();
        let p2 = p1.with_model(m2).unwrap();
        let ratio = sinr_density_limit(&p2, MuConvention::Paper, 1.0).unwrap()
            / sinr_density_limit(&p1, MuConvention::Paper, 1.0).unwrap();
        assert!((ratio - 2.0).abs() < 1e-12);
    }

    #[test]
    fn sinr_limit_needs_flat_near_field() {
        let p = NetworkParams::reference(2.0, 1000.0).unwrap();
        assert!(matches!(
            sinr_density_limit(&p, MuConvention::Paper, 1.0),
            Err(Error::Precondition(_))
        ));
        let p = p.with_model(DualSlopeModel::new(1.0, 0.0, 2.0 + 1e-12, 10.0).unwrap());
        assert!(p.is_ok());
    }

    #[test]
    fn adapted_gain_examples() {
        assert_eq!(adapted_expected_gain(1.0, 1.0).unwrap(), 1.0);
        assert_eq!(adapted_expected_gain(1.0, 4.0).unwrap(), 0.25);
        assert!(matches!(adapted_expected_gain(1.0, 0.5), Err(Error::Infeasible(_))));
    }

    #[test]
    fn symmetric_beamwidth_examples() {
        for eps in [2.0, 10.0, 1e3] {
            assert!((symmetric_beamwidth(3.0, 3.0, eps).unwrap() - TWO_PI).abs() < 1e-12);
        }
        assert!(matches!(symmetric_beamwidth(1.0, 100.0, 10.0), Err(Error::Infeasible(_))));
        let theta = symmetric_beamwidth(1.0, 100.0, 100.0).unwrap();
        assert!((theta - 0.571_198_664_289_053).abs() < 1e-12);
        assert!((theta - TWO_PI * 9.0 / 99.0).abs() < 1e-14);
        let omni_free = symmetric_beamwidth(1.0, 100.0, f64::INFINITY).unwrap();
        assert!((omni_free - TWO_PI * 0.1).abs() < 1e-14);
    }

    #[test]
    fn symmetric_beamwidth_reproduces_gain_ratio() {
        let s = AdaptationSchedule::new(1.0, 100.0).unwrap();
        let (lo, hi) = s.validity_range();
        assert_eq!((lo, hi), (1.0, 1e4));
        for lam in [1.0, 2.0, 10.0, 100.0, 1000.0, 9999.0] {
            let b = s.beams(lam, 50.0).unwrap();
            let ratio = expected_gain(&gain_distribution(&b)) / b.serving_gain();
            assert!((ratio - 1.0 / lam).abs() < 1e-10 / lam, "{lam}");
        }
        assert!(s.beamwidth(1e4).is_err());
        assert!(s.beamwidth(0.5).is_err());
    }

    #[test]
    fn adapted_coverage_limit_examples() {
        let model = DualSlopeModel::new(1.0, 0.0, 4.0, 10.0).unwrap();
        let p = NetworkParams::new(1.0, 1.0, 0.0, 1.0, model, BeamPattern::omni()).unwrap();
        let v = adapted_coverage_limit(1.0, &p, MuConvention::Paper).unwrap();
        assert!((v.log_value + 200.0 * PI).abs() < 1e-9);
        assert_eq!(v.value, (-200.0 * PI).exp());
        let tiny = adapted_coverage_limit(1e-15, &p, MuConvention::Paper).unwrap();
        assert!((tiny.value - 1.0).abs() < 1e-12);
        let p2 = p.with_mu(2.0).unwrap();
        let paper = adapted_coverage_limit(1.0, &p2, MuConvention::Paper).unwrap();
        let campbell = adapted_coverage_limit(1.0, &p2, MuConvention::Campbell).unwrap();
        assert!((paper.log_value / campbell.log_value - 4.0).abs() < 1e-12);
    }

    #[test]
    fn exact_limit_agrees_to_first_order_in_threshold() {
        // For small T both exponents are 2πKTγ/α₀ + O(T²).
        let k = 1e-6;
        for t in [1e-3, 1e-4] {
            let p = flat(1e-2, t, 1.0);
            let exact = adapted_coverage_limit_exact(k, &p).unwrap().log_value;
            let first = adapted_coverage_limit(k, &p, MuConvention::Campbell).unwrap().log_value;
            assert!(((exact - first) / first).abs() < 2.0 * t, "{t}");
        }
    }

    #[test]
    fn exact_limit_matches_closed_form_coverage_at_density_k() {
        // Without side lobes, adaptation keeps the main-lobe interferer density
        // at K; the limit is the closed form at r₀ → 0, i.e. ν → ∞ in the near
        // field with density K.
        let p = flat(1e-2, db_to_linear(-5.0), 1.0);
        let k = 2e-5;
        let exact = adapted_coverage_limit_exact(k, &p).unwrap().value;
        let tau = p.threshold / (1.0 + p.threshold);
        let r = rho(p.threshold, 4.0).unwrap();
        assert!((exact - (-k * PI * 100.0 * (tau + r)).exp()).abs() < 1e-15);
    }

    #[test]
    fn ase_slope_examples() {
        let model = DualSlopeModel::new(1.0, 0.0, 4.0, 1e-2).unwrap();
        let p = NetworkParams::new(1.0, 1.0, 0.0, 1.0, model, BeamPattern::omni()).unwrap();
        let gamma = gamma_moment(&model).unwrap();
        let h = 2.0 * 2.0 * PI * gamma;
        let s = adapted_ase_slope(1e-300, &p, h, MuConvention::Paper).unwrap();
        assert!(s.value.abs() < 1e-15);
        assert!(s.warning);
        let h = 5.0 * 2.0 * PI * gamma;
        let s = adapted_ase_slope(1e-300, &p, h, MuConvention::Paper).unwrap();
        assert!((s.value - 4f64.ln()).abs() < 1e-12);
        assert!(!s.warning);
        let p = NetworkParams::reference(0.0, 1000.0).unwrap();
        assert!(matches!(
            adapted_ase_slope(1e-6, &p, 1.0, MuConvention::Paper),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn exact_slope_matches_threshold_limit() {
        let p = flat(1e-2, 0.005, 1.0);
        let k = 1e-6;
        let s = adapted_ase_slope_exact(k, &p).unwrap();
        assert!(s.value > 0.0);
        let at_t = adapted_coverage_limit_exact(k, &p).unwrap().value;
        assert!(s.value > at_t * p.threshold.ln_1p() / LN_2);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        for &(q, t, b2, nu) in &[(0.1, 5.0, 4.0, 0.3), (1.0 / 48.0, 1.0, 3.0, 3.0), (0.7, 0.2, 6.0, 0.05)] {
            let d = coverage_derivative_near_field(q, t, b2, nu).unwrap();
            let fd = coverage_derivative_finite_difference(q, t, b2, nu, 1e-6 * nu).unwrap();
            assert!(d < 0.0);
            assert!(((d - fd) / d).abs() < 1e-4, "{d} {fd}");
        }
        let far = coverage_derivative_near_field(0.1, 5.0, 4.0, 1e4).unwrap();
        assert!(far <= 0.0 && far > -1e-100);
    }

    #[test]
    fn bound_dominates_and_decays_for_linear_near_field() {
        let mut last = f64::INFINITY;
        for k in 4..=7 {
            let p = NetworkParams::reference(1.0, 10f64.powi(k)).unwrap();
            let b = dense_coverage_upper_bound(&p, BoundForm::Derived).unwrap();
            assert!(b.value < last);
            last = b.value;
        }
        assert!(last < 0.05);
        let p = NetworkParams::reference(1.0, 1e7).unwrap();
        let b = dense_coverage_upper_bound(&p, BoundForm::Paper).unwrap();
        assert!(b.value < 0.05, "{b:?}");
    }

    #[test]
    fn bound_is_vacuous_at_low_density() {
        let p = NetworkParams::reference(2.0, 1e-3).unwrap();
        let b = dense_coverage_upper_bound(&p, BoundForm::Paper).unwrap();
        assert_eq!(b.value, 1.0);
        assert!(b.unclamped() > 1.0);
    }

    #[test]
    fn bound_forms_are_ordered() {
        for k in [2, 3, 4, 5] {
            let p = NetworkParams::reference(2.0, 10f64.powi(k)).unwrap();
            let paper = dense_coverage_upper_bound(&p, BoundForm::Paper).unwrap();
            let derived = dense_coverage_upper_bound(&p, BoundForm::Derived).unwrap();
            assert!(paper.first_term >= derived.first_term);
            assert!(paper.tail >= derived.tail);
        }
    }
}
