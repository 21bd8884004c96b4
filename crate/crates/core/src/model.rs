//! System model: dual-slope path loss, sectored beams, the interferer gain
//! law and the plane-integrated path loss.
//!
//! All quantities are linear scale and SI (metres, BS per m²). Decibels are
//! only handled by [`db_to_linear`] / [`linear_to_db`].

use std::f64::consts::PI;

use crate::error::{Error, Result};

const TWO_PI: f64 = 2.0 * PI;

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// BS/km² to BS/m².
pub fn per_km2_to_per_m2(density: f64) -> f64 {
    density * 1e-6
}

pub fn per_m2_to_per_km2(density: f64) -> f64 {
    density * 1e6
}

/// Path loss `α₀ r^{-β₁}` inside the breakpoint `d₀` and
/// `α₀ r^{-β₂} d₀^{β₂-β₁}` beyond it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualSlopeModel {
    alpha0: f64,
    beta1: f64,
    beta2: f64,
    d0: f64,
}

impl DualSlopeModel {
    pub fn new(alpha0: f64, beta1: f64, beta2: f64, d0: f64) -> Result<Self> {
        if !(alpha0 > 0.0 && alpha0.is_finite()) {
            return Err(Error::invalid("alpha0", "must be positive and finite"));
        }
        if !(d0 > 0.0 && d0.is_finite()) {
            return Err(Error::invalid("d0", "must be positive and finite"));
        }
        if !(beta2 > 2.0 && beta2.is_finite()) {
            return Err(Error::invalid("beta2", "must exceed 2"));
        }
        if !(beta1 >= 0.0 && beta1 <= beta2) {
            return Err(Error::invalid("beta1", "must satisfy 0 <= beta1 <= beta2"));
        }
        Ok(Self {
            alpha0,
            beta1,
            beta2,
            d0,
        })
    }

    pub fn alpha0(&self) -> f64 {
        self.alpha0
    }
    pub fn beta1(&self) -> f64 {
        self.beta1
    }
    pub fn beta2(&self) -> f64 {
        self.beta2
    }
    pub fn d0(&self) -> f64 {
        self.d0
    }

    /// `α₀ d₀^{β₂-β₁}`, the coefficient of the far-field power law.
    pub fn far_coefficient(&self) -> f64 {
        self.alpha0 * self.d0.powf(self.beta2 - self.beta1)
    }

    /// Path loss at the breakpoint, `α₀ d₀^{-β₁}`.
    pub fn at_breakpoint(&self) -> f64 {
        self.alpha0 * self.d0.powf(-self.beta1)
    }

    pub fn with_beta1(&self, beta1: f64) -> Result<Self> {
        Self::new(self.alpha0, beta1, self.beta2, self.d0)
    }

    pub fn with_d0(&self, d0: f64) -> Result<Self> {
        Self::new(self.alpha0, self.beta1, self.beta2, d0)
    }
}

pub fn path_loss(r: f64, model: &DualSlopeModel) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::Domain(format!("path loss needs r >= 0, got {r}")));
    }
    if r == 0.0 {
        if model.beta1 > 0.0 {
            return Err(Error::Domain(
                "path loss is unbounded at r = 0 when beta1 > 0".into(),
            ));
        }
        return Ok(model.alpha0);
    }
    Ok(path_loss_unchecked(r, model))
}

#[inline]
pub(crate) fn path_loss_unchecked(r: f64, model: &DualSlopeModel) -> f64 {
    if r < model.d0 {
        model.alpha0 * r.powf(-model.beta1)
    } else {
        model.far_coefficient() * r.powf(-model.beta2)
    }
}

/// Sectored antenna pattern on both link ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamPattern {
    pub main_bs: f64,
    pub side_bs: f64,
    pub width_bs: f64,
    pub main_ue: f64,
    pub side_ue: f64,
    pub width_ue: f64,
}

impl BeamPattern {
    pub fn new(
        main_bs: f64,
        side_bs: f64,
        width_bs: f64,
        main_ue: f64,
        side_ue: f64,
        width_ue: f64,
    ) -> Result<Self> {
        let beams = Self {
            main_bs,
            side_bs,
            width_bs,
            main_ue,
            side_ue,
            width_ue,
        };
        beams.validate()?;
        Ok(beams)
    }

    /// Omnidirectional antennas with unit gain.
    pub fn omni() -> Self {
        Self {
            main_bs: 1.0,
            side_bs: 1.0,
            width_bs: TWO_PI,
            main_ue: 1.0,
            side_ue: 1.0,
            width_ue: TWO_PI,
        }
    }

    /// Same main gain, side gain and beamwidth on both ends.
    pub fn symmetric(main: f64, side: f64, width: f64) -> Result<Self> {
        Self::new(main, side, width, main, side, width)
    }

    pub fn validate(&self) -> Result<()> {
        let sides = [
            ("main_bs", "side_bs", "width_bs", self.main_bs, self.side_bs, self.width_bs),
            ("main_ue", "side_ue", "width_ue", self.main_ue, self.side_ue, self.width_ue),
        ];
        for (main_name, side_name, width_name, main, side, width) in sides {
            if !(main > 0.0 && main.is_finite()) {
                return Err(Error::invalid(main_name, "main lobe gain must be positive"));
            }
            if !(side >= 0.0 && side <= main) {
                return Err(Error::invalid(
                    side_name,
                    "side lobe gain must lie in [0, main lobe gain]",
                ));
            }
            if !(width > 0.0 && width <= TWO_PI * (1.0 + 4.0 * f64::EPSILON)) {
                return Err(Error::invalid(width_name, "beamwidth must lie in (0, 2π]"));
            }
        }
        Ok(())
    }

    /// Probability that an interferer's main lobe meets the user's main lobe.
    pub fn alignment_probability(&self) -> f64 {
        (self.width_bs * self.width_ue / (TWO_PI * TWO_PI)).min(1.0)
    }

    /// Gain of the aligned serving link, `N_B N_U`.
    pub fn serving_gain(&self) -> f64 {
        self.main_bs * self.main_ue
    }

    /// Front-back ratio `N/n` of the BS side (infinite when `n = 0`).
    pub fn front_back_bs(&self) -> f64 {
        self.main_bs / self.side_bs
    }

    pub fn front_back_ue(&self) -> f64 {
        self.main_ue / self.side_ue
    }

    pub fn has_side_lobes(&self) -> bool {
        self.side_bs > 0.0 || self.side_ue > 0.0
    }
}

/// Four-point law of the interferer beamforming gain `G_i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainDistribution {
    /// Gains: aligned, BS-main/UE-side, BS-side/UE-main, side/side.
    pub gains: [f64; 4],
    pub probabilities: [f64; 4],
}

impl GainDistribution {
    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.gains.iter().copied().zip(self.probabilities.iter().copied())
    }
}

pub fn gain_distribution(beams: &BeamPattern) -> GainDistribution {
    let fb = (beams.width_bs / TWO_PI).min(1.0);
    let fu = (beams.width_ue / TWO_PI).min(1.0);
    GainDistribution {
        gains: [
            beams.main_bs * beams.main_ue,
            beams.main_bs * beams.side_ue,
            beams.side_bs * beams.main_ue,
            beams.side_bs * beams.side_ue,
        ],
        probabilities: [fb * fu, fb * (1.0 - fu), (1.0 - fb) * fu, (1.0 - fb) * (1.0 - fu)],
    }
}

pub fn expected_gain(dist: &GainDistribution) -> f64 {
    dist.iter().map(|(a, b)| a * b).sum()
}

/// `γ = ∫₀^∞ r L(r) dr`, finite only for `β₁ < 2 < β₂`.
pub fn gamma_moment(model: &DualSlopeModel) -> Result<f64> {
    if model.beta1 >= 2.0 {
        return Err(Error::Divergence(format!(
            "∫ r L(r) dr diverges at the origin for beta1 = {} >= 2",
            model.beta1
        )));
    }
    if model.beta2 <= 2.0 {
        return Err(Error::Divergence("∫ r L(r) dr diverges for beta2 <= 2".into()));
    }
    let d = model.d0.powf(2.0 - model.beta1);
    Ok(model.alpha0 * (d / (2.0 - model.beta1) + d / (model.beta2 - 2.0)))
}

/// Everything the analytic formulas and the simulator need about one network.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkParams {
    /// BS density in BS per m².
    pub lambda: f64,
    /// Rayleigh fading rate.
    pub mu: f64,
    /// Noise power normalized by the transmit power.
    pub sigma2: f64,
    /// SINR threshold, linear.
    pub threshold: f64,
    pub model: DualSlopeModel,
    pub beams: BeamPattern,
}

impl NetworkParams {
    pub fn new(
        lambda: f64,
        mu: f64,
        sigma2: f64,
        threshold: f64,
        model: DualSlopeModel,
        beams: BeamPattern,
    ) -> Result<Self> {
        let p = Self {
            lambda,
            mu,
            sigma2,
            threshold,
            model,
            beams,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::invalid("lambda", "density must be positive and finite"));
        }
        if !(self.mu > 0.0 && self.mu.is_finite()) {
            return Err(Error::invalid("mu", "fading rate must be positive"));
        }
        if !(self.sigma2 >= 0.0 && self.sigma2.is_finite()) {
            return Err(Error::invalid("sigma2", "noise power must be >= 0"));
        }
        if !(self.threshold > 0.0 && self.threshold.is_finite()) {
            return Err(Error::invalid("threshold", "SINR threshold must be positive"));
        }
        self.beams.validate()
    }

    /// Default evaluation point used throughout the numerical study:
    /// β₂ = 4, d₀ = 10 m, α₀ = 0 dB, μ = 1, T = 7 dB, SNR at d₀ of 20 dB,
    /// N_B = 20 dB, n_B = 0 dB, θ_B = π/6, N_U = 10 dB, n_U = −10 dB, θ_U = π/2.
    pub fn reference(beta1: f64, density_per_km2: f64) -> Result<Self> {
        let model = DualSlopeModel::new(1.0, beta1, 4.0, 10.0)?;
        let beams = BeamPattern::new(
            db_to_linear(20.0),
            db_to_linear(0.0),
            PI / 6.0,
            db_to_linear(10.0),
            db_to_linear(-10.0),
            PI / 2.0,
        )?;
        let sigma2 = model.at_breakpoint() / db_to_linear(20.0);
        Self::new(
            per_km2_to_per_m2(density_per_km2),
            1.0,
            sigma2,
            db_to_linear(7.0),
            model,
            beams,
        )
    }

    pub fn gains(&self) -> GainDistribution {
        gain_distribution(&self.beams)
    }

    /// Expected number of BSs inside the breakpoint, `λπd₀²`.
    pub fn near_field_intensity(&self) -> f64 {
        self.lambda * PI * self.model.d0 * self.model.d0
    }

    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        Self::new(lambda, self.mu, self.sigma2, self.threshold, self.model, self.beams)
    }

    pub fn with_threshold(&self, threshold: f64) -> Result<Self> {
        Self::new(self.lambda, self.mu, self.sigma2, threshold, self.model, self.beams)
    }

    pub fn with_beams(&self, beams: BeamPattern) -> Result<Self> {
        Self::new(self.lambda, self.mu, self.sigma2, self.threshold, self.model, beams)
    }

    pub fn with_model(&self, model: DualSlopeModel) -> Result<Self> {
        Self::new(self.lambda, self.mu, self.sigma2, self.threshold, model, self.beams)
    }

    pub fn with_sigma2(&self, sigma2: f64) -> Result<Self> {
        Self::new(self.lambda, self.mu, sigma2, self.threshold, self.model, self.beams)
    }

    pub fn with_mu(&self, mu: f64) -> Result<Self> {
        Self::new(self.lambda, mu, self.sigma2, self.threshold, self.model, self.beams)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference_model() -> DualSlopeModel {
        DualSlopeModel::new(1.0, 2.0, 4.0, 10.0).unwrap()
    }

    #[test]
    fn path_loss_examples() {
        let m = reference_model();
        assert!((path_loss(10.0, &m).unwrap() - 0.01).abs() < 1e-15);
        assert!((path_loss(20.0, &m).unwrap() - 6.25e-4).abs() < 1e-16);
        assert!((path_loss(5.0, &m).unwrap() - 0.04).abs() < 1e-15);
    }

    #[test]
    fn path_loss_continuous_at_breakpoint() {
        for &(b1, b2, d0) in &[(2.0, 4.0, 10.0), (0.0, 3.0, 7.5), (1.3, 5.2, 2.0)] {
            let m = DualSlopeModel::new(2.5, b1, b2, d0).unwrap();
            let below = path_loss(d0 * (1.0 - 1e-12), &m).unwrap();
            let at = path_loss(d0, &m).unwrap();
            assert!((below - at).abs() <= 1e-10 * at, "{b1} {b2} {d0}");
        }
    }

    #[test]
    fn path_loss_at_origin() {
        let flat = DualSlopeModel::new(3.0, 0.0, 4.0, 10.0).unwrap();
        assert_eq!(path_loss(0.0, &flat).unwrap(), 3.0);
        assert!(matches!(
            path_loss(0.0, &reference_model()),
            Err(Error::Domain(_))
        ));
        assert!(path_loss(-1.0, &flat).is_err());
    }

    #[test]
    fn model_validation() {
        assert!(DualSlopeModel::new(1.0, 2.0, 2.0, 10.0).is_err());
        assert!(DualSlopeModel::new(1.0, 5.0, 4.0, 10.0).is_err());
        assert!(DualSlopeModel::new(1.0, -0.1, 4.0, 10.0).is_err());
        assert!(DualSlopeModel::new(0.0, 2.0, 4.0, 10.0).is_err());
        assert!(DualSlopeModel::new(1.0, 2.0, 4.0, 0.0).is_err());
        assert!(DualSlopeModel::new(1.0, 4.0, 4.0, 10.0).is_ok());
    }

    #[test]
    fn gain_distribution_reference_pattern() {
        let p = NetworkParams::reference(2.0, 1000.0).unwrap();
        let d = p.gains();
        let a = [1000.0, 10.0, 10.0, 0.1];
        let b = [1.0 / 48.0, 1.0 / 16.0, 11.0 / 48.0, 11.0 / 16.0];
        for k in 0..4 {
            assert!((d.gains[k] - a[k]).abs() < 1e-9 * a[k]);
            assert!((d.probabilities[k] - b[k]).abs() < 1e-15);
        }
        assert!((d.probabilities.iter().sum::<f64>() - 1.0).abs() <= f64::EPSILON);
        assert!((expected_gain(&d) - 1143.3 / 48.0).abs() < 1e-10);
    }

    #[test]
    fn gain_distribution_omni_and_narrow() {
        let d = gain_distribution(&BeamPattern::symmetric(7.0, 0.5, TWO_PI).unwrap());
        assert_eq!(d.probabilities, [1.0, 0.0, 0.0, 0.0]);
        let narrow = BeamPattern::symmetric(7.0, 0.5, 1e-9).unwrap();
        assert!(gain_distribution(&narrow).probabilities[0] < 1e-18);
        assert_eq!(expected_gain(&gain_distribution(&BeamPattern::omni())), 1.0);
    }

    #[test]
    fn expected_gain_without_side_lobes() {
        let beams = BeamPattern::new(100.0, 0.0, 0.4, 10.0, 0.0, 1.1).unwrap();
        let d = gain_distribution(&beams);
        let expect = 1000.0 * 0.4 * 1.1 / (4.0 * PI * PI);
        assert!((expected_gain(&d) - expect).abs() < 1e-12 * expect);
    }

    #[test]
    fn gamma_moment_examples() {
        let m = DualSlopeModel::new(1.0, 0.0, 4.0, 10.0).unwrap();
        assert!((gamma_moment(&m).unwrap() - 100.0).abs() < 1e-12);
        let m = DualSlopeModel::new(2.0, 0.0, 4.0, 10.0).unwrap();
        assert!((gamma_moment(&m).unwrap() - 200.0).abs() < 1e-12);
        let m = DualSlopeModel::new(1.0, 1.0, 3.0, 10.0).unwrap();
        assert!((gamma_moment(&m).unwrap() - 20.0).abs() < 1e-12);
        assert!(matches!(
            gamma_moment(&reference_model()),
            Err(Error::Divergence(_))
        ));
    }

    #[test]
    fn reference_noise_matches_snr_at_breakpoint() {
        let p = NetworkParams::reference(2.0, 1000.0).unwrap();
        assert!((p.sigma2 - 1e-4).abs() < 1e-18);
        assert!((p.lambda - 1e-3).abs() < 1e-18);
    }

    #[test]
    fn db_round_trip() {
        for &x in &[-30.0, -10.0, 0.0, 7.0, 20.0, 43.5] {
            assert!((linear_to_db(db_to_linear(x)) - x).abs() < 1e-12);
        }
    }
}
