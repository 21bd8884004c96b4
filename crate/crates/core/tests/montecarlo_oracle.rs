use std::f64::consts::PI;

use udn_core::analytic::{coverage_closed_form, coverage_probability, FadingSpec};
use udn_core::model::{BeamPattern, DualSlopeModel, NetworkParams};
use udn_core::montecarlo::{
    coverage_from_samples, estimate_coverage, estimate_coverage_curve, run_trials, SimConfig,
};
use udn_core::special::rho;

fn reference(beta1: f64, lambda_km2: f64) -> NetworkParams {
    NetworkParams::reference(beta1, lambda_km2).unwrap()
}

#[test]
fn nearest_distance_passes_ks() {
    let p = reference(2.0, 1e3);
    let c = SimConfig::new(&p, 20_000, 11).unwrap();
    let mut r: Vec<f64> = run_trials(&p, &c).unwrap().iter().map(|s| s.serving_distance).collect();
    r.sort_by(f64::total_cmp);
    let n = r.len() as f64;
    let d = r
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let cdf = -(-p.lambda * PI * x * x).exp_m1();
            (cdf - i as f64 / n).abs().max(((i + 1) as f64 / n - cdf).abs())
        })
        .fold(0.0, f64::max);
    assert!(d < 1.628 / n.sqrt(), "KS statistic {d}");
}

#[test]
fn gain_class_frequencies() {
    let p = reference(2.0, 1e3);
    let c = SimConfig::new(&p, 2_000, 12).unwrap();
    let samples = run_trials(&p, &c).unwrap();
    let mut counts = [0u64; 4];
    for s in &samples {
        for (total, n) in counts.iter_mut().zip(s.class_counts) {
            *total += n;
        }
        assert_eq!(s.n_interferers, s.class_counts.iter().sum::<u64>());
    }
    // Each class is Poisson with mean λ b_k π R_k², less the serving BS.
    let trials = samples.len() as f64;
    for (k, (_, b)) in p.gains().iter().enumerate() {
        let r = c.class_radii[k];
        let expected = p.lambda * b * PI * r * r;
        let mean = counts[k] as f64 / trials;
        let sd = (expected / trials).sqrt();
        assert!((mean - expected).abs() < 3.0 * sd + 1.0, "class {k}: {mean} vs {expected}");
    }
}

#[test]
fn doubling_window_leaves_coverage_unchanged() {
    let p = reference(2.0, 1e3);
    let c = SimConfig::new(&p, 20_000, 13).unwrap();
    let wide = c.scaled(2.0);
    let a = estimate_coverage(&p, &c).unwrap();
    let b = estimate_coverage(&p, &wide).unwrap();
    assert!((a.mean - b.mean).abs() < a.std_error, "{} vs {}", a.mean, b.mean);
}

#[test]
fn results_do_not_depend_on_worker_count() {
    let p = reference(1.0, 1e4);
    let c = SimConfig::new(&p, 3_000, 14).unwrap();
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| run_trials(&p, &c).unwrap())
    };
    let one = run(1);
    assert_eq!(one, run(3));
    assert_eq!(one, run(8));
    let a = coverage_from_samples(&one, p.threshold, c.seed);
    let b = coverage_from_samples(&run(8), p.threshold, c.seed);
    assert_eq!(a.mean.to_bits(), b.mean.to_bits());
    assert_eq!(a.std_error.to_bits(), b.std_error.to_bits());
}

#[test]
fn single_slope_interference_limited_matches_closed_form() {
    // β₁ = β₂ = 4, omni, no noise: P_c = 1/(1 + ρ(T, 4)) at any density.
    let model = DualSlopeModel::new(1.0, 4.0, 4.0, 1.0).unwrap();
    let t = 10f64.powf(0.7);
    let p = NetworkParams::new(1e-4, 1.0, 0.0, t, model, BeamPattern::omni()).unwrap();
    let exact = 1.0 / (1.0 + rho(t, 4.0).unwrap());
    assert!((coverage_closed_form(1.0, t, 4.0, 0.0).unwrap() - exact).abs() < 1e-12);
    let c = SimConfig::new(&p, 20_000, 15).unwrap();
    let e = estimate_coverage(&p, &c).unwrap();
    assert!(e.contains(exact, 3.0), "{} ± {} vs {exact}", e.mean, e.std_error);
}

#[test]
fn monte_carlo_agrees_with_analytic_coverage() {
    let fading = FadingSpec::exponential(1.0).unwrap();
    for (b1, lam) in [(1.0, 1e4), (2.0, 1e3)] {
        let p = reference(b1, lam);
        let exact = coverage_probability(&p, &fading).unwrap().value;
        let e = estimate_coverage(&p, &SimConfig::new(&p, 20_000, 16).unwrap()).unwrap();
        assert!(e.contains(exact, 3.0), "β₁={b1}: {} ± {} vs {exact}", e.mean, e.std_error);
    }
}

#[test]
fn coverage_curve_is_monotone_in_threshold() {
    let p = reference(2.0, 1e4);
    let c = SimConfig::new(&p, 5_000, 17).unwrap();
    let ts: Vec<f64> = (-10..=30).step_by(5).map(|db| 10f64.powf(db as f64 / 10.0)).collect();
    let curve = estimate_coverage_curve(&p, &c, &ts).unwrap();
    assert!(curve.windows(2).all(|w| w[1].mean <= w[0].mean));
}
