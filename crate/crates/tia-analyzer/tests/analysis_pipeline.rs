//! End-to-end analysis of simulated streams: Fig.-4-style coincidence
//! statistics, Z-basis visibility, fringe complementarity, CAR behavior.

use event_sim::{simulate, simulate_direct, DirectConfig, ExperimentConfig};
use tia_analyzer::{
    coincidence_stats, count_coincidences, cross_correlate, fit_fringe_points, fringe_scan,
    phase_grid, z_visibility, AnalyzerError, MIN_COINCIDENCES,
};

/// Capture fraction of a centered window of half-width `half_ps` for a
/// time difference distributed as Gaussian(sigma) + Laplace(scale):
/// Simpson quadrature of the Laplace density against the Gaussian window
/// integral. Independent of the simulator's sampling path.
fn window_capture_oracle(half_ps: f64, sigma_ps: f64, laplace_scale_ps: f64) -> f64 {
    let phi = |x: f64| 0.5 * (1.0 + erf(x / std::f64::consts::SQRT_2));
    let gauss_window = |center: f64| {
        phi((half_ps - center) / sigma_ps) - phi((-half_ps - center) / sigma_ps)
    };
    let b = laplace_scale_ps;
    let lo = -40.0 * b.max(1.0);
    let hi = 40.0 * b.max(1.0);
    let n = 4001;
    let h = (hi - lo) / (n - 1) as f64;
    let mut sum = 0.0;
    for i in 0..n {
        let x = lo + i as f64 * h;
        let w = if i == 0 || i == n - 1 {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let laplace = (-x.abs() / b).exp() / (2.0 * b);
        sum += w * laplace * gauss_window(x);
    }
    sum * h / 3.0
}

fn erf(x: f64) -> f64 {
    // Abramowitz-Stegun 7.1.26, |error| < 1.5e-7
    let sign = x.signum();
    let x = x.abs();
    let t = 1.0 / (1.0 + 0.3275911 * x);
    let y = 1.0
        - (((((1.061405429 * t - 1.453152027) * t) + 1.421413741) * t - 0.284496736) * t
            + 0.254829592)
            * t
            * (-x * x).exp();
    sign * y
}

/// The Fig.-4-style direct measurement: peak FWHM ~ 140 ps, windowed CCR
/// and CAR agreeing with the analytic expectations.
#[test]
fn direct_point_statistics() {
    let duration = 60.0;
    let config = DirectConfig::with_defaults(duration, 0xd1ec7);
    let out = simulate_direct(&config).unwrap();
    let hist = cross_correlate(&out.tags, 0, 4, 16, 4096).unwrap();
    let stats = coincidence_stats(&hist, 64, duration, &[0]).unwrap();

    assert!(
        stats.peak_fwhm_ps > 125.0 && stats.peak_fwhm_ps < 155.0,
        "fwhm {}",
        stats.peak_fwhm_ps
    );

    // analytic windowed CCR
    let rate = 21e6;
    let eta_s = 10f64.powf(-2.8);
    let eta_i = 10f64.powf(-2.9);
    let sigma_pair = 2.0f64.sqrt() * 100.0 / (8.0 * 2f64.ln()).sqrt();
    let capture =
        window_capture_oracle(32.0, sigma_pair, config.source.pair_correlation_time_ps);
    let expect_ccr = rate * eta_s * eta_i * capture;
    let expect_counts = expect_ccr * duration;
    let got = stats.ccr_hz * duration;
    assert!(
        (got - expect_counts).abs() < 3.0 * expect_counts.sqrt() + 3.0,
        "windowed counts {got} vs {expect_counts}"
    );

    // CAR against the analytic accidental rate (singles include darks)
    let singles_s = rate * eta_s + 100.0;
    let singles_i = rate * eta_i + 100.0;
    let acc_per_window = singles_s * singles_i * 64e-12;
    let expect_car = expect_ccr / acc_per_window;
    assert!(
        (stats.car - expect_car).abs() < 3.0 * stats.car_err,
        "car {} +- {} vs {expect_car}",
        stats.car,
        stats.car_err
    );
}

/// Noiseless entangled run: unit Z visibility.
#[test]
fn z_visibility_ideal_is_one() {
    let mut config = ExperimentConfig::with_defaults(2.0, 5);
    config.source.pump_power_mw = 1.0;
    config.source.pair_rate_coeff_hz_per_mw2 = 50_000.0;
    config.amzi_insertion_db = 0.0;
    for ch in config.channels.iter_mut() {
        ch.transmittance_db = 0.0;
        ch.dark_rate_hz = 0.0;
        ch.jitter_fwhm_ps = 10.0;
    }
    let out = simulate(&config).unwrap();
    let vis = z_visibility(&out.tags, 0, 4, 7, 64).unwrap();
    assert_eq!(vis.mismatched, 0);
    assert_eq!(vis.value, 1.0);
    // the Z0-Z'1 correlation exists, but one AMZI delay later
    let shifted = count_coincidences(&out.tags, 0, 7, 800, 64);
    assert!(shifted > MIN_COINCIDENCES, "tau-shifted peak missing: {shifted}");
}

/// Pure dark-count streams carry no correlation: visibility 0 within error.
#[test]
fn z_visibility_of_darks_is_zero() {
    let mut config = ExperimentConfig::with_defaults(12.0, 6);
    config.source.pump_power_mw = 0.0;
    for ch in config.channels.iter_mut() {
        // hot detectors on the three channels entering the estimate, so a
        // few hundred accidentals land in the 64 ps window
        ch.dark_rate_hz = if matches!(ch.channel_id, 0 | 4 | 7) { 400_000.0 } else { 0.0 };
    }
    let out = simulate(&config).unwrap();
    let vis = z_visibility(&out.tags, 0, 4, 7, 64).unwrap();
    assert!(
        vis.value.abs() < 3.0 * vis.std_err,
        "dark visibility {} +- {}",
        vis.value,
        vis.std_err
    );
}

#[test]
fn z_visibility_needs_counts() {
    let mut config = ExperimentConfig::with_defaults(0.01, 6);
    config.source.pump_power_mw = 0.0;
    for ch in config.channels.iter_mut() {
        ch.dark_rate_hz = 1000.0;
    }
    let out = simulate(&config).unwrap();
    assert!(matches!(
        z_visibility(&out.tags, 0, 4, 7, 64),
        Err(AnalyzerError::InsufficientCounts { .. })
    ));
}

/// Ideal fringe: the two traces follow (1 +- cos)/2 and are complementary.
#[test]
fn ideal_fringe_shape_and_complementarity() {
    let mut template = ExperimentConfig::with_defaults(2.0, 0xf01d);
    template.source.pump_power_mw = 1.0;
    template.source.pair_rate_coeff_hz_per_mw2 = 50_000.0;
    template.amzi_insertion_db = 0.0;
    for ch in template.channels.iter_mut() {
        ch.transmittance_db = 0.0;
        ch.dark_rate_hz = 0.0;
        ch.jitter_fwhm_ps = 10.0;
    }
    let phases = phase_grid(8);
    let points = fringe_scan(&template, &phases, 1, 64).unwrap();

    for p in &points {
        let total = p.correlated + p.anticorrelated;
        assert!(total > 200.0, "too few X coincidences at {}", p.theta1_rad);
        // fraction of correlated coincidences is (1 + cos phi)/2,
        // independent of the window capture factor
        let expect = (1.0 + p.theta1_rad.cos()) / 2.0;
        let frac = p.correlated / total;
        let sigma = (expect * (1.0 - expect) / total).sqrt().max(1.0 / total);
        assert!(
            (frac - expect).abs() < 4.0 * sigma,
            "theta {}: fraction {frac} vs {expect}",
            p.theta1_rad
        );
    }

    let (corr_fit, anti_fit) = fit_fringe_points(&points, 1.0).unwrap();
    assert!(corr_fit.visibility > 0.9, "corr visibility {}", corr_fit.visibility);
    assert!(anti_fit.visibility > 0.9, "anti visibility {}", anti_fit.visibility);
    let mut dphi = (corr_fit.phase0_rad - anti_fit.phase0_rad).abs();
    while dphi > 2.0 * std::f64::consts::PI {
        dphi -= 2.0 * std::f64::consts::PI;
    }
    let err = 3.0 * (corr_fit.visibility_err + anti_fit.visibility_err) + 0.2;
    assert!(
        (dphi - std::f64::consts::PI).abs() < err,
        "complementary traces shifted by {dphi}, not pi"
    );
}

/// Adding dark counts never raises the CAR; doubling the pump power
/// lowers it (accidentals grow quadratically, true pairs linearly).
#[test]
fn car_monotonicity() {
    let duration = 30.0;
    let stats_for = |dark: f64, power: f64, seed: u64| {
        let mut config = DirectConfig::with_defaults(duration, seed);
        config.source.pump_power_mw = power;
        config.signal.dark_rate_hz = dark;
        config.idler.dark_rate_hz = dark;
        let out = simulate_direct(&config).unwrap();
        let hist = cross_correlate(&out.tags, 0, 4, 16, 4096).unwrap();
        coincidence_stats(&hist, 64, duration, &[0]).unwrap()
    };
    for seed in [1u64, 2, 3] {
        let clean = stats_for(0.0, 0.41, seed);
        let noisy = stats_for(20_000.0, 0.41, seed);
        assert!(
            noisy.car < clean.car + 3.0 * (noisy.car_err + clean.car_err),
            "seed {seed}: dark counts raised CAR {} -> {}",
            clean.car,
            noisy.car
        );
        let strong = stats_for(0.0, 0.82, seed);
        assert!(
            strong.car < clean.car - 3.0 * (strong.car_err + clean.car_err),
            "seed {seed}: CAR did not drop with pump power {} -> {}",
            clean.car,
            strong.car
        );
    }
}
