//! Two-photon fringe scans and weighted sinusoidal fitting.

use event_sim::{simulate, ExperimentConfig};
use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::AnalyzerError;
use crate::histogram::count_coincidences;

/// One fringe measurement point: mean X-port coincidence counts and their
/// standard deviations over the repetitions.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct FringePoint {
    pub theta1_rad: f64,
    /// Slot-aligned X0-X'0 coincidences in the window.
    pub correlated: f64,
    pub correlated_std: f64,
    /// Slot-aligned X0-X'1 coincidences in the window.
    pub anticorrelated: f64,
    pub anticorrelated_std: f64,
}

/// Sweep the signal-AMZI phase over `phase_values`, running the full
/// simulation `repetitions` times per point with derived seeds, and count
/// slot-aligned X-port coincidences in a `window_ps` window at delay 0.
///
/// Error bars follow the repetition standard deviation; with one repetition
/// they fall back to the Poisson square root.
pub fn fringe_scan(
    template: &ExperimentConfig,
    phase_values: &[f64],
    repetitions: u32,
    window_ps: i64,
) -> Result<Vec<FringePoint>, AnalyzerError> {
    let repetitions = repetitions.max(1);
    let ch_x0 = template.channels[1].channel_id;
    let ch_x0i = template.channels[5].channel_id;
    let ch_x1i = template.channels[6].channel_id;
    let mut out = Vec::with_capacity(phase_values.len());
    for (pi, &theta1) in phase_values.iter().enumerate() {
        let mut corr = Vec::with_capacity(repetitions as usize);
        let mut anti = Vec::with_capacity(repetitions as usize);
        for rep in 0..repetitions {
            let mut config = template.clone();
            config.phases.theta1 = theta1;
            config.seed = derive_seed(template.seed, pi as u64, rep as u64);
            let sim = simulate(&config)?;
            corr.push(count_coincidences(&sim.tags, ch_x0, ch_x0i, 0, window_ps) as f64);
            anti.push(count_coincidences(&sim.tags, ch_x0, ch_x1i, 0, window_ps) as f64);
        }
        let (c_mean, c_std) = mean_std(&corr);
        let (a_mean, a_std) = mean_std(&anti);
        out.push(FringePoint {
            theta1_rad: theta1,
            correlated: c_mean,
            correlated_std: c_std,
            anticorrelated: a_mean,
            anticorrelated_std: a_std,
        });
    }
    Ok(out)
}

/// Evenly spaced phase grid over [0, 2 pi), `points` long.
pub fn phase_grid(points: usize) -> Vec<f64> {
    (0..points)
        .map(|i| i as f64 * 2.0 * std::f64::consts::PI / points as f64)
        .collect()
}

/// Linear map from an interferometer temperature to its long-arm phase,
/// theta = theta0 + dtheta_dt * (t - t0). The default scale is 2 pi per
/// 1.0 degC of PLC tuning.
pub fn phase_from_temperature(t_c: f64, t0_c: f64, theta0_rad: f64, dtheta_dt: f64) -> f64 {
    theta0_rad + dtheta_dt * (t_c - t0_c)
}

/// Default PLC tuning scale, rad per degC.
pub const DEFAULT_DTHETA_DT: f64 = 2.0 * std::f64::consts::PI;

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        // single repetition: Poisson estimate
        return (mean, mean.max(0.0).sqrt());
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// splitmix64-style seed derivation for scan repetitions.
fn derive_seed(base: u64, point: u64, rep: u64) -> u64 {
    let mut z = base
        .wrapping_add(point.wrapping_mul(0x9e37_79b9_7f4a_7c15))
        .wrapping_add(rep.wrapping_mul(0xbf58_476d_1ce4_e5b9));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// One weighted observation for the sinusoid fit.
#[derive(Debug, Clone, Copy)]
pub struct FitPoint {
    pub x: f64,
    pub y: f64,
    /// Standard deviation of `y`; non-positive values mean unweighted.
    pub sigma: f64,
}

/// Result of fitting C0 (1 + V cos(k x + phi0)).
#[derive(Debug, Clone, Copy)]
pub struct FringeFit {
    pub offset: f64,
    pub visibility: f64,
    pub visibility_err: f64,
    pub phase0_rad: f64,
    pub angular_frequency: f64,
    pub reduced_chi_sq: f64,
    pub converged: bool,
}

/// Reduced chi-square above which the fit is declared diverged.
pub const FIT_CHI2_LIMIT: f64 = 10.0;

/// Weighted least-squares fit of C0 (1 + V cos(k x + phi0)).
///
/// For fixed k the model is linear in (offset, in-phase, quadrature):
/// y = A + B cos(kx) + C sin(kx); k itself is refined by a golden-section
/// search around `k_hint`, then V = sqrt(B^2 + C^2)/A with errors from the
/// covariance of the linear solve.
pub fn fit_sinusoid(points: &[FitPoint], k_hint: f64) -> Result<FringeFit, AnalyzerError> {
    if points.len() < 5 {
        return Err(AnalyzerError::TooFewPoints(points.len()));
    }
    let x_min = points.iter().map(|p| p.x).fold(f64::INFINITY, f64::min);
    let x_max = points.iter().map(|p| p.x).fold(f64::NEG_INFINITY, f64::max);
    let span = (x_max - x_min) * k_hint.abs();
    if span < std::f64::consts::PI {
        return Err(AnalyzerError::SpanTooShort { span });
    }

    // golden-section search for k on a bracket around the hint
    let golden: f64 = (5f64.sqrt() - 1.0) / 2.0;
    let mut lo = 0.5 * k_hint;
    let mut hi = 1.5 * k_hint;
    let mut c = hi - golden * (hi - lo);
    let mut d = lo + golden * (hi - lo);
    let mut f_c = linear_fit(points, c).chi_sq;
    let mut f_d = linear_fit(points, d).chi_sq;
    for _ in 0..80 {
        if f_c < f_d {
            hi = d;
            d = c;
            f_d = f_c;
            c = hi - golden * (hi - lo);
            f_c = linear_fit(points, c).chi_sq;
        } else {
            lo = c;
            c = d;
            f_c = f_d;
            d = lo + golden * (hi - lo);
            f_d = linear_fit(points, d).chi_sq;
        }
        if (hi - lo).abs() < 1e-12 * k_hint.abs() {
            break;
        }
    }
    let k = 0.5 * (lo + hi);
    let sol = linear_fit(points, k);

    let dof = (points.len() as f64 - 4.0).max(1.0);
    let reduced_chi_sq = sol.chi_sq / dof;
    if reduced_chi_sq > FIT_CHI2_LIMIT {
        return Err(AnalyzerError::FitDiverged { chi2: reduced_chi_sq, limit: FIT_CHI2_LIMIT });
    }

    let (a, b, cq) = (sol.params[0], sol.params[1], sol.params[2]);
    let amplitude = (b * b + cq * cq).sqrt();
    let visibility = amplitude / a;
    let phase0 = (-cq).atan2(b);

    // propagate covariance through V = sqrt(B^2 + C^2) / A
    let mut cov = sol.covariance;
    if !sol.weighted {
        cov *= reduced_chi_sq.max(0.0);
    }
    let g = if amplitude > 0.0 {
        Vector3::new(-visibility / a, b / (amplitude * a), cq / (amplitude * a))
    } else {
        Vector3::new(0.0, 1.0 / a, 1.0 / a)
    };
    let var_v = (g.transpose() * cov * g)[(0, 0)].max(0.0);

    Ok(FringeFit {
        offset: a,
        visibility,
        visibility_err: var_v.sqrt(),
        phase0_rad: phase0,
        angular_frequency: k,
        reduced_chi_sq,
        converged: true,
    })
}

struct LinearSolution {
    params: Vector3<f64>,
    covariance: Matrix3<f64>,
    chi_sq: f64,
    weighted: bool,
}

/// Solve the normal equations for y = A + B cos(kx) + C sin(kx).
fn linear_fit(points: &[FitPoint], k: f64) -> LinearSolution {
    let weighted = points.iter().all(|p| p.sigma > 0.0);
    let mut normal = Matrix3::zeros();
    let mut rhs = Vector3::zeros();
    for p in points {
        let w = if weighted { 1.0 / (p.sigma * p.sigma) } else { 1.0 };
        let row = Vector3::new(1.0, (k * p.x).cos(), (k * p.x).sin());
        normal += w * row * row.transpose();
        rhs += w * p.y * row;
    }
    let inv = normal.try_inverse().unwrap_or_else(Matrix3::zeros);
    let params = inv * rhs;
    let chi_sq = points
        .iter()
        .map(|p| {
            let w = if weighted { 1.0 / (p.sigma * p.sigma) } else { 1.0 };
            let model = params[0] + params[1] * (k * p.x).cos() + params[2] * (k * p.x).sin();
            w * (p.y - model).powi(2)
        })
        .sum();
    LinearSolution { params, covariance: inv, chi_sq, weighted }
}

/// Fit both traces of a fringe scan; returns (correlated fit,
/// anticorrelated fit). Repetition standard deviations are floored at 1
/// count so empty fringe minima cannot acquire infinite weight.
pub fn fit_fringe_points(
    points: &[FringePoint],
    k_hint: f64,
) -> Result<(FringeFit, FringeFit), AnalyzerError> {
    let correlated: Vec<FitPoint> = points
        .iter()
        .map(|p| FitPoint { x: p.theta1_rad, y: p.correlated, sigma: p.correlated_std.max(1.0) })
        .collect();
    let anticorrelated: Vec<FitPoint> = points
        .iter()
        .map(|p| FitPoint {
            x: p.theta1_rad,
            y: p.anticorrelated,
            sigma: p.anticorrelated_std.max(1.0),
        })
        .collect();
    Ok((fit_sinusoid(&correlated, k_hint)?, fit_sinusoid(&anticorrelated, k_hint)?))
}
