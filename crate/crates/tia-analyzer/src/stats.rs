//! Coincidence statistics: CCR, CAR, peak width, accidental floor.

use crate::error::AnalyzerError;
use crate::histogram::Histogram;

/// Keep floor-estimation bins at least this far (ps) from every expected
/// coincidence peak (the true peak at 0 and the satellites at +-tau).
pub const FLOOR_GUARD_PS: i64 = 700;

/// Summary of one coincidence histogram.
#[derive(Debug, Clone)]
pub struct CoincidenceStats {
    /// Windowed coincidence rate at the peak, Hz.
    pub ccr_hz: f64,
    /// Coincidence-to-accidental ratio in the same window.
    pub car: f64,
    /// Standard error of the CAR (Poisson propagation).
    pub car_err: f64,
    /// Linear-interpolated FWHM of the peak above the floor, ps.
    pub peak_fwhm_ps: f64,
    /// Analysis window width, ps.
    pub window_ps: i64,
    /// Expected accidental counts per window per second, Hz.
    pub accidental_floor_hz: f64,
    /// Center (ps) of the maximum bin.
    pub peak_center_ps: f64,
    /// Raw windowed peak counts.
    pub peak_counts: u64,
}

/// Mean accidental counts per bin, estimated from bins at least
/// [`FLOOR_GUARD_PS`] away from every entry of `excluded_peaks`.
/// Returns (per-bin mean, number of floor bins, total floor counts).
pub fn accidental_floor(hist: &Histogram, excluded_peaks: &[i64]) -> (f64, usize, u64) {
    let mut bins = 0usize;
    let mut total = 0u64;
    for (i, &c) in hist.counts().iter().enumerate() {
        let center = hist.bin_center(i);
        let clear = excluded_peaks
            .iter()
            .all(|&p| (center - p as f64).abs() >= FLOOR_GUARD_PS as f64);
        if clear {
            bins += 1;
            total += c;
        }
    }
    let mean = if bins > 0 { total as f64 / bins as f64 } else { 0.0 };
    (mean, bins, total)
}

/// Windowed CCR, CAR and peak FWHM of a coincidence histogram.
///
/// The window is centered on the maximum bin; the accidental level comes
/// from off-peak bins clear of `excluded_peaks`. Errors with `NoPeak` when
/// the maximum bin does not rise 5x above the floor.
pub fn coincidence_stats(
    hist: &Histogram,
    window_ps: i64,
    duration_s: f64,
    excluded_peaks: &[i64],
) -> Result<CoincidenceStats, AnalyzerError> {
    if !(duration_s > 0.0) {
        return Err(AnalyzerError::ZeroDuration(duration_s));
    }
    let (floor_per_bin, floor_bins, floor_total) = accidental_floor(hist, excluded_peaks);

    let (peak_bin, &peak_max) = hist
        .counts()
        .iter()
        .enumerate()
        .max_by_key(|(_, &c)| c)
        .expect("histogram has bins");
    if (peak_max as f64) < 5.0 * floor_per_bin {
        return Err(AnalyzerError::NoPeak { max: peak_max, floor: floor_per_bin });
    }

    let peak_center = hist.bin_center(peak_bin);
    let (peak_counts, bins_in_window) = window_counts(hist, peak_bin, window_ps);
    let accidental_in_window = floor_per_bin * bins_in_window as f64;

    let (car, car_err) =
        car_from_counts(peak_counts, floor_total, floor_bins, bins_in_window);

    Ok(CoincidenceStats {
        ccr_hz: peak_counts as f64 / duration_s,
        car,
        car_err,
        peak_fwhm_ps: peak_fwhm_above_floor(hist, floor_per_bin)?,
        window_ps,
        accidental_floor_hz: accidental_in_window / duration_s,
        peak_center_ps: peak_center,
        peak_counts,
    })
}

/// Sum of a bin-aligned window of `window_ps / bin_width` bins centered on
/// `center_bin`; returns (counts, bins used).
fn window_counts(hist: &Histogram, center_bin: usize, window_ps: i64) -> (u64, usize) {
    let nw = ((window_ps / hist.bin_width_ps()).max(1) as usize).min(hist.len());
    let start = (center_bin as i64 - (nw as i64 - 1) / 2)
        .clamp(0, (hist.len() - nw) as i64) as usize;
    let counts = hist.counts()[start..start + nw].iter().sum();
    (counts, nw)
}

/// CAR = windowed counts over the floor scaled to the same number of bins,
/// with Poisson error propagation through both factors.
fn car_from_counts(
    peak_counts: u64,
    floor_total: u64,
    floor_bins: usize,
    bins_in_window: usize,
) -> (f64, f64) {
    if floor_total == 0 || floor_bins == 0 {
        return (f64::INFINITY, f64::NAN);
    }
    let accidental = floor_total as f64 * bins_in_window as f64 / floor_bins as f64;
    let car = peak_counts as f64 / accidental;
    let err = if peak_counts > 0 {
        car * (1.0 / peak_counts as f64 + 1.0 / floor_total as f64).sqrt()
    } else {
        f64::NAN
    };
    (car, err)
}

/// CAR evaluated in a window at an explicit delay (no peak detection), for
/// accidental-only data where no 5x peak exists.
pub fn windowed_car(
    hist: &Histogram,
    center_ps: i64,
    window_ps: i64,
    excluded_peaks: &[i64],
) -> (f64, f64) {
    let (floor_per_bin, floor_bins, floor_total) = accidental_floor(hist, excluded_peaks);
    let _ = floor_per_bin;
    let center_bin = (((center_ps - hist.lo_ps()) / hist.bin_width_ps()).max(0) as usize)
        .min(hist.len() - 1);
    let (counts, nw) = window_counts(hist, center_bin, window_ps);
    car_from_counts(counts, floor_total, floor_bins, nw)
}

/// Full width at half maximum of the histogram peak, linearly interpolated
/// at half of (peak - floor) above the floor.
pub fn peak_fwhm_above_floor(hist: &Histogram, floor_per_bin: f64) -> Result<f64, AnalyzerError> {
    let counts = hist.counts();
    let (peak_bin, &peak_max) = counts
        .iter()
        .enumerate()
        .max_by_key(|(_, &c)| c)
        .expect("histogram has bins");
    if (peak_max as f64) < 5.0 * floor_per_bin || peak_max == 0 {
        return Err(AnalyzerError::NoPeak { max: peak_max, floor: floor_per_bin });
    }
    let half_level = floor_per_bin + (peak_max as f64 - floor_per_bin) / 2.0;
    let w = hist.bin_width_ps() as f64;

    // walk left from the peak for the crossing
    let left = {
        let mut x = hist.bin_center(0) - 0.5 * w;
        let mut i = peak_bin;
        while i > 0 {
            let lower = counts[i - 1] as f64;
            let upper = counts[i] as f64;
            if lower <= half_level && upper >= half_level {
                let frac = if upper > lower { (half_level - lower) / (upper - lower) } else { 0.5 };
                x = hist.bin_center(i - 1) + frac * w;
                break;
            }
            i -= 1;
        }
        x
    };
    let right = {
        let mut x = hist.bin_center(counts.len() - 1) + 0.5 * w;
        let mut i = peak_bin;
        while i + 1 < counts.len() {
            let upper = counts[i] as f64;
            let lower = counts[i + 1] as f64;
            if upper >= half_level && lower <= half_level {
                let frac = if upper > lower { (upper - half_level) / (upper - lower) } else { 0.5 };
                x = hist.bin_center(i) + frac * w;
                break;
            }
            i += 1;
        }
        x
    };
    Ok(right - left)
}

/// Convenience: FWHM with the floor estimated from off-peak bins.
pub fn peak_fwhm(hist: &Histogram, excluded_peaks: &[i64]) -> Result<f64, AnalyzerError> {
    let (floor, _, _) = accidental_floor(hist, excluded_peaks);
    peak_fwhm_above_floor(hist, floor)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian_hist(sigma_ps: f64, amplitude: f64, floor: f64) -> Histogram {
        let mut h = Histogram::symmetric(4096, 16).unwrap();
        for i in 0..h.len() {
            let x = h.bin_center(i);
            let value = floor + amplitude * (-x * x / (2.0 * sigma_ps * sigma_ps)).exp();
            for _ in 0..value.round() as u64 {
                h.record(x as i64);
            }
        }
        h
    }

    #[test]
    fn gaussian_fwhm_recovered() {
        // sigma 59.5 ps -> FWHM 2.355 * 59.5 = 140.1 ps
        let h = gaussian_hist(59.5, 4000.0, 0.0);
        let fwhm = peak_fwhm(&h, &[0]).unwrap();
        assert!((fwhm - 140.1).abs() <= 16.0, "fwhm {fwhm}");
    }

    #[test]
    fn delta_peak_is_at_most_one_bin() {
        let mut h = Histogram::symmetric(4096, 16).unwrap();
        for _ in 0..1000 {
            h.record(3);
        }
        let fwhm = peak_fwhm(&h, &[0]).unwrap();
        assert!(fwhm <= 16.0, "fwhm {fwhm}");
    }

    #[test]
    fn flat_histogram_has_no_peak() {
        let mut h = Histogram::symmetric(4096, 16).unwrap();
        for i in 0..h.len() {
            let x = h.bin_center(i) as i64;
            for _ in 0..50 {
                h.record(x);
            }
        }
        assert!(matches!(
            coincidence_stats(&h, 64, 10.0, &[0]),
            Err(AnalyzerError::NoPeak { .. })
        ));
    }

    #[test]
    fn car_of_peak_over_floor() {
        // uniform floor of 10/bin plus a 4000-count spike in one bin
        let mut h = Histogram::symmetric(4096, 16).unwrap();
        for i in 0..h.len() {
            let x = h.bin_center(i) as i64;
            for _ in 0..10 {
                h.record(x);
            }
        }
        for _ in 0..4000 {
            h.record(3);
        }
        let stats = coincidence_stats(&h, 64, 100.0, &[0]).unwrap();
        // window holds 4 bins: accidental = 40, peak = 4000 + 40
        assert!((stats.car - 101.0).abs() < 2.0, "car {}", stats.car);
        assert!(stats.car_err > 0.0 && stats.car_err < 10.0);
        assert!((stats.ccr_hz - stats.peak_counts as f64 / 100.0).abs() < 1e-9);
    }

    #[test]
    fn accidental_only_car_is_near_one() {
        // flat floor, no peak: coincidence_stats refuses, windowed_car ~ 1
        let mut h = Histogram::symmetric(4096, 16).unwrap();
        for i in 0..h.len() {
            let x = h.bin_center(i) as i64;
            for _ in 0..200 {
                h.record(x);
            }
        }
        assert!(matches!(
            coincidence_stats(&h, 64, 1.0, &[0]),
            Err(AnalyzerError::NoPeak { .. })
        ));
        let (car, err) = windowed_car(&h, 0, 64, &[0]);
        assert!((car - 1.0).abs() < 3.0 * err, "car {car} +- {err}");
    }
}
