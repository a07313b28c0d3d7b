//! Z-basis visibility and the visibility -> CHSH S conversion.

use event_sim::TimeTag;

use crate::error::AnalyzerError;
use crate::histogram::count_coincidences;

/// Minimum total coincidences required for a visibility estimate.
pub const MIN_COINCIDENCES: u64 = 100;

/// 2 sqrt 2, the conversion factor from fringe visibility to CHSH S.
pub const S_PER_VISIBILITY: f64 = 2.828_427_124_746_190_3;

/// A visibility estimate with its binomial standard error.
#[derive(Debug, Clone, Copy)]
pub struct Visibility {
    pub value: f64,
    pub std_err: f64,
    /// Slot-aligned matched-port coincidences (the numerator's + term).
    pub matched: u64,
    /// Slot-aligned mismatched-port coincidences.
    pub mismatched: u64,
}

/// Z-basis visibility {(Z0-Z'0) - (Z0-Z'1)} / {(Z0-Z'0) + (Z0-Z'1)} from
/// slot-aligned coincidences (delay 0) in the given window.
///
/// The genuine Z0-Z'1 correlation peak sits at +tau and is excluded by
/// counting at delay 0; what remains there is accidentals and dark counts.
pub fn z_visibility(
    tags: &[TimeTag],
    ch_z0: u16,
    ch_z0_idler: u16,
    ch_z1_idler: u16,
    window_ps: i64,
) -> Result<Visibility, AnalyzerError> {
    let matched = count_coincidences(tags, ch_z0, ch_z0_idler, 0, window_ps);
    let mismatched = count_coincidences(tags, ch_z0, ch_z1_idler, 0, window_ps);
    visibility_from_counts(matched, mismatched)
}

/// Visibility (a - b) / (a + b) with a smoothed binomial standard error.
pub fn visibility_from_counts(a: u64, b: u64) -> Result<Visibility, AnalyzerError> {
    let total = a + b;
    if total < MIN_COINCIDENCES {
        return Err(AnalyzerError::InsufficientCounts {
            total,
            required: MIN_COINCIDENCES,
        });
    }
    let n = total as f64;
    let value = (a as f64 - b as f64) / n;
    // Agresti-style smoothing keeps the error finite when one side is empty
    let p = (a as f64 + 0.5) / (n + 1.0);
    let std_err = 2.0 * (p * (1.0 - p) / n).sqrt();
    Ok(Visibility { value, std_err, matched: a, mismatched: b })
}

/// CHSH S parameter derived from a two-photon fringe visibility.
#[derive(Debug, Clone, Copy)]
pub struct SParameter {
    pub s: f64,
    pub s_err: f64,
    /// True when S > 2 (local realism violated).
    pub violates_bell: bool,
    /// (S - 2) / sigma_S, the significance of the violation.
    pub violation_sigma: f64,
}

/// S = 2 sqrt(2) x visibility; the error scales by the same factor.
///
/// The classical boundary sits at v = 1/sqrt 2 (S = 2); values within a
/// rounding epsilon of the boundary do not count as violations.
pub fn visibility_to_s(visibility: f64, visibility_err: f64) -> SParameter {
    let s = S_PER_VISIBILITY * visibility;
    let s_err = S_PER_VISIBILITY * visibility_err;
    SParameter {
        s,
        s_err,
        violates_bell: s > 2.0 + 1e-9,
        violation_sigma: if s_err > 0.0 { (s - 2.0) / s_err } else { f64::INFINITY },
    }
}
