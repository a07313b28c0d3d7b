//! Single-photon transfer of the 2x4 AMZI.
//!
//! The interferometer is a 50/50 input splitter feeding a short and a long
//! arm (long arm delayed by tau and carrying the phase e^{i theta}), each arm
//! tapped 50/50 into a direct time-resolving port (Z0 from the short arm,
//! Z1 from the long arm) and a common 50/50 recombiner producing the
//! interferometric ports X0/X1. This lossless coupler tree puts amplitude
//! 1/2 on the Z ports and 1/(2 sqrt 2) on each X-port term, with X1 taking
//! the minus sign on the delayed term.

use num_complex::Complex64;

use crate::error::CoreError;
use crate::types::{PortLabel, SlotIndex};

/// 1 / (2 sqrt 2), the X-port amplitude of the coupler tree.
pub const X_AMP: f64 = 0.353_553_390_593_273_73;

/// 1 / 2, the Z-port amplitude of the coupler tree.
pub const Z_AMP: f64 = 0.5;

/// Amplitude for exiting `port` through the short (undelayed) arm.
pub fn short_coefficient(port: PortLabel) -> Complex64 {
    match port {
        PortLabel::Z0 => Complex64::new(Z_AMP, 0.0),
        PortLabel::X0 | PortLabel::X1 => Complex64::new(X_AMP, 0.0),
        PortLabel::Z1 => Complex64::new(0.0, 0.0),
    }
}

/// Amplitude for exiting `port` through the long arm with phase `theta`.
pub fn long_coefficient(port: PortLabel, theta: f64) -> Complex64 {
    let phase = Complex64::from_polar(1.0, theta);
    match port {
        PortLabel::Z0 => Complex64::new(0.0, 0.0),
        PortLabel::X0 => phase * X_AMP,
        PortLabel::X1 => -phase * X_AMP,
        PortLabel::Z1 => phase * Z_AMP,
    }
}

/// One output term of the AMZI acting on a single emission bin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmziTerm {
    pub port: PortLabel,
    pub slot: SlotIndex,
    pub amplitude: Complex64,
}

/// Expand a creation operator at emission bin `input_slot` (0 or 1) into the
/// six output terms of the 2x4 AMZI with long-arm phase `theta`.
///
/// The short arm keeps the photon in slot b, the long arm moves it to slot
/// b+1. Squared magnitudes of the six terms sum to 1.
pub fn amzi_transform(
    input_slot: SlotIndex,
    theta: f64,
) -> Result<[AmziTerm; 6], CoreError> {
    if input_slot.0 > 1 {
        return Err(CoreError::InvalidEmissionBin(input_slot.0));
    }
    let b = input_slot;
    let d = input_slot.delayed();
    Ok([
        AmziTerm { port: PortLabel::Z0, slot: b, amplitude: short_coefficient(PortLabel::Z0) },
        AmziTerm { port: PortLabel::Z1, slot: d, amplitude: long_coefficient(PortLabel::Z1, theta) },
        AmziTerm { port: PortLabel::X0, slot: b, amplitude: short_coefficient(PortLabel::X0) },
        AmziTerm { port: PortLabel::X0, slot: d, amplitude: long_coefficient(PortLabel::X0, theta) },
        AmziTerm { port: PortLabel::X1, slot: b, amplitude: short_coefficient(PortLabel::X1) },
        AmziTerm { port: PortLabel::X1, slot: d, amplitude: long_coefficient(PortLabel::X1, theta) },
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn term(terms: &[AmziTerm; 6], port: PortLabel, slot: u8) -> Complex64 {
        terms
            .iter()
            .find(|t| t.port == port && t.slot == SlotIndex(slot))
            .map(|t| t.amplitude)
            .unwrap_or_else(|| Complex64::new(0.0, 0.0))
    }

    #[test]
    fn bin0_theta0_matches_coupler_tree() {
        let t = amzi_transform(SlotIndex(0), 0.0).unwrap();
        assert_eq!(t.len(), 6);
        assert!((term(&t, PortLabel::Z0, 0).re - 0.5).abs() < 1e-15);
        assert!((term(&t, PortLabel::Z1, 1).re - 0.5).abs() < 1e-15);
        assert!((term(&t, PortLabel::X0, 0).re - X_AMP).abs() < 1e-15);
        assert!((term(&t, PortLabel::X0, 1).re - X_AMP).abs() < 1e-15);
        assert!((term(&t, PortLabel::X1, 0).re - X_AMP).abs() < 1e-15);
        assert!((term(&t, PortLabel::X1, 1).re + X_AMP).abs() < 1e-15);
    }

    #[test]
    fn bin0_theta_pi_flips_delayed_signs() {
        let t = amzi_transform(SlotIndex(0), PI).unwrap();
        // e^{i pi} = -1 on every long-arm term, magnitudes unchanged.
        assert!((term(&t, PortLabel::Z1, 1).re + 0.5).abs() < 1e-12);
        assert!((term(&t, PortLabel::X0, 1).re + X_AMP).abs() < 1e-12);
        assert!((term(&t, PortLabel::X1, 1).re - X_AMP).abs() < 1e-12);
        // short-arm terms untouched
        assert!((term(&t, PortLabel::Z0, 0).re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn bin1_occupies_slots_one_and_two() {
        let t = amzi_transform(SlotIndex(1), 0.3).unwrap();
        for tm in &t {
            assert!(tm.slot == SlotIndex(1) || tm.slot == SlotIndex(2));
        }
        assert!((term(&t, PortLabel::Z0, 1).re - 0.5).abs() < 1e-15);
        assert!(term(&t, PortLabel::Z1, 2).norm() > 0.49);
    }

    #[test]
    fn transform_is_normalized() {
        for theta in [0.0, 0.7, PI, 4.2] {
            let t = amzi_transform(SlotIndex(0), theta).unwrap();
            let norm: f64 = t.iter().map(|tm| tm.amplitude.norm_sqr()).sum();
            // 1/4 + 1/4 + 4 * 1/8 = 1
            assert!((norm - 1.0).abs() < 1e-12, "norm {norm} at theta {theta}");
        }
    }

    #[test]
    fn rejects_slot_two_input() {
        assert_eq!(
            amzi_transform(SlotIndex(2), 0.0),
            Err(CoreError::InvalidEmissionBin(2))
        );
    }
}
