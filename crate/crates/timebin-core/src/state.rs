//! Joint two-photon state after both AMZIs.
//!
//! The source emits the pair in a balanced superposition of two emission
//! bins separated by tau,
//!
//! ```text
//! (1/sqrt 2) [ e^{i dp} a+(t-tau) b+(t-tau) + a+(t) b+(t) ] |0,0>
//! ```
//!
//! with dp the constant pump phase difference. Each creation operator is
//! expanded through its receiver's AMZI, giving 6 x 6 product terms per
//! emission bin that accumulate (and interfere) in a sparse amplitude table
//! keyed by (signal port, signal slot, idler port, idler slot).

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::amzi::amzi_transform;
use crate::types::{JointKey, PhaseConfig, PortLabel, SlotIndex};

/// Sparse complex amplitude table of the joint post-AMZI state.
#[derive(Debug, Clone)]
pub struct JointState {
    amplitudes: BTreeMap<JointKey, Complex64>,
}

/// Which photon of the pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arm {
    Signal,
    Idler,
}

impl JointState {
    /// Amplitude of one joint outcome (zero if absent).
    pub fn amplitude(&self, key: JointKey) -> Complex64 {
        self.amplitudes.get(&key).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Probability of one joint outcome.
    pub fn probability(&self, key: JointKey) -> f64 {
        self.amplitude(key).norm_sqr()
    }

    /// Iterate over the stored (key, amplitude) entries in key order.
    pub fn iter(&self) -> impl Iterator<Item = (&JointKey, &Complex64)> {
        self.amplitudes.iter()
    }

    /// Number of stored amplitude entries (at most 144).
    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    /// Total probability, 1 for any lossless phase configuration.
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum()
    }

    /// Marginal detection probabilities of one photon, keyed by (port, slot).
    ///
    /// Sums squared joint amplitudes over all outcomes of the other photon.
    /// The X-port marginals carry no phase dependence: singles show no
    /// first-order interference.
    pub fn marginal(&self, arm: Arm) -> BTreeMap<(PortLabel, SlotIndex), f64> {
        let mut out = BTreeMap::new();
        for ((sp, ss, ip, is), amp) in &self.amplitudes {
            let key = match arm {
                Arm::Signal => (*sp, *ss),
                Arm::Idler => (*ip, *is),
            };
            *out.entry(key).or_insert(0.0) += amp.norm_sqr();
        }
        out
    }
}

/// Build the full joint state for the given phase settings.
///
/// The result is unit norm: the AMZI transfer is lossless and the two
/// emission branches end up orthogonal after the transform.
pub fn build_joint_state(phases: PhaseConfig) -> JointState {
    let mut amplitudes: BTreeMap<JointKey, Complex64> = BTreeMap::new();
    let inv_sqrt2 = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    // bin 0 = emission at t - tau (carries the pump phase difference),
    // bin 1 = emission at t (global phase dropped).
    for (bin, pump_phase) in [
        (SlotIndex(0), Complex64::from_polar(1.0, phases.delta_pump)),
        (SlotIndex(1), Complex64::new(1.0, 0.0)),
    ] {
        let signal_terms = amzi_transform(bin, phases.theta1).expect("bin in {0,1}");
        let idler_terms = amzi_transform(bin, phases.theta2).expect("bin in {0,1}");
        let branch = inv_sqrt2 * pump_phase;
        for s in &signal_terms {
            for i in &idler_terms {
                let key = (s.port, s.slot, i.port, i.slot);
                let contribution = branch * s.amplitude * i.amplitude;
                let entry = amplitudes.entry(key).or_insert(Complex64::new(0.0, 0.0));
                *entry += contribution;
            }
        }
    }
    // Drop entries that cancelled exactly; keeps the table at <= 144 keys
    // and makes "no amplitude" queries return 0 either way.
    amplitudes.retain(|_, a| a.norm_sqr() > 0.0);
    JointState { amplitudes }
}
