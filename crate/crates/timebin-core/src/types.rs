//! Labels for the 2x4 AMZI output ports, detection time slots, and the
//! interferometer phase settings.

use std::fmt;

/// Output port of a 2x4 asymmetric Mach-Zehnder interferometer.
///
/// `Z0`/`Z1` are the time-resolving ports (short arm only / long arm only),
/// `X0`/`X1` are the interferometric ports where the two arms recombine on a
/// 50/50 coupler. Idler-side ports are conventionally written Z'0, X'0, X'1,
/// Z'1 in reports but share this enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PortLabel {
    Z0,
    X0,
    X1,
    Z1,
}

impl PortLabel {
    /// All four ports in fixed order (Z0, X0, X1, Z1).
    pub const ALL: [PortLabel; 4] = [PortLabel::Z0, PortLabel::X0, PortLabel::X1, PortLabel::Z1];

    /// True for the interferometric (X-basis) ports.
    pub fn is_x(self) -> bool {
        matches!(self, PortLabel::X0 | PortLabel::X1)
    }

    /// True for the time-resolving (Z-basis) ports.
    pub fn is_z(self) -> bool {
        !self.is_x()
    }

    /// Index in 0..4, matching the order of [`PortLabel::ALL`].
    pub fn index(self) -> usize {
        match self {
            PortLabel::Z0 => 0,
            PortLabel::X0 => 1,
            PortLabel::X1 => 2,
            PortLabel::Z1 => 3,
        }
    }
}

impl fmt::Display for PortLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PortLabel::Z0 => "Z0",
            PortLabel::X0 => "X0",
            PortLabel::X1 => "X1",
            PortLabel::Z1 => "Z1",
        };
        f.write_str(s)
    }
}

/// Detection time slot. Slot 0, 1, 2 correspond to the times t-tau, t and
/// t+tau. Emission happens in bins {0, 1}; the AMZI long arm maps an emission
/// bin b to slot b+1, so slot 2 is reachable only through the long arm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SlotIndex(pub u8);

impl SlotIndex {
    pub const EARLY: SlotIndex = SlotIndex(0);
    pub const CENTRAL: SlotIndex = SlotIndex(1);
    pub const LATE: SlotIndex = SlotIndex(2);

    /// All three detection slots.
    pub const ALL: [SlotIndex; 3] = [SlotIndex(0), SlotIndex(1), SlotIndex(2)];

    /// Slot reached from this emission bin through the long (delayed) arm.
    pub fn delayed(self) -> SlotIndex {
        SlotIndex(self.0 + 1)
    }
}

impl fmt::Display for SlotIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Phase settings of the two receivers and the pump.
///
/// `theta1`/`theta2` are the long-arm phases of the signal and idler AMZIs.
/// `delta_pump` is the pump phase difference theta(t-tau) - theta(t); for a
/// CW pump with coherence time much longer than tau it is a single constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseConfig {
    pub theta1: f64,
    pub theta2: f64,
    pub delta_pump: f64,
}

impl PhaseConfig {
    pub fn new(theta1: f64, theta2: f64, delta_pump: f64) -> Self {
        Self { theta1, theta2, delta_pump }
    }

    /// The phase sum theta1 + theta2 + delta_pump that the two-photon
    /// interference depends on.
    pub fn phase_sum(&self) -> f64 {
        self.theta1 + self.theta2 + self.delta_pump
    }
}

impl Default for PhaseConfig {
    fn default() -> Self {
        Self { theta1: 0.0, theta2: 0.0, delta_pump: 0.0 }
    }
}

/// Key of one joint two-photon outcome: (signal port, signal slot,
/// idler port, idler slot).
pub type JointKey = (PortLabel, SlotIndex, PortLabel, SlotIndex);
