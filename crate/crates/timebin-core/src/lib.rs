//! Exact complex-amplitude engine for time-bin entangled photon pairs
//! measured behind two 2x4 asymmetric Mach-Zehnder interferometers.
//!
//! The crate models a single photon pair emitted by a CW-pumped source in a
//! balanced superposition of two emission bins separated by the AMZI delay
//! tau. Each photon is expanded through its receiver (time-resolving ports
//! Z0/Z1, interferometric ports X0/X1 across detection slots t-tau, t,
//! t+tau), producing a sparse joint amplitude table that can be
//! post-selected into coincidence probabilities.
//!
//! Everything here is pure and allocation-small: no losses, no detectors,
//! no randomness. Event generation lives downstream.

mod amzi;
mod coincidence;
mod error;
mod pattern;
mod state;
mod types;

pub use amzi::{amzi_transform, long_coefficient, short_coefficient, AmziTerm, X_AMP, Z_AMP};
pub use coincidence::{
    post_select, select_x_ports_at, select_z_ports_at, x_fringe_probability, CoincidenceTable,
    ZERO_MASS_EPS,
};
pub use error::CoreError;
pub use pattern::{detection_pattern, DelayClass, PatternEntry};
pub use state::{build_joint_state, Arm, JointState};
pub use types::{JointKey, PhaseConfig, PortLabel, SlotIndex};
