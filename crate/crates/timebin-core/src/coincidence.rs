//! Post-selection and coincidence probabilities.

use std::collections::BTreeMap;

use crate::error::CoreError;
use crate::state::JointState;
use crate::types::{JointKey, PortLabel, SlotIndex};

/// Threshold below which a selected subset counts as empty.
pub const ZERO_MASS_EPS: f64 = 1e-15;

/// Renormalized coincidence probabilities over a selected subset of joint
/// outcomes, together with the probability mass the selection retained.
#[derive(Debug, Clone)]
pub struct CoincidenceTable {
    probabilities: BTreeMap<JointKey, f64>,
    normalization: f64,
}

impl CoincidenceTable {
    /// Renormalized probability of one outcome (zero if absent or excluded).
    pub fn probability(&self, key: JointKey) -> f64 {
        self.probabilities.get(&key).copied().unwrap_or(0.0)
    }

    /// Probability mass of the selected subset before renormalization.
    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    /// Iterate over (key, renormalized probability) in key order.
    pub fn iter(&self) -> impl Iterator<Item = (&JointKey, &f64)> {
        self.probabilities.iter()
    }

    /// Sum of the renormalized probabilities (1 up to rounding).
    pub fn total(&self) -> f64 {
        self.probabilities.values().sum()
    }
}

/// Restrict the state to the outcomes accepted by `predicate` and
/// renormalize.
///
/// Fails with [`CoreError::ZeroMassSelection`] when the retained mass is
/// below [`ZERO_MASS_EPS`].
pub fn post_select<F>(state: &JointState, predicate: F) -> Result<CoincidenceTable, CoreError>
where
    F: Fn(PortLabel, SlotIndex, PortLabel, SlotIndex) -> bool,
{
    let mut selected: BTreeMap<JointKey, f64> = BTreeMap::new();
    let mut mass = 0.0;
    for (key, amp) in state.iter() {
        let (sp, ss, ip, is) = *key;
        if predicate(sp, ss, ip, is) {
            let p = amp.norm_sqr();
            mass += p;
            selected.insert(*key, p);
        }
    }
    if mass < ZERO_MASS_EPS {
        return Err(CoreError::ZeroMassSelection(mass));
    }
    for p in selected.values_mut() {
        *p /= mass;
    }
    Ok(CoincidenceTable { probabilities: selected, normalization: mass })
}

/// Select both photons on X ports in the given slot.
pub fn select_x_ports_at(slot: SlotIndex) -> impl Fn(PortLabel, SlotIndex, PortLabel, SlotIndex) -> bool {
    move |sp, ss, ip, is| sp.is_x() && ip.is_x() && ss == slot && is == slot
}

/// Select both photons on Z ports in the given slot.
pub fn select_z_ports_at(slot: SlotIndex) -> impl Fn(PortLabel, SlotIndex, PortLabel, SlotIndex) -> bool {
    move |sp, ss, ip, is| sp.is_z() && ip.is_z() && ss == slot && is == slot
}

/// Central-slot X-basis coincidence probabilities as a function of the phase
/// sum phi = theta1 + theta2 + delta_pump.
///
/// Among slot-1 X-X' coincidences, each correlated pairing (X0-X'0, X1-X'1)
/// carries probability (1 + cos phi)/4 and each anticorrelated pairing
/// (X0-X'1, X1-X'0) carries (1 - cos phi)/4, so one output pairing sums to
/// 1/2. Returns `(p_correlated, p_anticorrelated)`.
pub fn x_fringe_probability(phi_sum: f64) -> (f64, f64) {
    let c = phi_sum.cos();
    ((1.0 + c) / 4.0, (1.0 - c) / 4.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::build_joint_state;
    use crate::types::PhaseConfig;
    use std::f64::consts::PI;

    const S1: SlotIndex = SlotIndex(1);

    #[test]
    fn zero_phase_sum_gives_correlated_pairs() {
        let state = build_joint_state(PhaseConfig::default());
        let table = post_select(&state, select_x_ports_at(S1)).unwrap();
        let p00 = table.probability((PortLabel::X0, S1, PortLabel::X0, S1));
        let p11 = table.probability((PortLabel::X1, S1, PortLabel::X1, S1));
        let p01 = table.probability((PortLabel::X0, S1, PortLabel::X1, S1));
        let p10 = table.probability((PortLabel::X1, S1, PortLabel::X0, S1));
        assert!((p00 - 0.5).abs() < 1e-12);
        assert!((p11 - 0.5).abs() < 1e-12);
        assert!(p01 < 1e-12 && p10 < 1e-12);
        assert!((table.total() - 1.0).abs() < 1e-12);
        // the central X-X' slice holds 1/16 of the full state
        assert!((table.normalization() - 1.0 / 16.0).abs() < 1e-12);
    }

    #[test]
    fn pi_phase_sum_swaps_pairings() {
        let state = build_joint_state(PhaseConfig::new(PI, 0.0, 0.0));
        let table = post_select(&state, select_x_ports_at(S1)).unwrap();
        assert!((table.probability((PortLabel::X0, S1, PortLabel::X1, S1)) - 0.5).abs() < 1e-12);
        assert!((table.probability((PortLabel::X1, S1, PortLabel::X0, S1)) - 0.5).abs() < 1e-12);
        assert!(table.probability((PortLabel::X0, S1, PortLabel::X0, S1)) < 1e-12);
    }

    #[test]
    fn z_basis_is_slot_correlated() {
        let state = build_joint_state(PhaseConfig::new(0.9, 1.7, 0.3));
        let table = post_select(&state, select_z_ports_at(S1)).unwrap();
        assert!((table.probability((PortLabel::Z0, S1, PortLabel::Z0, S1)) - 0.5).abs() < 1e-12);
        assert!((table.probability((PortLabel::Z1, S1, PortLabel::Z1, S1)) - 0.5).abs() < 1e-12);
        assert!(table.probability((PortLabel::Z0, S1, PortLabel::Z1, S1)) < 1e-12);
        assert!(table.probability((PortLabel::Z1, S1, PortLabel::Z0, S1)) < 1e-12);
    }

    #[test]
    fn empty_selection_is_an_error() {
        let state = build_joint_state(PhaseConfig::default());
        // the signal Z0 port never fires in slot 2
        let err = post_select(&state, |sp, ss, _, _| sp == PortLabel::Z0 && ss == SlotIndex(2));
        assert!(matches!(err, Err(CoreError::ZeroMassSelection(_))));
    }

    #[test]
    fn fringe_probability_reference_points() {
        let (c, a) = x_fringe_probability(0.0);
        assert!((c - 0.5).abs() < 1e-15 && a.abs() < 1e-15);
        let (c, a) = x_fringe_probability(PI / 2.0);
        assert!((c - 0.25).abs() < 1e-15 && (a - 0.25).abs() < 1e-15);
        let (c, a) = x_fringe_probability(PI);
        assert!(c.abs() < 1e-15 && (a - 0.5).abs() < 1e-15);
    }
}
