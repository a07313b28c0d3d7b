//! Detection records.

use serde::{Deserialize, Serialize};

/// One detection: channel id plus timestamp on a 1 ps integer grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TimeTag {
    pub channel: u16,
    pub time_ps: u64,
}

/// Why a tag exists; kept alongside tags by the detailed simulation paths so
/// tests can check pairing and slot structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TagOrigin {
    /// Photon from pair `index`; `delayed_arm` marks the long-arm path.
    Pair { index: u64, delayed_arm: bool },
    Dark,
}

/// A tag with its generation metadata (pre-filtering, signed time).
#[derive(Debug, Clone, Copy)]
pub struct DetailedTag {
    pub channel: u16,
    pub time_ps: i64,
    pub origin: TagOrigin,
}

/// Sort tags by (time, channel); the canonical stream order.
pub fn sort_tags(tags: &mut [TimeTag]) {
    tags.sort_unstable_by_key(|t| (t.time_ps, t.channel));
}
