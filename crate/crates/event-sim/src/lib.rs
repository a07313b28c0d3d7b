//! Monte Carlo generator of time-tagged detection events for a CW-pumped
//! photon-pair source measured either directly (two channels) or through
//! two 2x4 AMZI receivers (eight channels).
//!
//! All randomness flows from a single 64-bit seed through per-chunk ChaCha
//! streams: identical (config, seed) runs produce byte-identical tag
//! streams, independent of thread count.

mod config;
mod error;
mod io;
mod sim;
mod tags;

pub use config::{ChannelSpec, DirectConfig, ExperimentConfig, Side};
pub use error::SimError;
pub use io::{
    read_tags_auto, read_tags_binary, read_tags_jsonl, render_summary, write_tags_binary,
    write_tags_jsonl, TTAG_MAGIC, TTAG_RECORD_BYTES,
};
pub use sim::{
    simulate, simulate_detailed, simulate_direct, simulate_direct_detailed, RunSummary, SimOutput,
};
pub use tags::{sort_tags, DetailedTag, TagOrigin, TimeTag};
