//! Tag stream serialization.
//!
//! Binary format `TTAG0001`: a 16-byte header (8-byte magic `TTAG0001`,
//! 8-byte little-endian record count) followed by 10-byte records of 2-byte
//! unsigned channel id and 8-byte unsigned picosecond timestamp, both
//! little endian. The JSONL form carries one `{"channel":c,"time_ps":t}`
//! object per line.

use std::io::{BufRead, Read, Write};

use crate::error::SimError;
use crate::sim::RunSummary;
use crate::tags::TimeTag;

/// Magic bytes opening a binary tag file.
pub const TTAG_MAGIC: &[u8; 8] = b"TTAG0001";

/// Bytes per record: u16 channel + u64 time.
pub const TTAG_RECORD_BYTES: usize = 10;

/// Write the binary header and records.
pub fn write_tags_binary<W: Write>(mut w: W, tags: &[TimeTag]) -> Result<(), SimError> {
    w.write_all(TTAG_MAGIC)?;
    w.write_all(&(tags.len() as u64).to_le_bytes())?;
    let mut record = [0u8; TTAG_RECORD_BYTES];
    for t in tags {
        record[..2].copy_from_slice(&t.channel.to_le_bytes());
        record[2..].copy_from_slice(&t.time_ps.to_le_bytes());
        w.write_all(&record)?;
    }
    Ok(())
}

/// Read a binary tag file, validating magic and record count.
pub fn read_tags_binary<R: Read>(mut r: R) -> Result<Vec<TimeTag>, SimError> {
    let mut header = [0u8; 16];
    r.read_exact(&mut header)
        .map_err(|_| SimError::Format("file shorter than the 16-byte header".into()))?;
    if &header[..8] != TTAG_MAGIC {
        return Err(SimError::Format(format!(
            "bad magic {:?}, expected {:?}",
            &header[..8],
            TTAG_MAGIC
        )));
    }
    let count = u64::from_le_bytes(header[8..].try_into().unwrap());
    let mut body = Vec::new();
    r.read_to_end(&mut body)?;
    if body.len() != count as usize * TTAG_RECORD_BYTES {
        return Err(SimError::Format(format!(
            "expected {} records ({} bytes), found {} bytes",
            count,
            count as usize * TTAG_RECORD_BYTES,
            body.len()
        )));
    }
    let mut tags = Vec::with_capacity(count as usize);
    for chunk in body.chunks_exact(TTAG_RECORD_BYTES) {
        tags.push(TimeTag {
            channel: u16::from_le_bytes(chunk[..2].try_into().unwrap()),
            time_ps: u64::from_le_bytes(chunk[2..].try_into().unwrap()),
        });
    }
    Ok(tags)
}

/// Write one JSON object per tag.
pub fn write_tags_jsonl<W: Write>(mut w: W, tags: &[TimeTag]) -> Result<(), SimError> {
    for t in tags {
        serde_json::to_writer(&mut w, t).map_err(|e| SimError::Format(e.to_string()))?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

/// Read a JSONL tag stream.
pub fn read_tags_jsonl<R: BufRead>(r: R) -> Result<Vec<TimeTag>, SimError> {
    let mut tags = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let tag: TimeTag =
            serde_json::from_str(&line).map_err(|source| SimError::Json { line: i + 1, source })?;
        tags.push(tag);
    }
    Ok(tags)
}

/// Read tags from a path, picking the format from the `TTAG0001` magic.
pub fn read_tags_auto(path: &std::path::Path) -> Result<Vec<TimeTag>, SimError> {
    let bytes = std::fs::read(path)?;
    if bytes.len() >= 8 && &bytes[..8] == TTAG_MAGIC {
        read_tags_binary(&bytes[..])
    } else {
        read_tags_jsonl(&bytes[..])
    }
}

/// Render the run summary as stable `key = value` text.
pub fn render_summary(summary: &RunSummary) -> String {
    let mut out = String::new();
    out.push_str(&format!("seed = {}\n", summary.seed));
    out.push_str(&format!("duration_s = {:.6}\n", summary.duration_s));
    out.push_str(&format!("pair_rate_hz = {:.6}\n", summary.pair_rate_hz));
    out.push_str(&format!(
        "detected_event_rate_hz = {:.6}\n",
        summary.detected_event_rate_hz
    ));
    out.push_str(&format!("total_tags = {}\n", summary.total_tags));
    for (ch, count) in &summary.channel_counts {
        out.push_str(&format!("channel_{ch}_count = {count}\n"));
    }
    for (ch, rate) in &summary.expected_singles_hz {
        out.push_str(&format!("channel_{ch}_expected_hz = {rate:.6}\n"));
    }
    out
}
