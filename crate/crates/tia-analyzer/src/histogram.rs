//! Streaming cross-correlation of tag streams.
//!
//! The correlator walks a single time-sorted stream once, keeping a sliding
//! buffer per channel bounded by the correlation horizon, so memory stays
//! proportional to range x rate no matter how long the stream is. Each
//! (a, b) pair is binned exactly once, when the later of the two tags is
//! reached.

use std::collections::VecDeque;

use event_sim::TimeTag;

use crate::error::AnalyzerError;

/// Delay histogram of tB - tA over a half-open range.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    bin_width_ps: i64,
    lo_ps: i64,
    hi_ps: i64,
    counts: Vec<u64>,
}

impl Histogram {
    /// New empty histogram over [lo, hi) with the given bin width; the range
    /// must divide exactly into bins.
    pub fn new(lo_ps: i64, hi_ps: i64, bin_width_ps: i64) -> Result<Self, AnalyzerError> {
        if bin_width_ps < 1 || hi_ps <= lo_ps || (hi_ps - lo_ps) % bin_width_ps != 0 {
            return Err(AnalyzerError::InvalidBinning { lo: lo_ps, hi: hi_ps, bin: bin_width_ps });
        }
        let n = ((hi_ps - lo_ps) / bin_width_ps) as usize;
        Ok(Self { bin_width_ps, lo_ps, hi_ps, counts: vec![0; n] })
    }

    /// Symmetric histogram over [-range, +range).
    pub fn symmetric(range_ps: i64, bin_width_ps: i64) -> Result<Self, AnalyzerError> {
        Self::new(-range_ps, range_ps, bin_width_ps)
    }

    /// Rebuild from stored bins (range must match the counts length).
    pub fn from_parts(
        lo_ps: i64,
        hi_ps: i64,
        bin_width_ps: i64,
        counts: Vec<u64>,
    ) -> Result<Self, AnalyzerError> {
        let mut h = Self::new(lo_ps, hi_ps, bin_width_ps)?;
        if counts.len() != h.counts.len() {
            return Err(AnalyzerError::InvalidBinning { lo: lo_ps, hi: hi_ps, bin: bin_width_ps });
        }
        h.counts = counts;
        Ok(h)
    }

    pub fn bin_width_ps(&self) -> i64 {
        self.bin_width_ps
    }

    pub fn lo_ps(&self) -> i64 {
        self.lo_ps
    }

    pub fn hi_ps(&self) -> i64 {
        self.hi_ps
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Center (ps) of bin `i`.
    pub fn bin_center(&self, i: usize) -> f64 {
        self.lo_ps as f64 + (i as f64 + 0.5) * self.bin_width_ps as f64
    }

    #[inline]
    pub fn record(&mut self, delta_ps: i64) {
        if delta_ps >= self.lo_ps && delta_ps < self.hi_ps {
            let bin = ((delta_ps - self.lo_ps) / self.bin_width_ps) as usize;
            self.counts[bin] += 1;
        }
    }

    /// Sum counts whose bins lie fully inside [from, to).
    pub fn counts_in(&self, from_ps: i64, to_ps: i64) -> u64 {
        self.counts
            .iter()
            .enumerate()
            .filter(|(i, _)| {
                let b_lo = self.lo_ps + *i as i64 * self.bin_width_ps;
                b_lo >= from_ps && b_lo + self.bin_width_ps <= to_ps
            })
            .map(|(_, c)| c)
            .sum()
    }

    /// Elementwise merge of an identically shaped histogram.
    pub fn merge(&mut self, other: &Histogram) -> Result<(), AnalyzerError> {
        if self.bin_width_ps != other.bin_width_ps
            || self.lo_ps != other.lo_ps
            || self.hi_ps != other.hi_ps
        {
            return Err(AnalyzerError::InvalidBinning {
                lo: other.lo_ps,
                hi: other.hi_ps,
                bin: other.bin_width_ps,
            });
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        Ok(())
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// One-pass streaming correlator between two channels.
///
/// Feed tags in (time, channel) order via [`Correlator::push`]; tags outside
/// the two channels are ignored. [`Correlator::seed`] buffers a tag without
/// counting pairs that end on it, which is how chunked processing carries
/// the overlap across a boundary.
#[derive(Debug, Clone)]
pub struct Correlator {
    ch_a: u16,
    ch_b: u16,
    hist: Histogram,
    horizon: i64,
    buf_a: VecDeque<i64>,
    buf_b: VecDeque<i64>,
    seen_a: u64,
    seen_b: u64,
}

impl Correlator {
    pub fn new(ch_a: u16, ch_b: u16, hist: Histogram) -> Result<Self, AnalyzerError> {
        if ch_a == ch_b {
            return Err(AnalyzerError::SameChannel(ch_a));
        }
        let horizon = hist.lo_ps.abs().max(hist.hi_ps.abs());
        Ok(Self {
            ch_a,
            ch_b,
            hist,
            horizon,
            buf_a: VecDeque::new(),
            buf_b: VecDeque::new(),
            seen_a: 0,
            seen_b: 0,
        })
    }

    /// Buffer `tag` without counting pairs whose later member is `tag`.
    pub fn seed(&mut self, tag: &TimeTag) {
        let t = tag.time_ps as i64;
        if tag.channel == self.ch_a {
            self.prune(t);
            self.buf_a.push_back(t);
        } else if tag.channel == self.ch_b {
            self.prune(t);
            self.buf_b.push_back(t);
        }
    }

    /// Process the next tag of the time-sorted stream.
    pub fn push(&mut self, tag: &TimeTag) {
        let t = tag.time_ps as i64;
        if tag.channel == self.ch_a {
            self.seen_a += 1;
            self.prune(t);
            // delta = tB - tA with tB already buffered (tB <= t)
            for &tb in &self.buf_b {
                self.hist.record(tb - t);
            }
            self.buf_a.push_back(t);
        } else if tag.channel == self.ch_b {
            self.seen_b += 1;
            self.prune(t);
            for &ta in &self.buf_a {
                self.hist.record(t - ta);
            }
            self.buf_b.push_back(t);
        }
    }

    fn prune(&mut self, now_ps: i64) {
        while self.buf_a.front().is_some_and(|&t| now_ps - t > self.horizon) {
            self.buf_a.pop_front();
        }
        while self.buf_b.front().is_some_and(|&t| now_ps - t > self.horizon) {
            self.buf_b.pop_front();
        }
    }

    /// Finish, failing if either channel never appeared.
    pub fn finish(self) -> Result<Histogram, AnalyzerError> {
        if self.seen_a == 0 {
            return Err(AnalyzerError::EmptyChannel(self.ch_a));
        }
        if self.seen_b == 0 {
            return Err(AnalyzerError::EmptyChannel(self.ch_b));
        }
        Ok(self.hist)
    }

    /// Finish without the non-empty check (used by chunk workers, where one
    /// chunk may legitimately miss a channel).
    pub fn finish_partial(self) -> Histogram {
        self.hist
    }
}

/// Histogram of tB - tA over [-range, +range) from a time-sorted stream.
pub fn cross_correlate(
    tags: &[TimeTag],
    ch_a: u16,
    ch_b: u16,
    bin_width_ps: i64,
    range_ps: i64,
) -> Result<Histogram, AnalyzerError> {
    let mut corr = Correlator::new(ch_a, ch_b, Histogram::symmetric(range_ps, bin_width_ps)?)?;
    for tag in tags {
        corr.push(tag);
    }
    corr.finish()
}

/// Chunked variant: processes `chunk_len`-sized slices independently,
/// carrying the horizon tail of the previous chunk so boundary pairs are
/// kept, then merges the partial histograms. Bin-for-bin equal to
/// [`cross_correlate`].
pub fn cross_correlate_chunked(
    tags: &[TimeTag],
    ch_a: u16,
    ch_b: u16,
    bin_width_ps: i64,
    range_ps: i64,
    chunk_len: usize,
) -> Result<Histogram, AnalyzerError> {
    let chunk_len = chunk_len.max(1);
    let mut total = Histogram::symmetric(range_ps, bin_width_ps)?;
    let mut seen_a = 0u64;
    let mut seen_b = 0u64;
    let mut start = 0usize;
    while start < tags.len() || start == 0 {
        let end = (start + chunk_len).min(tags.len());
        let mut corr = Correlator::new(ch_a, ch_b, Histogram::symmetric(range_ps, bin_width_ps)?)?;
        // carry: buffer earlier tags within the horizon of the chunk start
        if start > 0 {
            let t0 = tags[start].time_ps as i64;
            let horizon = range_ps;
            let carry_from = tags[..start]
                .partition_point(|t| (t.time_ps as i64) < t0.saturating_sub(horizon));
            for tag in &tags[carry_from..start] {
                corr.seed(tag);
            }
        }
        for tag in &tags[start..end] {
            if tag.channel == ch_a {
                seen_a += 1;
            } else if tag.channel == ch_b {
                seen_b += 1;
            }
            corr.push(tag);
        }
        total.merge(&corr.finish_partial())?;
        if end == tags.len() {
            break;
        }
        start = end;
    }
    if seen_a == 0 {
        return Err(AnalyzerError::EmptyChannel(ch_a));
    }
    if seen_b == 0 {
        return Err(AnalyzerError::EmptyChannel(ch_b));
    }
    Ok(total)
}

/// Count coincidences with tB - tA in the half-open window
/// [center - w/2, center + w/2) using a two-pointer sweep.
pub fn count_coincidences(
    tags: &[TimeTag],
    ch_a: u16,
    ch_b: u16,
    center_ps: i64,
    window_ps: i64,
) -> u64 {
    let lo = center_ps - window_ps / 2;
    let hi = center_ps + window_ps - window_ps / 2; // handles odd windows
    let a_times: Vec<i64> =
        tags.iter().filter(|t| t.channel == ch_a).map(|t| t.time_ps as i64).collect();
    let b_times: Vec<i64> =
        tags.iter().filter(|t| t.channel == ch_b).map(|t| t.time_ps as i64).collect();
    let mut count = 0u64;
    let mut j_lo = 0usize;
    let mut j_hi = 0usize;
    for &ta in &a_times {
        // b in [ta + lo, ta + hi)
        while j_lo < b_times.len() && b_times[j_lo] < ta + lo {
            j_lo += 1;
        }
        if j_hi < j_lo {
            j_hi = j_lo;
        }
        while j_hi < b_times.len() && b_times[j_hi] < ta + hi {
            j_hi += 1;
        }
        count += (j_hi - j_lo) as u64;
    }
    count
}
