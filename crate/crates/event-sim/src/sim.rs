//! Seeded Monte Carlo generation of detection tag streams.
//!
//! Pairs are emitted by a stationary Poisson process at the SFWM rate
//! gamma P^2. Each pair draws a detection pattern (which output ports fire
//! and with what relative delay) from the amplitude engine, an idler-signal
//! emission skew from a symmetric double exponential with the cavity
//! lifetime as scale, per-channel survival by 10^(-loss/10), Gaussian
//! detector jitter and a constant channel delay. Independent Poisson dark
//! counts are superposed per channel.
//!
//! Losses are applied by thinning: the Poisson process is generated at the
//! already-thinned rate of emissions that leave at least one tag, and each
//! event samples from the detection-outcome distribution (both photons /
//! signal only / idler only x pattern). This is distribution-exact and keeps
//! desk-scale runs cheap at 30+ dB of loss.
//!
//! Generation is partitioned into 1 s chunks; chunk k draws from an
//! independent, seed-derived RNG stream, so chunks may run in parallel and
//! the merged, (time, channel)-sorted stream is byte-identical for a given
//! (config, seed) regardless of thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Poisson, StandardNormal};
use rayon::prelude::*;

use ring_model::pair_generation_rate;
use timebin_core::{detection_pattern, DelayClass};

use crate::config::{ChannelSpec, DirectConfig, ExperimentConfig, Side};
use crate::error::SimError;
use crate::tags::{DetailedTag, TagOrigin, TimeTag};

/// Chunk length for parallel generation, 1 s in ps.
const CHUNK_PS: i64 = 1_000_000_000_000;

/// One atom of the detected-outcome distribution: which channels fire and
/// how the pattern is placed in time.
#[derive(Debug, Clone, Copy)]
struct Outcome {
    /// Cumulative probability mass up to and including this atom.
    cum: f64,
    signal: Option<u8>,
    idler: Option<u8>,
    class: DelayClass,
    /// Probability that a Zero-class pattern sits on the short arms.
    short_weight: f64,
}

/// Receives generated tags; lets the hot path skip origin metadata.
trait TagSink: Default + Send {
    fn push(&mut self, channel: u16, time_ps: i64, origin: TagOrigin);
    fn merge(self, other: Self) -> Self;
    fn reserve(&mut self, extra: usize);
    /// Sort the tags generated inside one chunk. Chunks barely overlap in
    /// time, so the final pass usually finds the concatenation sorted.
    fn sort_local(&mut self);
}

#[derive(Default)]
struct PlainSink(Vec<TimeTag>);

impl TagSink for PlainSink {
    #[inline]
    fn push(&mut self, channel: u16, time_ps: i64, _origin: TagOrigin) {
        if time_ps >= 0 {
            self.0.push(TimeTag { channel, time_ps: time_ps as u64 });
        }
    }
    fn merge(mut self, mut other: Self) -> Self {
        self.0.append(&mut other.0);
        self
    }
    fn reserve(&mut self, extra: usize) {
        self.0.reserve(extra);
    }
    fn sort_local(&mut self) {
        self.0.sort_unstable_by_key(|t| (t.time_ps, t.channel));
    }
}

#[derive(Default)]
struct DetailSink(Vec<DetailedTag>);

impl TagSink for DetailSink {
    #[inline]
    fn push(&mut self, channel: u16, time_ps: i64, origin: TagOrigin) {
        if time_ps >= 0 {
            self.0.push(DetailedTag { channel, time_ps, origin });
        }
    }
    fn merge(mut self, mut other: Self) -> Self {
        self.0.append(&mut other.0);
        self
    }
    fn reserve(&mut self, extra: usize) {
        self.0.reserve(extra);
    }
    fn sort_local(&mut self) {
        self.0.sort_unstable_by_key(|t| (t.time_ps, t.channel));
    }
}

/// Sort by (time, channel) unless the slice already is (chunks rarely
/// interleave, so this is normally a single linear scan).
fn ensure_sorted<T, K: Ord + Copy>(tags: &mut [T], key: impl Fn(&T) -> K) {
    if tags.windows(2).all(|w| key(&w[0]) <= key(&w[1])) {
        return;
    }
    tags.sort_by_key(key);
}

/// Everything the per-chunk generator needs, resolved up front.
struct Generator {
    channels: Vec<ChannelSpec>,
    outcomes: Vec<Outcome>,
    /// Probability that an emitted pair leaves at least one tag.
    detected_mass: f64,
    pair_rate_hz: f64,
    skew_scale_ps: f64,
    tau_ps: f64,
    duration_s: f64,
    seed: u64,
}

/// Per-run bookkeeping returned next to the tag stream.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub seed: u64,
    pub duration_s: f64,
    /// Intrinsic pair rate gamma P^2.
    pub pair_rate_hz: f64,
    /// Rate of emissions that leave at least one tag.
    pub detected_event_rate_hz: f64,
    pub total_tags: u64,
    /// (channel id, observed tag count).
    pub channel_counts: Vec<(u16, u64)>,
    /// (channel id, analytic expected tag rate incl. dark counts).
    pub expected_singles_hz: Vec<(u16, f64)>,
}

/// Tag stream plus run summary.
#[derive(Debug, Clone)]
pub struct SimOutput {
    pub tags: Vec<TimeTag>,
    pub summary: RunSummary,
}

/// Simulate the full entanglement setup (source + both AMZIs + 8 channels).
pub fn simulate(config: &ExperimentConfig) -> Result<SimOutput, SimError> {
    config.validate()?;
    let gen = amzi_generator(config);
    Ok(gen.output())
}

/// As [`simulate`] but keeping per-tag origin metadata; same tag stream.
pub fn simulate_detailed(config: &ExperimentConfig) -> Result<Vec<DetailedTag>, SimError> {
    config.validate()?;
    Ok(amzi_generator(config).run_detailed())
}

/// Simulate the direct two-channel coincidence setup (no AMZIs).
pub fn simulate_direct(config: &DirectConfig) -> Result<SimOutput, SimError> {
    config.validate()?;
    let gen = direct_generator(config);
    Ok(gen.output())
}

/// As [`simulate_direct`] with per-tag origin metadata.
pub fn simulate_direct_detailed(config: &DirectConfig) -> Result<Vec<DetailedTag>, SimError> {
    config.validate()?;
    Ok(direct_generator(config).run_detailed())
}

fn amzi_generator(config: &ExperimentConfig) -> Generator {
    let pattern = detection_pattern(config.phases);
    let mut outcomes = Vec::with_capacity(pattern.len() * 3);
    let mut cum = 0.0;
    for e in &pattern {
        let s_idx = ExperimentConfig::channel_index(Side::Signal, e.signal_port) as u8;
        let i_idx = ExperimentConfig::channel_index(Side::Idler, e.idler_port) as u8;
        let eta_s = config.channels[s_idx as usize].survival(config.amzi_insertion_db);
        let eta_i = config.channels[i_idx as usize].survival(config.amzi_insertion_db);
        let splits = [
            (Some(s_idx), Some(i_idx), e.probability * eta_s * eta_i),
            (Some(s_idx), None, e.probability * eta_s * (1.0 - eta_i)),
            (None, Some(i_idx), e.probability * (1.0 - eta_s) * eta_i),
        ];
        for (signal, idler, p) in splits {
            if p > 0.0 {
                cum += p;
                outcomes.push(Outcome {
                    cum,
                    signal,
                    idler,
                    class: e.class,
                    short_weight: e.short_short_weight,
                });
            }
        }
    }
    Generator {
        channels: config.channels.to_vec(),
        outcomes,
        detected_mass: cum,
        pair_rate_hz: pair_generation_rate(&config.source),
        skew_scale_ps: config.source.pair_correlation_time_ps,
        tau_ps: config.amzi_delay_ps as f64,
        duration_s: config.duration_s,
        seed: config.seed,
    }
}

fn direct_generator(config: &DirectConfig) -> Generator {
    let eta_s = config.signal.survival(0.0);
    let eta_i = config.idler.survival(0.0);
    let mut outcomes = Vec::new();
    let mut cum = 0.0;
    for (signal, idler, p) in [
        (Some(0), Some(1), eta_s * eta_i),
        (Some(0), None, eta_s * (1.0 - eta_i)),
        (None, Some(1), (1.0 - eta_s) * eta_i),
    ] {
        if p > 0.0 {
            cum += p;
            outcomes.push(Outcome { cum, signal, idler, class: DelayClass::Zero, short_weight: 1.0 });
        }
    }
    Generator {
        channels: vec![config.signal, config.idler],
        outcomes,
        detected_mass: cum,
        pair_rate_hz: pair_generation_rate(&config.source),
        skew_scale_ps: config.source.pair_correlation_time_ps,
        tau_ps: 0.0,
        duration_s: config.duration_s,
        seed: config.seed,
    }
}

impl Generator {
    fn output(&self) -> SimOutput {
        let mut sink: PlainSink = self.run();
        ensure_sorted(&mut sink.0, |t| (t.time_ps, t.channel));
        let mut tags = sink.0;
        self.apply_dead_time(&mut tags, |t| (t.channel, t.time_ps as i64));
        let summary = self.summary(&tags);
        SimOutput { tags, summary }
    }

    fn run_detailed(&self) -> Vec<DetailedTag> {
        let mut sink: DetailSink = self.run();
        ensure_sorted(&mut sink.0, |t| (t.time_ps, t.channel));
        let mut tags = sink.0;
        self.apply_dead_time(&mut tags, |t| (t.channel, t.time_ps));
        tags
    }

    fn run<S: TagSink>(&self) -> S {
        let duration_ps = (self.duration_s * 1e12).round() as i64;
        let n_chunks = ((duration_ps + CHUNK_PS - 1) / CHUNK_PS).max(1);
        (0..n_chunks)
            .into_par_iter()
            .map(|k| {
                let mut sink = S::default();
                self.chunk(k, duration_ps, &mut sink);
                sink.sort_local();
                sink
            })
            .reduce(S::default, |a, b| a.merge(b))
    }

    fn chunk<S: TagSink>(&self, index: i64, duration_ps: i64, sink: &mut S) {
        let base = index * CHUNK_PS;
        let len_ps = (duration_ps - base).min(CHUNK_PS);
        if len_ps <= 0 {
            return;
        }
        let len_s = len_ps as f64 * 1e-12;
        let len_f = len_ps as f64;

        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index as u64 + 1);

        let event_rate = self.pair_rate_hz * self.detected_mass;
        let n_events = draw_poisson(&mut rng, event_rate * len_s);
        let dark_expect: f64 = self.channels.iter().map(|c| c.dark_rate_hz * len_s).sum();
        sink.reserve((n_events as f64 * 1.2 + dark_expect * 1.2) as usize + 32);

        for k in 0..n_events {
            let emission = rng.gen::<f64>() * len_f;
            let u = rng.gen::<f64>() * self.detected_mass;
            let at = self.outcomes.partition_point(|o| o.cum <= u);
            let outcome = &self.outcomes[at.min(self.outcomes.len() - 1)];

            // long-arm placement per indistinguishability class
            let (signal_long, idler_long) = match outcome.class {
                DelayClass::Zero => {
                    let short = outcome.short_weight >= 1.0
                        || rng.gen::<f64>() < outcome.short_weight;
                    (!short, !short)
                }
                DelayClass::PlusTau => (false, true),
                DelayClass::MinusTau => (true, false),
            };

            let pair_index = ((index as u64) << 32) | k;
            if let Some(s) = outcome.signal {
                let ch = &self.channels[s as usize];
                let t = emission
                    + if signal_long { self.tau_ps } else { 0.0 }
                    + ch.delay_offset_ps
                    + jitter(&mut rng, ch.jitter_sigma_ps());
                sink.push(
                    ch.channel_id,
                    base + t.round() as i64,
                    TagOrigin::Pair { index: pair_index, delayed_arm: signal_long },
                );
            }
            if let Some(i) = outcome.idler {
                let ch = &self.channels[i as usize];
                let skew = laplace(&mut rng, self.skew_scale_ps);
                let t = emission
                    + skew
                    + if idler_long { self.tau_ps } else { 0.0 }
                    + ch.delay_offset_ps
                    + jitter(&mut rng, ch.jitter_sigma_ps());
                sink.push(
                    ch.channel_id,
                    base + t.round() as i64,
                    TagOrigin::Pair { index: pair_index, delayed_arm: idler_long },
                );
            }
        }

        // dark counts, uniform over the chunk
        for ch in &self.channels {
            let n_dark = draw_poisson(&mut rng, ch.dark_rate_hz * len_s);
            for _ in 0..n_dark {
                let t = rng.gen::<f64>() * len_f;
                sink.push(ch.channel_id, base + t.round() as i64, TagOrigin::Dark);
            }
        }
    }

    /// Drop tags within a channel's dead time of the previously accepted tag.
    fn apply_dead_time<T>(&self, tags: &mut Vec<T>, key: impl Fn(&T) -> (u16, i64)) {
        if self.channels.iter().all(|c| c.dead_time_ps == 0) {
            return;
        }
        let dead: std::collections::BTreeMap<u16, i64> = self
            .channels
            .iter()
            .filter(|c| c.dead_time_ps > 0)
            .map(|c| (c.channel_id, c.dead_time_ps as i64))
            .collect();
        let mut last: std::collections::BTreeMap<u16, i64> = std::collections::BTreeMap::new();
        tags.retain(|t| {
            let (ch, time) = key(t);
            let Some(&dt) = dead.get(&ch) else { return true };
            match last.get(&ch) {
                Some(&prev) if (time - prev) < dt => false,
                _ => {
                    last.insert(ch, time);
                    true
                }
            }
        });
    }

    fn summary(&self, tags: &[TimeTag]) -> RunSummary {
        let mut counts: std::collections::BTreeMap<u16, u64> =
            self.channels.iter().map(|c| (c.channel_id, 0)).collect();
        for t in tags {
            *counts.entry(t.channel).or_insert(0) += 1;
        }
        let mut rates: Vec<f64> = vec![0.0; self.channels.len()];
        let mut prev = 0.0;
        for o in &self.outcomes {
            let p = o.cum - prev;
            prev = o.cum;
            if let Some(s) = o.signal {
                rates[s as usize] += p * self.pair_rate_hz;
            }
            if let Some(i) = o.idler {
                rates[i as usize] += p * self.pair_rate_hz;
            }
        }
        let expected_singles_hz = self
            .channels
            .iter()
            .zip(rates)
            .map(|(ch, r)| (ch.channel_id, r + ch.dark_rate_hz))
            .collect();
        RunSummary {
            seed: self.seed,
            duration_s: self.duration_s,
            pair_rate_hz: self.pair_rate_hz,
            detected_event_rate_hz: self.pair_rate_hz * self.detected_mass,
            total_tags: tags.len() as u64,
            channel_counts: counts.into_iter().collect(),
            expected_singles_hz,
        }
    }
}

fn draw_poisson<R: Rng>(rng: &mut R, lambda: f64) -> u64 {
    if lambda <= 0.0 {
        return 0;
    }
    Poisson::new(lambda).expect("lambda > 0").sample(rng) as u64
}

#[inline]
fn jitter<R: Rng>(rng: &mut R, sigma_ps: f64) -> f64 {
    if sigma_ps <= 0.0 {
        return 0.0;
    }
    let z: f64 = StandardNormal.sample(rng);
    z * sigma_ps
}

/// Symmetric double exponential (Laplace) with the given scale.
#[inline]
fn laplace<R: Rng>(rng: &mut R, scale_ps: f64) -> f64 {
    let magnitude: f64 = Exp1.sample(rng);
    let negative: bool = rng.gen();
    let m = magnitude * scale_ps;
    if negative {
        -m
    } else {
        m
    }
}
