//! The streaming correlator against an O(n^2) brute-force pair enumeration,
//! chunk-merge associativity, and the accidental-floor oracle.

use event_sim::TimeTag;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use tia_analyzer::{cross_correlate, cross_correlate_chunked, windowed_car, Histogram};

/// Brute force: enumerate all (a, b) pairs and bin tB - tA directly.
fn brute_force(
    tags: &[TimeTag],
    ch_a: u16,
    ch_b: u16,
    bin_ps: i64,
    range_ps: i64,
) -> Vec<u64> {
    let a_times: Vec<i64> =
        tags.iter().filter(|t| t.channel == ch_a).map(|t| t.time_ps as i64).collect();
    let b_times: Vec<i64> =
        tags.iter().filter(|t| t.channel == ch_b).map(|t| t.time_ps as i64).collect();
    let n_bins = (2 * range_ps / bin_ps) as usize;
    let mut counts = vec![0u64; n_bins];
    for &ta in &a_times {
        for &tb in &b_times {
            let delta = tb - ta;
            if delta >= -range_ps && delta < range_ps {
                counts[((delta + range_ps) / bin_ps) as usize] += 1;
            }
        }
    }
    counts
}

fn random_stream(seed: u64, n: usize, span_ps: u64) -> Vec<TimeTag> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut tags: Vec<TimeTag> = (0..n)
        .map(|_| TimeTag {
            channel: *[0u16, 1, 5].iter().nth(rng.gen_range(0..3)).unwrap(),
            time_ps: rng.gen_range(0..span_ps),
        })
        .collect();
    tags.sort_unstable_by_key(|t| (t.time_ps, t.channel));
    tags
}

#[test]
fn streaming_equals_brute_force_on_twenty_seeds() {
    for seed in 0..20u64 {
        // bursty streams keep plenty of pairs inside the range
        let tags = random_stream(seed, 10_000, 40_000_000);
        let hist = cross_correlate(&tags, 0, 1, 16, 4096).unwrap();
        let expected = brute_force(&tags, 0, 1, 16, 4096);
        assert_eq!(hist.counts(), &expected[..], "seed {seed}");
        assert!(hist.total() > 0, "seed {seed} produced an empty histogram");
    }
}

#[test]
fn chunked_merge_is_associative() {
    for seed in [3u64, 11, 42] {
        let tags = random_stream(seed, 20_000, 80_000_000);
        let whole = cross_correlate(&tags, 0, 1, 16, 4096).unwrap();
        for chunk_len in [1usize, 7, 97, 1000, 19_999, 50_000] {
            let chunked =
                cross_correlate_chunked(&tags, 0, 1, 16, 4096, chunk_len).unwrap();
            assert_eq!(whole, chunked, "seed {seed} chunk_len {chunk_len}");
        }
    }
}

#[test]
fn independent_poisson_floor_matches_rate_product() {
    // two independent 100 kHz channels for 10 s: per-bin floor =
    // rateA * rateB * bin * duration
    let mut rng = StdRng::seed_from_u64(99);
    let duration_ps: u64 = 10_000_000_000_000;
    let mut tags = Vec::new();
    for ch in [0u16, 1] {
        for _ in 0..1_000_000 {
            tags.push(TimeTag { channel: ch, time_ps: rng.gen_range(0..duration_ps) });
        }
    }
    tags.sort_unstable_by_key(|t| (t.time_ps, t.channel));
    let hist = cross_correlate(&tags, 0, 1, 16, 4096).unwrap();

    let expected_per_bin = 1.0e5 * 1.0e5 * 16e-12 * 10.0;
    let n_bins = hist.len() as f64;
    let mean = hist.total() as f64 / n_bins;
    let sigma = (expected_per_bin / n_bins).sqrt();
    assert!(
        (mean - expected_per_bin).abs() < 3.0 * sigma,
        "floor {mean} vs {expected_per_bin}"
    );
    // and the flat-floor CAR is 1 within error
    let (car, err) = windowed_car(&hist, 0, 64, &[0]);
    assert!((car - 1.0).abs() < 3.0 * err, "car {car} +- {err}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    /// Streaming counts equal brute force for arbitrary small streams.
    #[test]
    fn matches_brute_force(seed in 0u64..1000, n in 2usize..400) {
        let tags = random_stream(seed, n, 2_000_000);
        if tags.iter().any(|t| t.channel == 0) && tags.iter().any(|t| t.channel == 1) {
            let hist = cross_correlate(&tags, 0, 1, 64, 8192).unwrap();
            let expected = brute_force(&tags, 0, 1, 64, 8192);
            prop_assert_eq!(hist.counts(), &expected[..]);
        }
    }

    /// Splitting a stream anywhere and merging partial histograms changes
    /// nothing.
    #[test]
    fn chunking_invariant(seed in 0u64..500, chunk in 1usize..5000) {
        let tags = random_stream(seed, 3000, 10_000_000);
        if tags.iter().any(|t| t.channel == 0) && tags.iter().any(|t| t.channel == 1) {
            let whole = cross_correlate(&tags, 0, 1, 32, 2048).unwrap();
            let chunked = cross_correlate_chunked(&tags, 0, 1, 32, 2048, chunk).unwrap();
            prop_assert_eq!(whole, chunked);
        }
    }
}

#[test]
fn histogram_merge_elementwise() {
    let mut a = Histogram::symmetric(128, 16).unwrap();
    let mut b = Histogram::symmetric(128, 16).unwrap();
    a.record(0);
    a.record(-100);
    b.record(0);
    b.record(100);
    a.merge(&b).unwrap();
    assert_eq!(a.total(), 4);
    let incompatible = Histogram::symmetric(256, 16).unwrap();
    assert!(a.merge(&incompatible).is_err());
}
