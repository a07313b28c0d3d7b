use std::time::Instant;

use event_sim::{simulate, ExperimentConfig};

fn main() {
    let mut config = ExperimentConfig::with_defaults(200.0, 7);
    config.source.pump_power_mw = 0.46;
    let t0 = Instant::now();
    let out = simulate(&config).unwrap();
    let dt = t0.elapsed().as_secs_f64();
    println!(
        "tags: {}, wall: {:.2} s, rate: {:.1} M tags/s, expected event rate {:.1} Hz",
        out.summary.total_tags,
        dt,
        out.summary.total_tags as f64 / dt / 1e6,
        out.summary.detected_event_rate_hz,
    );
}
