use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let n = 20_000_000u64;

    let t = Instant::now();
    let mut acc = 0.0f64;
    for _ in 0..n {
        acc += rng.gen::<f64>();
    }
    println!("uniform: {:.1} ns ({acc:.1})", t.elapsed().as_nanos() as f64 / n as f64);

    let t = Instant::now();
    let mut acc = 0.0f64;
    for _ in 0..n {
        let z: f64 = StandardNormal.sample(&mut rng);
        acc += z;
    }
    println!("normal: {:.1} ns ({acc:.1})", t.elapsed().as_nanos() as f64 / n as f64);

    let t = Instant::now();
    let mut acc = 0.0f64;
    for _ in 0..n {
        let z: f64 = Exp1.sample(&mut rng);
        acc += z;
    }
    println!("exp: {:.1} ns ({acc:.1})", t.elapsed().as_nanos() as f64 / n as f64);

    // sort cost for 10M synthetic tags
    let m = 10_000_000usize;
    let mut v: Vec<(u64, u16)> = (0..m).map(|_| (rng.gen::<u64>() >> 12, rng.gen::<u16>() & 7)).collect();
    let t = Instant::now();
    v.sort_unstable();
    println!("sort10M: {:.2} s", t.elapsed().as_secs_f64());
}
