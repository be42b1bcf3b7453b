//! Per-call timings of max-spearman and the CKA measures as sentence length
//! grows at D = 300. Build with `--release`.
//!
//! max-spearman costs `O(nd + d log d)` and grows about linearly in `n`; CKA
//! costs `O(nd^2 + d^2)`, so at `n << d` the `d^2` part keeps it nearly flat.

use std::hint::black_box;
use std::time::Instant;

use corrsim::{Measure, SentenceMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

const D: usize = 300;
const RUNS: usize = 31;

fn sentence(rng: &mut ChaCha8Rng, n: usize) -> SentenceMatrix {
    SentenceMatrix::from_flat(D, (0..n * D).map(|_| rng.sample(StandardNormal)).collect()).expect("n > 0")
}

/// Median over `RUNS` of the mean time of a ~1 ms batch of calls, in microseconds.
fn micros(m: &Measure, n: usize) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
    let (a, b) = (sentence(&mut rng, n), sentence(&mut rng, n));
    let t = Instant::now();
    black_box(m.score(&a, &b).unwrap());
    let batch = (1e-3 / t.elapsed().as_secs_f64().max(1e-7)).ceil().clamp(1.0, 1000.0) as u32;
    let mut times: Vec<f64> = (0..RUNS)
        .map(|_| {
            let t = Instant::now();
            for _ in 0..batch {
                black_box(m.score(&a, &b).unwrap());
            }
            t.elapsed().as_secs_f64() * 1e6 / f64::from(batch)
        })
        .collect();
    times.sort_by(f64::total_cmp);
    times[RUNS / 2]
}

fn main() {
    let sizes = [10, 40, 100, 400];
    print!("{:<14}", "measure");
    for n in sizes {
        print!("{:>12}", format!("n={n}"));
    }
    println!();
    for id in ["max-spearman", "cka-linear", "cka-gaussian", "cka-dcor"] {
        let m = Measure::parse(id).unwrap();
        print!("{id:<14}");
        for n in sizes {
            print!("{:>10.1}us", micros(&m, n));
        }
        println!();
    }
}
