//! Oracle comparisons that report the largest discrepancy seen, shared by the
//! unit-level oracle tests and the acceptance run.

use corrsim::kernel::{self, Bandwidth, GramMatrix, KernelKind};
use corrsim::univariate::{cosine, kendall_tau};
use corrsim::SentenceMatrix;

use super::*;

/// Largest |fast - naive| Kendall tau-b over `cases` samples, half of them
/// heavily tied. Errors if the fast path rejects a sample the oracle defines.
pub fn kendall_worst(seed: u64, cases: usize) -> Result<f64, String> {
    let mut r = rng(seed);
    let mut worst = 0.0f64;
    for case in 0..cases {
        let n = 2 + case % 60;
        let (x, y) = if case % 2 == 0 {
            (normal_vec(&mut r, n), normal_vec(&mut r, n))
        } else {
            (tied_vec(&mut r, n, 4), tied_vec(&mut r, n, 3))
        };
        let naive = naive_kendall(&x, &y);
        match kendall_tau(&x, &y) {
            Ok(t) => worst = worst.max((t - naive).abs()),
            Err(_) if naive.is_nan() => {}
            Err(e) => return Err(format!("case {case}: fast path failed on a defined sample: {e}")),
        }
    }
    Ok(worst)
}

/// Largest scaled |trace form - explicit H K H L| over random symmetric
/// matrices of size 4 to 50. The difference is divided by max(1, |naive|).
pub fn hsic_worst(seed: u64, cases: usize) -> f64 {
    let mut r = rng(seed);
    let mut worst = 0.0f64;
    for case in 0..cases {
        let n = 4 + case % 47;
        let k = random_symmetric(&mut r, n);
        let l = random_symmetric(&mut r, n);
        let kg = GramMatrix::from_raw(n, flatten(&k), KernelKind::Linear).unwrap();
        let lg = GramMatrix::from_raw(n, flatten(&l), KernelKind::Linear).unwrap();
        let fast = kernel::hsic(&kg, &lg).unwrap();
        let naive = naive_hsic(&k, &l);
        worst = worst.max((fast - naive).abs() / naive.abs().max(1.0));
    }
    worst
}

/// On one-word sentences: worst errors of cka-linear against Pearson squared,
/// ka-linear against cosine squared and cka-distance against squared dCor.
pub fn single_word_worst(seed: u64, cases: usize) -> [f64; 3] {
    let single = |v: &[f64]| SentenceMatrix::from_rows(&[v.to_vec()]).unwrap();
    let mut r = rng(seed);
    let mut worst = [0.0f64; 3];
    for case in 0..cases {
        let d = 3 + case % 40;
        let (x, y) = (normal_vec(&mut r, d), normal_vec(&mut r, d));
        let (sx, sy) = (single(&x), single(&y));
        let p = naive_pearson(&x, &y);
        let c = cosine(&x, &y).unwrap();
        let lin = kernel::cka(&sx, &sy, KernelKind::Linear, Bandwidth::Median).unwrap();
        let ka = kernel::ka(&sx, &sy, KernelKind::Linear, Bandwidth::Median).unwrap();
        let dc = kernel::cka(&sx, &sy, KernelKind::Distance, Bandwidth::Median).unwrap();
        for (w, e) in worst.iter_mut().zip([lin - p * p, ka - c * c, dc - dcor_squared(&x, &y)]) {
            *w = w.max(e.abs());
        }
    }
    worst
}
