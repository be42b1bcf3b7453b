//! Shared generators, brute-force oracles and fixture paths for the
//! integration tests.
#![allow(dead_code)]

use std::path::PathBuf;

use corrsim::SentenceMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn normal_vec(r: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| StandardNormal.sample(r)).collect()
}

/// Small integers, so ties are frequent.
pub fn tied_vec(r: &mut ChaCha8Rng, n: usize, levels: i32) -> Vec<f64> {
    (0..n).map(|_| f64::from(r.random_range(0..levels))).collect()
}

pub fn sentence(r: &mut ChaCha8Rng, k: usize, d: usize) -> SentenceMatrix {
    SentenceMatrix::from_flat(d, normal_vec(r, k * d)).unwrap()
}

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/mini")
}

pub fn golden_dir() -> PathBuf {
    fixture_dir().join("golden")
}

/// Kendall tau-b by enumerating all pairs.
pub fn naive_kendall(x: &[f64], y: &[f64]) -> f64 {
    let (mut c, mut d, mut tx, mut ty) = (0i64, 0i64, 0i64, 0i64);
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            let a = (x[i] - x[j]).signum() * f64::from(u8::from(x[i] != x[j]));
            let b = (y[i] - y[j]).signum() * f64::from(u8::from(y[i] != y[j]));
            match (a == 0.0, b == 0.0) {
                (true, true) => {}
                (true, false) => tx += 1,
                (false, true) => ty += 1,
                (false, false) if a == b => c += 1,
                _ => d += 1,
            }
        }
    }
    let n = (c + d) as f64;
    (c - d) as f64 / ((n + tx as f64) * (n + ty as f64)).sqrt()
}

/// Textbook product-moment correlation.
pub fn naive_pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    sxy / (sxx.sqrt() * syy.sqrt())
}

pub type Dense = Vec<Vec<f64>>;

pub fn matmul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let m = b[0].len();
    (0..n)
        .map(|i| (0..m).map(|j| (0..b.len()).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

pub fn centering(n: usize) -> Dense {
    (0..n)
        .map(|i| (0..n).map(|j| f64::from(u8::from(i == j)) - 1.0 / n as f64).collect())
        .collect()
}

/// `(D-1)^-2 Tr(K H L H)` with `H` built explicitly.
pub fn naive_hsic(k: &Dense, l: &Dense) -> f64 {
    let n = k.len();
    let h = centering(n);
    let m = matmul(&matmul(&matmul(k, &h), l), &h);
    (0..n).map(|i| m[i][i]).sum::<f64>() / ((n - 1) as f64).powi(2)
}

pub fn random_symmetric(r: &mut ChaCha8Rng, n: usize) -> Dense {
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i..n {
            let v: f64 = StandardNormal.sample(r);
            m[i][j] = v;
            m[j][i] = v;
        }
    }
    m
}

pub fn flatten(m: &Dense) -> Vec<f64> {
    m.iter().flatten().copied().collect()
}

/// Squared distance correlation from double-centred distance matrices.
pub fn dcor_squared(x: &[f64], y: &[f64]) -> f64 {
    let centred = |v: &[f64]| -> Dense {
        let n = v.len();
        let a: Dense = (0..n).map(|i| (0..n).map(|j| (v[i] - v[j]).abs()).collect()).collect();
        let row: Vec<f64> = a.iter().map(|r| r.iter().sum::<f64>() / n as f64).collect();
        let all = row.iter().sum::<f64>() / n as f64;
        (0..n)
            .map(|i| (0..n).map(|j| a[i][j] - row[i] - row[j] + all).collect())
            .collect()
    };
    let (a, b) = (centred(x), centred(y));
    let dot = |p: &Dense, q: &Dense| -> f64 { p.iter().flatten().zip(q.iter().flatten()).map(|(u, v)| u * v).sum() };
    let dcov2 = dot(&a, &b);
    dcov2 / (dot(&a, &a) * dot(&b, &b)).sqrt()
}

/// Deterministic vectors shared with the frozen reference values (integer
/// arithmetic only before the final transform).
pub fn formula_vec(seed: u64, n: usize, transform: usize) -> Vec<f64> {
    (0..n as u64)
        .map(|i| {
            let u = (((i * 7919 + seed * 104729) % 1009) as f64 + 0.5) / 1009.0;
            match transform {
                0 => u,
                1 => u.powi(3),
                2 => (u / (1.0 - u)).ln(),
                3 => -u.ln(),
                4 => (std::f64::consts::PI * (u - 0.5)).tan(),
                5 => u.sqrt() + 0.01 * i as f64,
                _ => (7.0 * u).sin() + u,
            }
        })
        .collect()
}
pub mod checks;
pub mod fixture;
pub mod invariants;
