//! Invariant checks driven by a seed. Each returns `Err` describing the first
//! violation. Used both by the proptest suites and by the acceptance run.
// `ensure!(a <= b)` must fail when either side is NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use corrsim::kernel::{self, Bandwidth, KernelKind};
use corrsim::pooling::{self, Coefficient, PoolKind};
use corrsim::significance::{bca_interval, PairedScores};
use corrsim::sts::{self, PairScore, SubtaskReport};
use corrsim::univariate::*;
use corrsim::SentenceMatrix;
use nalgebra::{DMatrix, SymmetricEigen};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{normal_vec, rng, sentence, tied_vec};

pub type Check = fn(u64) -> Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

pub const COEFFICIENTS: [Coefficient; 5] = [
    Coefficient::Cosine,
    Coefficient::Pearson,
    Coefficient::WinsorizedPearson(0.05),
    Coefficient::Spearman,
    Coefficient::Kendall,
];

pub const KERNELS: [KernelKind; 3] = [KernelKind::Linear, KernelKind::Gaussian, KernelKind::Distance];

/// Named checks, grouped the way the acceptance run reports them.
pub const SUITES: [(&str, Check); 21] = [
    ("coefficient symmetry", coefficient_symmetry),
    ("coefficient range", coefficient_range),
    ("pearson affine invariance", pearson_affine),
    ("rank coefficients monotone invariance", rank_monotone),
    ("cosine of centred vectors is pearson", cosine_centred),
    ("rank sum", rank_sum),
    ("winsorize keeps order and length", winsorize_shape),
    ("pooling order max >= mean >= min", pooling_order),
    ("pooling word-order invariance", pooling_permutation),
    ("mean pooling linearity", mean_pool_linearity),
    ("pooled similarity symmetry", pooled_symmetry),
    ("single-word pooled reduction", single_word_reduction),
    ("kernel alignment symmetry", kernel_symmetry),
    ("kernel alignment range", kernel_range),
    ("cka-linear scale invariance", cka_scale),
    ("kernel alignment word-order invariance", kernel_word_order),
    ("gram symmetry and positive semi-definiteness", gram_psd),
    ("pearson-vs-gold affine invariance", gold_affine),
    ("year mean permutation invariance", year_permutation),
    ("bca antisymmetry", bca_antisymmetry),
    ("bca level monotonicity and determinism", bca_monotone_deterministic),
];

fn pair(r: &mut ChaCha8Rng) -> (Vec<f64>, Vec<f64>) {
    let n = r.random_range(3..80);
    if r.random_bool(0.3) {
        (tied_vec(r, n, 5), tied_vec(r, n, 4))
    } else {
        (normal_vec(r, n), normal_vec(r, n))
    }
}

fn random_sentence(r: &mut ChaCha8Rng, d: usize) -> SentenceMatrix {
    let k = r.random_range(1..8);
    sentence(r, k, d)
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

pub fn coefficient_symmetry(seed: u64) -> Result<(), String> {
    let (x, y) = pair(&mut rng(seed));
    for c in COEFFICIENTS {
        match (c.apply(&x, &y), c.apply(&y, &x)) {
            (Ok(a), Ok(b)) => ensure!(close(a, b, 1e-12), "{}: {a} vs {b}", c.id()),
            (Err(_), Err(_)) => {}
            _ => return Err(format!("{}: defined in one order only", c.id())),
        }
    }
    Ok(())
}

pub fn coefficient_range(seed: u64) -> Result<(), String> {
    let (x, y) = pair(&mut rng(seed));
    for c in COEFFICIENTS {
        if let Ok(v) = c.apply(&x, &y) {
            ensure!((-1.0..=1.0).contains(&v), "{}: {v}", c.id());
        }
    }
    Ok(())
}

pub fn pearson_affine(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let (x, y) = pair(&mut r);
    let Ok(base) = pearson(&x, &y) else { return Ok(()) };
    let a = r.random_range(0.1..10.0);
    let b = r.random_range(-10.0..10.0);
    let tx: Vec<f64> = x.iter().map(|v| a * v + b).collect();
    let got = pearson(&tx, &y).map_err(|e| e.to_string())?;
    ensure!(close(got, base, 1e-12), "{got} vs {base}");
    Ok(())
}

pub fn rank_monotone(seed: u64) -> Result<(), String> {
    let (x, y) = pair(&mut rng(seed));
    let f = |v: &[f64]| -> Vec<f64> { v.iter().map(|t| t.powi(3) + (t / 3.0).exp()).collect() };
    let (fx, fy) = (f(&x), f(&y));
    for c in [Coefficient::Spearman, Coefficient::Kendall] {
        if let Ok(base) = c.apply(&x, &y) {
            let got = c.apply(&fx, &fy).map_err(|e| e.to_string())?;
            ensure!(close(got, base, 1e-12), "{}: {got} vs {base}", c.id());
        }
    }
    Ok(())
}

pub fn cosine_centred(seed: u64) -> Result<(), String> {
    let (x, y) = pair(&mut rng(seed));
    let Ok(p) = pearson(&x, &y) else { return Ok(()) };
    let centre = |v: &[f64]| -> Vec<f64> {
        let m = v.iter().sum::<f64>() / v.len() as f64;
        v.iter().map(|t| t - m).collect()
    };
    let c = cosine(&centre(&x), &centre(&y)).map_err(|e| e.to_string())?;
    ensure!(close(c, p, 1e-12), "{c} vs {p}");
    Ok(())
}

pub fn rank_sum(seed: u64) -> Result<(), String> {
    let (x, _) = pair(&mut rng(seed));
    let n = x.len() as f64;
    let s: f64 = rank_transform(&x).iter().sum();
    ensure!(s == n * (n + 1.0) / 2.0, "rank sum {s} for n={n}");
    Ok(())
}

pub fn winsorize_shape(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let (x, _) = pair(&mut r);
    let p = r.random_range(0.0..0.49);
    let w = winsorize(&x, p);
    ensure!(w.len() == x.len(), "length changed");
    for i in 0..x.len() {
        for j in 0..x.len() {
            ensure!(!(x[i] < x[j] && w[i] > w[j]), "order broken at {i},{j}");
        }
    }
    ensure!(winsorize(&x, 0.0) == x, "p = 0 is not the identity");
    Ok(())
}

pub fn pooling_order(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let s = random_sentence(&mut r, 30);
    let [mean, max, min] = [PoolKind::Mean, PoolKind::Max, PoolKind::Min].map(|k| pooling::pool(&s, k).values);
    for j in 0..s.dim() {
        ensure!(max[j] >= mean[j] && mean[j] >= min[j], "dimension {j}");
        for row in s.rows() {
            ensure!(max[j] >= row[j] && min[j] <= row[j], "dimension {j} outside word range");
        }
    }
    Ok(())
}

fn shuffled(r: &mut ChaCha8Rng, s: &SentenceMatrix) -> SentenceMatrix {
    let mut order: Vec<usize> = (0..s.len()).collect();
    order.shuffle(r);
    s.permuted(&order)
}

pub fn pooling_permutation(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let s = random_sentence(&mut r, 20);
    let p = shuffled(&mut r, &s);
    for k in PoolKind::ALL {
        let (a, b) = (pooling::pool(&s, k).values, pooling::pool(&p, k).values);
        let tol = if k == PoolKind::Mean { 1e-12 } else { 0.0 };
        ensure!(a.iter().zip(&b).all(|(u, v)| close(*u, *v, tol)), "{k} pooling changed");
    }
    Ok(())
}

pub fn mean_pool_linearity(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let s = random_sentence(&mut r, 25);
    let all = s.as_flat().iter().sum::<f64>() / s.as_flat().len() as f64;
    let pooled = pooling::pool(&s, PoolKind::Mean).mean();
    ensure!(close(all, pooled, 1e-12), "{pooled} vs {all}");
    Ok(())
}

pub fn pooled_symmetry(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let (a, b) = (random_sentence(&mut r, 15), random_sentence(&mut r, 15));
    for k in PoolKind::ALL {
        for c in COEFFICIENTS {
            let u = pooling::pooled_similarity(&a, &b, k, c).map_err(|e| e.to_string())?;
            let v = pooling::pooled_similarity(&b, &a, k, c).map_err(|e| e.to_string())?;
            ensure!(close(u, v, 1e-12), "{k}-{}: {u} vs {v}", c.id());
        }
    }
    Ok(())
}

pub fn single_word_reduction(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let (x, y) = (normal_vec(&mut r, 12), normal_vec(&mut r, 12));
    let (a, b) = (SentenceMatrix::from_rows(std::slice::from_ref(&x)).unwrap(), SentenceMatrix::from_rows(std::slice::from_ref(&y)).unwrap());
    for k in PoolKind::ALL {
        for c in COEFFICIENTS {
            let u = pooling::pooled_similarity(&a, &b, k, c).map_err(|e| e.to_string())?;
            let v = c.apply(&x, &y).map_err(|e| e.to_string())?;
            ensure!(u == v, "{k}-{}: {u} vs {v}", c.id());
        }
    }
    Ok(())
}

fn alignments(a: &SentenceMatrix, b: &SentenceMatrix) -> Result<Vec<(String, f64)>, String> {
    let mut out = Vec::new();
    for k in KERNELS {
        let v = kernel::cka(a, b, k, Bandwidth::Median).map_err(|e| format!("cka-{}: {e}", k.as_str()))?;
        out.push((format!("cka-{}", k.as_str()), v));
    }
    let v = kernel::ka(a, b, KernelKind::Linear, Bandwidth::Median).map_err(|e| e.to_string())?;
    out.push(("ka-linear".into(), v));
    Ok(out)
}

pub fn kernel_symmetry(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let d = r.random_range(4..40);
    let (a, b) = (random_sentence(&mut r, d), random_sentence(&mut r, d));
    for ((name, u), (_, v)) in alignments(&a, &b)?.into_iter().zip(alignments(&b, &a)?) {
        ensure!(close(u, v, 1e-12), "{name}: {u} vs {v}");
    }
    Ok(())
}

pub fn kernel_range(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let d = r.random_range(4..40);
    let (a, b) = (random_sentence(&mut r, d), random_sentence(&mut r, d));
    for (name, v) in alignments(&a, &b)? {
        ensure!((-1e-9..=1.0 + 1e-9).contains(&v), "{name}: {v}");
    }
    Ok(())
}

pub fn cka_scale(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let d = r.random_range(4..40);
    let (a, b) = (random_sentence(&mut r, d), random_sentence(&mut r, d));
    let mag: f64 = r.random_range(0.01..100.0);
    let c = if r.random_bool(0.5) { mag } else { -mag };
    let base = kernel::cka(&a, &b, KernelKind::Linear, Bandwidth::Median).map_err(|e| e.to_string())?;
    let got = kernel::cka(&a.scaled(c), &b, KernelKind::Linear, Bandwidth::Median).map_err(|e| e.to_string())?;
    ensure!(close(got, base, 1e-10), "c={c}: {got} vs {base}");
    Ok(())
}

pub fn kernel_word_order(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let d = r.random_range(4..40);
    let (a, b) = (random_sentence(&mut r, d), random_sentence(&mut r, d));
    let pa = shuffled(&mut r, &a);
    for ((name, u), (_, v)) in alignments(&a, &b)?.into_iter().zip(alignments(&pa, &b)?) {
        ensure!(close(u, v, 1e-12), "{name}: {u} vs {v}");
    }
    Ok(())
}

fn min_eigenvalue(n: usize, data: &[f64]) -> f64 {
    SymmetricEigen::new(DMatrix::from_row_slice(n, n, data)).eigenvalues.min()
}

pub fn gram_psd(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let d = r.random_range(4..40);
    let o = kernel::observations(&random_sentence(&mut r, d));
    for k in KERNELS {
        let g = kernel::gram(&o, k, None).map_err(|e| e.to_string())?;
        for i in 0..d {
            for j in 0..d {
                ensure!(close(g.get(i, j), g.get(j, i), 1e-12), "{} not symmetric", k.as_str());
            }
        }
        let m = if k == KernelKind::Distance { g.centered() } else { g.as_slice().to_vec() };
        let scale = m.iter().fold(1.0f64, |s, v| s.max(v.abs()));
        let ev = min_eigenvalue(d, &m);
        ensure!(ev >= -1e-8 * scale, "{}: smallest eigenvalue {ev}", k.as_str());
        let h = kernel::hsic(&g, &g).map_err(|e| e.to_string())?;
        ensure!(h >= -1e-10, "{}: hsic(K, K) = {h}", k.as_str());
    }
    Ok(())
}

fn random_subtask(r: &mut ChaCha8Rng, id: &str, n: usize) -> SubtaskReport {
    let pairs = (0..n)
        .map(|i| PairScore {
            index: i,
            sentence1: String::new(),
            sentence2: String::new(),
            score: r.random_range(-1.0..1.0),
            gold: Some(r.random_range(0.0..5.0)),
            fallback: false,
        })
        .collect();
    SubtaskReport::from_pairs(id, pairs)
}

pub fn gold_affine(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let n = r.random_range(3..60);
    let raw = random_subtask(&mut r, "STS12/x", n);
    let (lo, hi) = raw.pairs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), p| (l.min(p.score), h.max(p.score)));
    let mut scaled = raw.pairs.clone();
    scaled.iter_mut().for_each(|p| p.score = sts::rescale(p.score, lo, hi));
    let (a, b) = (sts::pearson_vs_gold(&raw.pairs), sts::pearson_vs_gold(&scaled));
    match (a, b) {
        (Some(a), Some(b)) => ensure!(close(a / 100.0, b / 100.0, 1e-12), "{a} vs {b}"),
        (None, None) => {}
        _ => return Err("defined for one scale only".into()),
    }
    Ok(())
}

pub fn year_permutation(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let count = r.random_range(1..7);
    let mut reports: Vec<SubtaskReport> = (0..count).map(|i| random_subtask(&mut r, &format!("STS14/t{i}"), 20)).collect();
    let base = sts::aggregate_year(&reports);
    reports.shuffle(&mut r);
    let got = sts::aggregate_year(&reports);
    match (base, got) {
        (Some(a), Some(b)) => ensure!(close(a, b, 1e-12), "{a} vs {b}"),
        (None, None) => {}
        _ => return Err("defined for one order only".into()),
    }
    Ok(())
}

/// Gold `N(0,1)`, each system `gold + sigma * noise`.
pub fn synthetic_paired(r: &mut ChaCha8Rng, m: usize, sigma_a: f64, sigma_b: f64) -> PairedScores {
    let gold = normal_vec(r, m);
    let na = normal_vec(r, m);
    let nb = normal_vec(r, m);
    let a = gold.iter().zip(&na).map(|(g, e)| g + sigma_a * e).collect();
    let b = gold.iter().zip(&nb).map(|(g, e)| g + sigma_b * e).collect();
    PairedScores::new("synthetic", gold, a, b).unwrap()
}

/// How many of `trials` seeded runs (M = 200, B = 10000) produce a 95%
/// interval covering the generating process's delta.
pub fn coverage(trials: u64) -> usize {
    let (sa, sb) = (0.5f64, 0.8f64);
    let truth = 100.0 * ((1.0 + sa * sa).powf(-0.5) - (1.0 + sb * sb).powf(-0.5));
    (0..trials)
        .filter(|&seed| {
            let mut r = rng(seed);
            let p = synthetic_paired(&mut r, 200, sa, sb);
            let ci = bca_interval(&p, 0.95, 10_000, seed).unwrap();
            ci.lower <= truth && truth <= ci.upper
        })
        .count()
}

fn small_paired(seed: u64) -> PairedScores {
    let mut r = rng(seed);
    let m = r.random_range(12..40);
    let sa = r.random_range(0.2..2.0);
    let sb = r.random_range(0.2..2.0);
    synthetic_paired(&mut r, m, sa, sb)
}

pub fn bca_antisymmetry(seed: u64) -> Result<(), String> {
    let p = small_paired(seed);
    let ab = bca_interval(&p, 0.95, 1000, seed).map_err(|e| e.to_string())?;
    let ba = bca_interval(&p.swapped(), 0.95, 1000, seed).map_err(|e| e.to_string())?;
    ensure!(ba.delta_hat == -ab.delta_hat, "delta {} vs {}", ab.delta_hat, ba.delta_hat);
    let tol = 1e-9 * (ab.upper - ab.lower).abs().max(1.0);
    ensure!(
        close(ba.lower, -ab.upper, tol) && close(ba.upper, -ab.lower, tol),
        "[{}, {}] vs [{}, {}]",
        ab.lower,
        ab.upper,
        ba.lower,
        ba.upper
    );
    Ok(())
}

pub fn bca_monotone_deterministic(seed: u64) -> Result<(), String> {
    let p = small_paired(seed);
    let wide = bca_interval(&p, 0.95, 1000, seed).map_err(|e| e.to_string())?;
    let narrow = bca_interval(&p, 0.90, 1000, seed).map_err(|e| e.to_string())?;
    ensure!(
        wide.lower <= narrow.lower && narrow.upper <= wide.upper,
        "90% [{}, {}] not inside 95% [{}, {}]",
        narrow.lower,
        narrow.upper,
        wide.lower,
        wide.upper
    );
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let again = single.install(|| bca_interval(&p, 0.95, 1000, seed)).map_err(|e| e.to_string())?;
    ensure!(again == wide, "rerun on one thread differs");
    Ok(())
}
