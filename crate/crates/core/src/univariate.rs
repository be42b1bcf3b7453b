//! Similarity coefficients between two equal-length samples.
//!
//! A word vector of dimension `D` is read as `D` observations of one scalar
//! variable, so comparing two vectors is comparing two paired samples.

use crate::error::{Error, Result};

/// Default winsorizing fraction per tail.
pub const DEFAULT_WINSOR: f64 = 0.05;

fn check_pair(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(Error::DegenerateSample("need at least two observations"));
    }
    Ok(())
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Sample product-moment correlation.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    check_pair(x, y)?;
    let (mx, my) = (mean(x), mean(y));
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&a, &b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::DegenerateSample("zero variance"));
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Cosine of the angle between `x` and `y`.
pub fn cosine(x: &[f64], y: &[f64]) -> Result<f64> {
    check_pair(x, y)?;
    let (mut xy, mut xx, mut yy) = (0.0, 0.0, 0.0);
    for (&a, &b) in x.iter().zip(y) {
        xy += a * b;
        xx += a * a;
        yy += b * b;
    }
    if xx == 0.0 || yy == 0.0 {
        return Err(Error::DegenerateSample("zero norm"));
    }
    Ok((xy / (xx * yy).sqrt()).clamp(-1.0, 1.0))
}

/// Fractional ranks starting at 1; ties share the mean of the ranks they span.
pub fn rank_transform(v: &[f64]) -> Vec<f64> {
    // Integer keys ordered like f64::total_cmp, computed once per value.
    let key = |x: f64| {
        let bits = x.to_bits() as i64;
        bits ^ (((bits >> 63) as u64) >> 1) as i64
    };
    let mut order: Vec<(i64, usize)> = v.iter().zip(0..).map(|(&x, i)| (key(x), i)).collect();
    order.sort_unstable();
    let mut ranks = vec![0.0; v.len()];
    let mut start = 0;
    while start < order.len() {
        let first = v[order[start].1];
        let mut end = start + 1;
        while end < order.len() && v[order[end].1] == first {
            end += 1;
        }
        // positions start..end hold ranks start+1..=end
        let avg = (start + 1 + end) as f64 / 2.0;
        for &(_, i) in &order[start..end] {
            ranks[i] = avg;
        }
        start = end;
    }
    ranks
}

/// Spearman's rho: Pearson correlation of the fractional ranks.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    check_pair(x, y)?;
    pearson(&rank_transform(x), &rank_transform(y))
}

/// Kendall's tau-b in `O(D log D)` (Knight's merge-sort algorithm).
pub fn kendall_tau(x: &[f64], y: &[f64]) -> Result<f64> {
    check_pair(x, y)?;
    let n = x.len() as u64;
    let mut pairs: Vec<(f64, f64)> = x.iter().copied().zip(y.iter().copied()).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));

    let total = n * (n - 1) / 2;
    let x_ties = tie_pairs(&pairs, |a, b| a.0 == b.0);
    let joint_ties = tie_pairs(&pairs, |a, b| a.0 == b.0 && a.1 == b.1);

    let mut ys: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let mut buf = vec![0.0; ys.len()];
    let swaps = merge_count(&mut ys, &mut buf);
    let y_ties = tie_pairs(&ys, |a, b| a == b);

    let not_tied_x = total - x_ties;
    let not_tied_y = total - y_ties;
    if not_tied_x == 0 || not_tied_y == 0 {
        return Err(Error::DegenerateSample("constant sample"));
    }
    // concordant minus discordant
    let score = total as i64 - x_ties as i64 - y_ties as i64 + joint_ties as i64 - 2 * swaps as i64;
    let denom = ((not_tied_x as f64) * (not_tied_y as f64)).sqrt();
    Ok((score as f64 / denom).clamp(-1.0, 1.0))
}

/// Number of tied pairs `sum t(t-1)/2` over runs of equal adjacent elements.
fn tie_pairs<T>(sorted: &[T], eq: impl Fn(&T, &T) -> bool) -> u64 {
    let mut total = 0u64;
    let mut run = 1u64;
    for w in sorted.windows(2) {
        if eq(&w[0], &w[1]) {
            run += 1;
        } else {
            total += run * (run - 1) / 2;
            run = 1;
        }
    }
    total + run * (run - 1) / 2
}

/// Stable merge sort returning the number of strict inversions.
fn merge_count(v: &mut [f64], buf: &mut [f64]) -> u64 {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut swaps = {
        let (left, right) = v.split_at_mut(mid);
        let (bl, br) = buf.split_at_mut(mid);
        merge_count(left, bl) + merge_count(right, br)
    };
    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < n {
        if v[j] < v[i] {
            buf[k] = v[j];
            swaps += (mid - i) as u64;
            j += 1;
        } else {
            buf[k] = v[i];
            i += 1;
        }
        k += 1;
    }
    buf[k..k + mid - i].copy_from_slice(&v[i..mid]);
    k += mid - i;
    buf[k..k + n - j].copy_from_slice(&v[j..n]);
    v.copy_from_slice(&buf[..n]);
    swaps
}

/// Number of values clipped from each tail when winsorizing `n` values at `p`.
///
/// Nearest-rank rule: `ceil(p * n)`, computed with a `1e-9` allowance so that
/// products such as `0.07 * 100` do not round up past an integer, and capped
/// at `(n - 1) / 2` so the two bounds never cross.
pub fn winsor_count(n: usize, p: f64) -> usize {
    if n == 0 || p <= 0.0 {
        return 0;
    }
    let k = (p * n as f64 - 1e-9).ceil().max(0.0) as usize;
    k.min((n - 1) / 2)
}

/// Clips the `winsor_count(len, p)` smallest values up to the next order
/// statistic and the same number of largest values down to theirs.
///
/// With sorted values `s` (0-based) and `c = winsor_count(len, p)`, values
/// below `s[c]` become `s[c]` and values above `s[len - 1 - c]` become
/// `s[len - 1 - c]`. Order and length are preserved.
pub fn winsorize(v: &[f64], p: f64) -> Vec<f64> {
    assert!((0.0..0.5).contains(&p), "winsorizing fraction must lie in [0, 0.5)");
    let c = winsor_count(v.len(), p);
    if c == 0 {
        return v.to_vec();
    }
    let mut sorted = v.to_vec();
    sorted.sort_by(f64::total_cmp);
    let (lo, hi) = (sorted[c], sorted[v.len() - 1 - c]);
    v.iter().map(|&x| x.clamp(lo, hi)).collect()
}

pub fn winsorized_pearson(x: &[f64], y: &[f64], p: f64) -> Result<f64> {
    check_pair(x, y)?;
    if !(0.0..0.5).contains(&p) {
        return Err(Error::InvalidArgument(format!("winsorizing fraction {p} outside [0, 0.5)")));
    }
    pearson(&winsorize(x, p), &winsorize(y, p))
}

/// Sample skewness `m3 / m2^1.5` using biased central moments.
pub fn skewness(v: &[f64]) -> Result<f64> {
    if v.len() < 3 {
        return Err(Error::DegenerateSample("need at least three observations"));
    }
    let m = mean(v);
    let (mut m2, mut m3) = (0.0, 0.0);
    for &x in v {
        let d = x - m;
        m2 += d * d;
        m3 += d * d * d;
    }
    let n = v.len() as f64;
    let (m2, m3) = (m2 / n, m3 / n);
    if m2 == 0.0 {
        return Err(Error::DegenerateSample("zero variance"));
    }
    Ok(m3 / m2.powf(1.5))
}
