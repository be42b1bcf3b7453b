//! Pooling-free similarity via Gram matrices over embedding dimensions.
//!
//! A sentence of `k` words is viewed as `D` observations of a `k`-variate
//! random vector: observation `i` collects the `i`-th coordinate of every word.
//! Kernels are evaluated between observations, so both sentences yield `D x D`
//! Gram matrices regardless of their lengths, and HSIC, CKA and KA compare them.
//!
//! Centering is done by subtracting row and column means (`O(D^2)`); the
//! centering matrix is never materialized.

use std::fmt;
use std::str::FromStr;

use crate::embeddings::SentenceMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelKind {
    /// `<a, b>`
    Linear,
    /// `exp(-|a - b|^2 / (2 sigma^2))`
    Gaussian,
    /// `-|a - b|`; CKA with this kernel is the squared distance correlation.
    Distance,
}

impl KernelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            KernelKind::Linear => "linear",
            KernelKind::Gaussian => "gaussian",
            KernelKind::Distance => "dcor",
        }
    }
}

impl fmt::Display for KernelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for KernelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(KernelKind::Linear),
            "gaussian" | "rbf" => Ok(KernelKind::Gaussian),
            "dcor" | "distance" => Ok(KernelKind::Distance),
            other => Err(Error::InvalidArgument(format!("unknown kernel {other:?}"))),
        }
    }
}

/// How the Gaussian kernel's `sigma^2` is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Bandwidth {
    /// Median heuristic over both sentences, so `K` and `L` share `sigma^2`.
    #[default]
    Median,
    Fixed(f64),
}

/// `D x k` matrix whose row `i` holds coordinate `i` of each of the `k` words.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservationMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
    /// The same entries word-major (`k x D`), the layout the pairwise loops use.
    by_word: Vec<f64>,
}

impl ObservationMatrix {
    /// Number of observations `D`.
    pub fn len(&self) -> usize {
        self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0
    }

    /// Length of each observation (the word count `k`).
    pub fn width(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Reads the observation matrix back as a sentence of `D` "words" of length `k`.
    pub fn to_sentence(&self) -> SentenceMatrix {
        SentenceMatrix::from_flat(self.cols, self.data.clone()).expect("non-empty by construction")
    }

    fn sq_distances(&self) -> Vec<f64> {
        self.pairwise(|acc, x, y| *acc += (x - y) * (x - y), false)
    }

    fn inner_products(&self) -> Vec<f64> {
        self.pairwise(|acc, x, y| *acc += x * y, true)
    }

    /// Symmetric `D x D` accumulation over words: entry `(i, j)` is the sum
    /// over words `w` (in order) of `f(x_wi, x_wj)`. For each `i` the inner
    /// loop runs over the contiguous tail `j > i` of every word vector.
    fn pairwise(&self, f: impl Fn(&mut f64, f64, f64), diagonal: bool) -> Vec<f64> {
        let n = self.rows;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            let from = if diagonal { i } else { i + 1 };
            let acc = &mut out[i * n + from..(i + 1) * n];
            // Four words per pass over `acc`; each entry still sees the words in order.
            let mut quads = self.by_word.chunks_exact(4 * n);
            for quad in &mut quads {
                let (w0, rest) = quad.split_at(n);
                let (w1, rest) = rest.split_at(n);
                let (w2, w3) = rest.split_at(n);
                let (x0, x1, x2, x3) = (w0[i], w1[i], w2[i], w3[i]);
                let ys = w0[from..].iter().zip(&w1[from..]).zip(&w2[from..]).zip(&w3[from..]);
                for (a, (((&y0, &y1), &y2), &y3)) in acc.iter_mut().zip(ys) {
                    f(a, x0, y0);
                    f(a, x1, y1);
                    f(a, x2, y2);
                    f(a, x3, y3);
                }
            }
            for word in quads.remainder().chunks_exact(n) {
                let x = word[i];
                acc.iter_mut().zip(&word[from..]).for_each(|(a, &y)| f(a, x, y));
            }
        }
        for i in 0..n {
            for j in 0..i {
                out[i * n + j] = out[j * n + i];
            }
        }
        out
    }
}

/// Transposes a sentence matrix into its observation matrix.
pub fn observations(s: &SentenceMatrix) -> ObservationMatrix {
    let (k, d) = (s.len(), s.dim());
    let src = s.as_flat();
    let mut data = vec![0.0; k * d];
    for w in 0..k {
        for i in 0..d {
            data[i * k + w] = src[w * d + i];
        }
    }
    ObservationMatrix {
        rows: d,
        cols: k,
        data,
        by_word: src.to_vec(),
    }
}

/// Symmetric `D x D` kernel matrix over observations.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    n: usize,
    data: Vec<f64>,
    kind: KernelKind,
    bandwidth: Option<f64>,
}

impl GramMatrix {
    /// Wraps an arbitrary row-major `n x n` matrix (mainly for tests and tooling).
    pub fn from_raw(n: usize, data: Vec<f64>, kind: KernelKind) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch {
                left: n * n,
                right: data.len(),
            });
        }
        Ok(Self {
            n,
            data,
            kind,
            bandwidth: None,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> KernelKind {
        self.kind
    }

    pub fn bandwidth(&self) -> Option<f64> {
        self.bandwidth
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// `H K H` with `H = I - 11^T / n`.
    pub fn centered(&self) -> Vec<f64> {
        center(&self.data, self.n)
    }
}

fn center(m: &[f64], n: usize) -> Vec<f64> {
    let nf = n as f64;
    let row_mean: Vec<f64> = m.chunks_exact(n).map(|r| r.iter().sum::<f64>() / nf).collect();
    let mut col_mean = vec![0.0; n];
    for r in m.chunks_exact(n) {
        col_mean.iter_mut().zip(r).for_each(|(c, v)| *c += v);
    }
    col_mean.iter_mut().for_each(|c| *c /= nf);
    let grand = row_mean.iter().sum::<f64>() / nf;
    let mut out = Vec::with_capacity(n * n);
    for (i, r) in m.chunks_exact(n).enumerate() {
        out.extend(r.iter().zip(&col_mean).map(|(v, c)| v - row_mean[i] - c + grand));
    }
    out
}

/// `sum_ij a_ij b_ij`
fn frobenius(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn gaussian_from_sq(mut sq: Vec<f64>, sigma2: f64) -> Vec<f64> {
    let scale = -0.5 / sigma2;
    sq.iter_mut().for_each(|v| *v = (*v * scale).exp());
    sq
}

fn check_bandwidth(sigma2: f64) -> Result<()> {
    if sigma2 > 0.0 && sigma2.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("bandwidth must be positive, got {sigma2}")))
    }
}

/// Builds the Gram matrix of `o`. For the Gaussian kernel `bandwidth` is
/// `sigma^2`; when absent the median heuristic over `o` alone is used.
pub fn gram(o: &ObservationMatrix, kind: KernelKind, bandwidth: Option<f64>) -> Result<GramMatrix> {
    let n = o.len();
    let (data, bw) = match kind {
        KernelKind::Linear => (o.inner_products(), None),
        KernelKind::Distance => {
            let mut sq = o.sq_distances();
            sq.iter_mut().for_each(|v| *v = -v.sqrt());
            (sq, None)
        }
        KernelKind::Gaussian => {
            let sq = o.sq_distances();
            let sigma2 = match bandwidth {
                Some(s) => s,
                None => median_of_upper(&[(&sq, n)])?,
            };
            check_bandwidth(sigma2)?;
            (gaussian_from_sq(sq, sigma2), Some(sigma2))
        }
    };
    Ok(GramMatrix {
        n,
        data,
        kind,
        bandwidth: bw,
    })
}

/// Lower median of the positive off-diagonal squared distances.
fn median_of_upper(mats: &[(&[f64], usize)]) -> Result<f64> {
    let mut vals = Vec::new();
    for &(m, n) in mats {
        for i in 0..n {
            vals.extend(m[i * n + i + 1..(i + 1) * n].iter().copied().filter(|&v| v > 0.0));
        }
    }
    lower_median(&mut vals).ok_or(Error::DegenerateBandwidth)
}

fn lower_median(vals: &mut [f64]) -> Option<f64> {
    if vals.is_empty() {
        return None;
    }
    let mid = (vals.len() - 1) / 2;
    let (_, m, _) = vals.select_nth_unstable_by(mid, f64::total_cmp);
    Some(*m)
}

/// Median of all positive pairwise squared distances among `rows`.
pub fn median_pairwise_sq_distance(rows: &[&[f64]]) -> Result<f64> {
    let mut vals = Vec::with_capacity(rows.len() * rows.len().saturating_sub(1) / 2);
    for (i, a) in rows.iter().enumerate() {
        for b in &rows[i + 1..] {
            if a.len() != b.len() {
                return Err(Error::DimensionMismatch {
                    left: a.len(),
                    right: b.len(),
                });
            }
            let d: f64 = a.iter().zip(b.iter()).map(|(x, y)| (x - y) * (x - y)).sum();
            if d > 0.0 {
                vals.push(d);
            }
        }
    }
    lower_median(&mut vals).ok_or(Error::DegenerateBandwidth)
}

/// Shared `sigma^2` for two sentences: the lower median of the positive
/// within-sentence pairwise squared distances of both observation sets.
///
/// Cross-sentence pairs are not used because observations of sentences with
/// different word counts live in spaces of different dimension.
pub fn median_heuristic(o1: &ObservationMatrix, o2: &ObservationMatrix) -> Result<f64> {
    let (a, b) = (o1.sq_distances(), o2.sq_distances());
    median_of_upper(&[(&a, o1.len()), (&b, o2.len())])
}

/// Empirical HSIC: `(D - 1)^-2 Tr(K H L H)`.
pub fn hsic(k: &GramMatrix, l: &GramMatrix) -> Result<f64> {
    if k.n != l.n {
        return Err(Error::DimensionMismatch {
            left: k.n,
            right: l.n,
        });
    }
    let n = k.n;
    if n < 2 {
        return Err(Error::DegenerateSample("HSIC needs at least two observations"));
    }
    let lc = center(&l.data, n);
    // Tr(K M) = sum_ij K_ij M_ji
    let mut tr = 0.0;
    for i in 0..n {
        for j in 0..n {
            tr += k.data[i * n + j] * lc[j * n + i];
        }
    }
    let dm1 = (n - 1) as f64;
    Ok(tr / (dm1 * dm1))
}

fn gram_pair(
    s1: &SentenceMatrix,
    s2: &SentenceMatrix,
    kind: KernelKind,
    bandwidth: Bandwidth,
) -> Result<(Vec<f64>, Vec<f64>, usize)> {
    if s1.dim() != s2.dim() {
        return Err(Error::DimensionMismatch {
            left: s1.dim(),
            right: s2.dim(),
        });
    }
    let n = s1.dim();
    let (o1, o2) = (observations(s1), observations(s2));
    let (k, l) = match kind {
        KernelKind::Gaussian => {
            let (a, b) = (o1.sq_distances(), o2.sq_distances());
            let sigma2 = match bandwidth {
                Bandwidth::Median => median_of_upper(&[(&a, n), (&b, n)])?,
                Bandwidth::Fixed(s) => s,
            };
            check_bandwidth(sigma2)?;
            (gaussian_from_sq(a, sigma2), gaussian_from_sq(b, sigma2))
        }
        _ => (gram(&o1, kind, None)?.data, gram(&o2, kind, None)?.data),
    };
    Ok((k, l, n))
}

/// Centered kernel alignment `HSIC(K, L) / sqrt(HSIC(K, K) HSIC(L, L))`.
pub fn cka(s1: &SentenceMatrix, s2: &SentenceMatrix, kind: KernelKind, bandwidth: Bandwidth) -> Result<f64> {
    let (k, l, n) = gram_pair(s1, s2, kind, bandwidth)?;
    if n < 2 {
        return Err(Error::DegenerateSample("CKA needs at least two observations"));
    }
    let (kc, lc) = (center(&k, n), center(&l, n));
    let kl = frobenius(&kc, &lc);
    let kk = frobenius(&kc, &kc);
    let ll = frobenius(&lc, &lc);
    if kk <= 0.0 || ll <= 0.0 {
        return Err(Error::DegenerateSample("zero self-HSIC"));
    }
    Ok(kl / (kk * ll).sqrt())
}

/// Uncentered kernel alignment `<K, L>_F / (|K|_F |L|_F)`.
pub fn ka(s1: &SentenceMatrix, s2: &SentenceMatrix, kind: KernelKind, bandwidth: Bandwidth) -> Result<f64> {
    let (k, l, _) = gram_pair(s1, s2, kind, bandwidth)?;
    let kl = frobenius(&k, &l);
    let kk = frobenius(&k, &k);
    let ll = frobenius(&l, &l);
    if kk <= 0.0 || ll <= 0.0 {
        return Err(Error::DegenerateSample("zero Gram matrix"));
    }
    Ok(kl / (kk * ll).sqrt())
}
