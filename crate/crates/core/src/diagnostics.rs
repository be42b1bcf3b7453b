//! Distributional diagnostics for word vectors and pooled sentence vectors.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::embeddings::{EmbeddingStore, SentenceMatrix};
use crate::error::{Error, Result};
use crate::pooling::{self, PoolKind};
use crate::shapiro::{self, ShapiroWilk};

pub const HISTOGRAM_BINS: usize = 60;
pub const DEFAULT_ALPHA: f64 = 0.05;

#[derive(Debug, Clone, PartialEq)]
pub struct TokenNormality {
    pub token: String,
    /// `None` when the vector is degenerate (e.g. constant).
    pub result: Option<ShapiroWilk>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalityScan {
    pub alpha: f64,
    pub per_token: Vec<TokenNormality>,
    pub tested: usize,
    pub failing: usize,
    pub degenerate: usize,
}

impl NormalityScan {
    /// Share of non-degenerate vectors with `p < alpha`.
    pub fn failure_fraction(&self) -> f64 {
        if self.tested == 0 {
            0.0
        } else {
            self.failing as f64 / self.tested as f64
        }
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("token\tw\tp_value\n");
        for t in &self.per_token {
            match t.result {
                Some(r) => {
                    let _ = writeln!(out, "{}\t{}\t{}", t.token, r.w, r.p_value);
                }
                None => {
                    let _ = writeln!(out, "{}\tNA\tNA", t.token);
                }
            }
        }
        out
    }

    pub fn summary(&self) -> String {
        format!(
            "alpha\t{}\ntested\t{}\nfailing\t{}\ndegenerate\t{}\nfailure_fraction\t{}\n",
            self.alpha,
            self.tested,
            self.failing,
            self.degenerate,
            self.failure_fraction()
        )
    }
}

/// Shapiro-Wilk on each word vector's `D` entries. `sample` restricts the scan
/// to the listed tokens (unknown tokens are ignored); results keep the order
/// of `sample`, or store order without one.
pub fn normality_scan(store: &EmbeddingStore, sample: Option<&[String]>, alpha: f64) -> Result<NormalityScan> {
    if !(shapiro::MIN_LEN..=shapiro::MAX_LEN).contains(&store.dim()) {
        return Err(Error::InvalidArgument(format!(
            "embedding dimension {} outside the Shapiro-Wilk range",
            store.dim()
        )));
    }
    let tokens: Vec<&str> = match sample {
        Some(s) => s.iter().map(String::as_str).filter(|t| store.contains(t)).collect(),
        None => store.tokens().iter().map(String::as_str).collect(),
    };
    let per_token: Vec<TokenNormality> = tokens
        .par_iter()
        .map(|&t| TokenNormality {
            token: t.to_owned(),
            result: shapiro::shapiro_wilk(store.get(t).expect("filtered to known tokens")).ok(),
        })
        .collect();
    let tested = per_token.iter().filter(|t| t.result.is_some()).count();
    let failing = per_token
        .iter()
        .filter(|t| t.result.is_some_and(|r| r.p_value < alpha))
        .count();
    Ok(NormalityScan {
        alpha,
        degenerate: per_token.len() - tested,
        per_token,
        tested,
        failing,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bin {
    pub left: f64,
    pub width: f64,
    pub density: f64,
}

/// Density histogram over uniform bins.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub bins: Vec<Bin>,
    pub count: usize,
}

impl Histogram {
    /// `HISTOGRAM_BINS` uniform bins over `[min, max]`, the last one closed.
    /// A constant sample is spread over `[v - 0.5, v + 0.5]`.
    pub fn density(values: &[f64]) -> Result<Self> {
        Self::with_bins(values, HISTOGRAM_BINS)
    }

    pub fn with_bins(values: &[f64], bins: usize) -> Result<Self> {
        if values.is_empty() || bins == 0 {
            return Err(Error::InvalidArgument("histogram needs values and at least one bin".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("histogram values must be finite".into()));
        }
        let mut lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let mut hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if hi <= lo {
            lo -= 0.5;
            hi += 0.5;
        }
        let width = (hi - lo) / bins as f64;
        let mut counts = vec![0usize; bins];
        for &v in values {
            let b = (((v - lo) / width).floor() as usize).min(bins - 1);
            counts[b] += 1;
        }
        let n = values.len() as f64;
        Ok(Self {
            bins: counts
                .iter()
                .enumerate()
                .map(|(i, &c)| Bin {
                    left: lo + i as f64 * width,
                    width,
                    density: c as f64 / (n * width),
                })
                .collect(),
            count: values.len(),
        })
    }

    /// `sum(density * width)`; 1 up to rounding.
    pub fn total_mass(&self) -> f64 {
        self.bins.iter().map(|b| b.density * b.width).sum()
    }

    /// Mean of the histogram's bin centres weighted by mass.
    pub fn centre_of_mass(&self) -> f64 {
        self.bins
            .iter()
            .map(|b| (b.left + b.width / 2.0) * b.density * b.width)
            .sum()
    }

    /// CSV with header `bin_left,bin_width,density`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("bin_left,bin_width,density\n");
        for b in &self.bins {
            let _ = writeln!(out, "{},{},{}", b.left, b.width, b.density);
        }
        out
    }
}

/// Histogram of per-sentence pooled means, one per pooling kind.
pub fn pooled_histograms(sentences: &[SentenceMatrix], kinds: &[PoolKind]) -> Result<Vec<(PoolKind, Histogram)>> {
    if sentences.is_empty() {
        return Err(Error::InvalidArgument("empty corpus".into()));
    }
    kinds
        .iter()
        .map(|&k| Ok((k, Histogram::density(&pooling::pooled_mean_distribution(sentences, k))?)))
        .collect()
}

/// Histogram of the `D` entries of one sentence's pooled vector, per kind.
pub fn sentence_histograms(sentence: &SentenceMatrix, kinds: &[PoolKind]) -> Result<Vec<(PoolKind, Histogram)>> {
    kinds
        .iter()
        .map(|&k| Ok((k, Histogram::density(&pooling::pool(sentence, k).values)?)))
        .collect()
}
