//! Pooling a sentence matrix into one vector, and pooled similarity.

use std::fmt;
use std::str::FromStr;

use crate::embeddings::SentenceMatrix;
use crate::error::{Error, Result};
use crate::univariate;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PoolKind {
    Mean,
    Max,
    Min,
}

impl PoolKind {
    pub const ALL: [PoolKind; 3] = [PoolKind::Mean, PoolKind::Max, PoolKind::Min];

    pub fn as_str(self) -> &'static str {
        match self {
            PoolKind::Mean => "mean",
            PoolKind::Max => "max",
            PoolKind::Min => "min",
        }
    }
}

impl fmt::Display for PoolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PoolKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mean" => Ok(PoolKind::Mean),
            "max" => Ok(PoolKind::Max),
            "min" => Ok(PoolKind::Min),
            other => Err(Error::InvalidArgument(format!("unknown pooling {other:?}"))),
        }
    }
}

/// Univariate coefficient applied to two pooled vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Coefficient {
    Cosine,
    Pearson,
    /// Pearson after winsorizing each vector at the given per-tail fraction.
    WinsorizedPearson(f64),
    Spearman,
    Kendall,
}

impl Coefficient {
    pub fn apply(self, x: &[f64], y: &[f64]) -> Result<f64> {
        match self {
            Coefficient::Cosine => univariate::cosine(x, y),
            Coefficient::Pearson => univariate::pearson(x, y),
            Coefficient::WinsorizedPearson(p) => univariate::winsorized_pearson(x, y, p),
            Coefficient::Spearman => univariate::spearman(x, y),
            Coefficient::Kendall => univariate::kendall_tau(x, y),
        }
    }

    /// Short id used in measure names (`cos`, `pearson`, `wpearson`, ...).
    pub fn id(self) -> &'static str {
        match self {
            Coefficient::Cosine => "cos",
            Coefficient::Pearson => "pearson",
            Coefficient::WinsorizedPearson(_) => "wpearson",
            Coefficient::Spearman => "spearman",
            Coefficient::Kendall => "kendall",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PooledVector {
    pub values: Vec<f64>,
    pub kind: PoolKind,
}

impl PooledVector {
    /// Arithmetic mean of the `D` pooled entries.
    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }
}

/// Column-wise mean, max or min over the words of `s`.
pub fn pool(s: &SentenceMatrix, kind: PoolKind) -> PooledVector {
    let mut rows = s.rows();
    let mut acc = rows.next().expect("sentence matrices are non-empty").to_vec();
    match kind {
        PoolKind::Mean => {
            for r in rows {
                acc.iter_mut().zip(r).for_each(|(a, &v)| *a += v);
            }
            let k = s.len() as f64;
            acc.iter_mut().for_each(|a| *a /= k);
        }
        PoolKind::Max => {
            for r in rows {
                acc.iter_mut().zip(r).for_each(|(a, &v)| {
                    if v > *a {
                        *a = v
                    }
                });
            }
        }
        PoolKind::Min => {
            for r in rows {
                acc.iter_mut().zip(r).for_each(|(a, &v)| {
                    if v < *a {
                        *a = v
                    }
                });
            }
        }
    }
    PooledVector { values: acc, kind }
}

/// `coeff(pool(s1, kind), pool(s2, kind))`. With `Max` and `Spearman` this is
/// the MaxPool-Spearman similarity.
pub fn pooled_similarity(
    s1: &SentenceMatrix,
    s2: &SentenceMatrix,
    kind: PoolKind,
    coeff: Coefficient,
) -> Result<f64> {
    if s1.dim() != s2.dim() {
        return Err(Error::DimensionMismatch {
            left: s1.dim(),
            right: s2.dim(),
        });
    }
    coeff.apply(&pool(s1, kind).values, &pool(s2, kind).values)
}

/// Mean of each sentence's pooled vector.
pub fn pooled_mean_distribution(sentences: &[SentenceMatrix], kind: PoolKind) -> Vec<f64> {
    sentences.iter().map(|s| pool(s, kind).mean()).collect()
}

/// Sample skewness of each sentence's pooled vector over its `D` entries.
/// Sentences whose pooled vector is constant are left out.
pub fn pooled_skewness_distribution(sentences: &[SentenceMatrix], kind: PoolKind) -> Vec<f64> {
    sentences
        .iter()
        .filter_map(|s| univariate::skewness(&pool(s, kind).values).ok())
        .collect()
}
