//! Stable string ids for every sentence similarity measure.
//!
//! Grammar: `<pool>-<coeff>` with pool in `mean|max|min` and coeff in
//! `cos|pearson|wpearson|spearman|kendall`; `cka-linear`, `cka-gaussian`,
//! `cka-dcor`; `ka-linear`.

use std::fmt;

use crate::embeddings::SentenceMatrix;
use crate::error::{Error, Result};
use crate::kernel::{self, Bandwidth, KernelKind};
use crate::pooling::{self, Coefficient, PoolKind};
use crate::univariate::DEFAULT_WINSOR;

const COEFFS: [&str; 5] = ["cos", "pearson", "wpearson", "spearman", "kendall"];
const KERNEL_MEASURES: [&str; 4] = ["cka-linear", "cka-gaussian", "cka-dcor", "ka-linear"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Measure {
    Pooled { pool: PoolKind, coeff: Coefficient },
    Cka(KernelKind),
    Ka(KernelKind),
}

impl Measure {
    /// Parses a registry id with the default winsorizing fraction.
    pub fn parse(id: &str) -> Result<Self> {
        Self::parse_with_winsor(id, DEFAULT_WINSOR)
    }

    pub fn parse_with_winsor(id: &str, winsor: f64) -> Result<Self> {
        let unknown = || Error::UnknownMeasure(id.to_owned());
        let (head, tail) = id.split_once('-').ok_or_else(unknown)?;
        match head {
            "cka" => match tail {
                "linear" => Ok(Measure::Cka(KernelKind::Linear)),
                "gaussian" => Ok(Measure::Cka(KernelKind::Gaussian)),
                "dcor" => Ok(Measure::Cka(KernelKind::Distance)),
                _ => Err(unknown()),
            },
            "ka" if tail == "linear" => Ok(Measure::Ka(KernelKind::Linear)),
            "mean" | "max" | "min" => {
                let pool: PoolKind = head.parse()?;
                let coeff = match tail {
                    "cos" => Coefficient::Cosine,
                    "pearson" => Coefficient::Pearson,
                    "wpearson" => {
                        if !(0.0..0.5).contains(&winsor) {
                            return Err(Error::InvalidArgument(format!(
                                "winsorizing fraction {winsor} outside [0, 0.5)"
                            )));
                        }
                        Coefficient::WinsorizedPearson(winsor)
                    }
                    "spearman" => Coefficient::Spearman,
                    "kendall" => Coefficient::Kendall,
                    _ => return Err(unknown()),
                };
                Ok(Measure::Pooled { pool, coeff })
            }
            _ => Err(unknown()),
        }
    }

    /// The registry id (the winsorizing fraction is not part of it).
    pub fn id(&self) -> String {
        match self {
            Measure::Pooled { pool, coeff } => format!("{}-{}", pool, coeff.id()),
            Measure::Cka(k) => format!("cka-{k}"),
            Measure::Ka(k) => format!("ka-{k}"),
        }
    }

    pub fn score(&self, s1: &SentenceMatrix, s2: &SentenceMatrix) -> Result<f64> {
        match *self {
            Measure::Pooled { pool, coeff } => pooling::pooled_similarity(s1, s2, pool, coeff),
            Measure::Cka(k) => kernel::cka(s1, s2, k, Bandwidth::Median),
            Measure::Ka(k) => kernel::ka(s1, s2, k, Bandwidth::Median),
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

/// Every registered measure id, pooled ones first.
pub fn registry() -> Vec<String> {
    let mut ids: Vec<String> = PoolKind::ALL
        .iter()
        .flat_map(|p| COEFFS.iter().map(move |c| format!("{p}-{c}")))
        .collect();
    ids.extend(KERNEL_MEASURES.iter().map(|s| s.to_string()));
    ids
}
