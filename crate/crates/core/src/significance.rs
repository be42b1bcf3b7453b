//! BCa bootstrap confidence intervals for the difference between two
//! systems' Pearson-vs-gold on the same subtask.
//!
//! Resampling draws pair indices with replacement. Replicate `r` uses its own
//! ChaCha8 stream: `ChaCha8Rng::seed_from_u64(seed)` with `set_stream(r)`.
//! Indices are drawn as `u32` in `0..M`. The replicate distribution therefore
//! depends only on `(scores, B, seed)`, not on thread count or batching, and
//! swapping the two systems reuses the same index streams.
//!
//! Conventions:
//! * `z0 = Phi^-1((#{delta* < delta_hat} + #{delta* = delta_hat} / 2) / B)`:
//!   strictly less, with exact ties counted one half. A proportion of 0 or 1
//!   is clamped to `1/(2B)` or `1 - 1/(2B)`.
//! * Acceleration from the jackknife: `a = sum(d^3) / (6 (sum d^2)^1.5)` with
//!   `d_i = mean(delta_(.)) - delta_(i)`.
//! * Endpoints are linearly interpolated quantiles (`h = (B - 1) q`) of the
//!   sorted replicates at the BCa-adjusted levels.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::sts::SubtaskReport;
use crate::univariate;

pub const DEFAULT_REPLICATES: usize = 10_000;
pub const MIN_REPLICATES: usize = 1_000;
pub const DEFAULT_LEVEL: f64 = 0.95;
/// Redraws allowed per replicate when a resample has a degenerate Pearson.
pub const MAX_REDRAWS: usize = 100;
const BATCH: usize = 256;

/// Gold scores with two systems' scores over the same pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct PairedScores {
    pub subtask_id: String,
    pub gold: Vec<f64>,
    pub sys_a: Vec<f64>,
    pub sys_b: Vec<f64>,
}

impl PairedScores {
    pub fn new(subtask_id: impl Into<String>, gold: Vec<f64>, sys_a: Vec<f64>, sys_b: Vec<f64>) -> Result<Self> {
        if gold.len() != sys_a.len() || gold.len() != sys_b.len() {
            return Err(Error::DimensionMismatch {
                left: gold.len(),
                right: sys_a.len().max(sys_b.len()),
            });
        }
        if gold.len() < 3 {
            return Err(Error::DegenerateSample("need at least three scored pairs"));
        }
        if gold.iter().chain(&sys_a).chain(&sys_b).any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("scores must be finite".into()));
        }
        Ok(Self {
            subtask_id: subtask_id.into(),
            gold,
            sys_a,
            sys_b,
        })
    }

    /// Pairs the gold-scored pairs of two reports over the identical dataset.
    pub fn from_reports(a: &SubtaskReport, b: &SubtaskReport) -> Result<Self> {
        if a.subtask_id != b.subtask_id {
            return Err(Error::ReportMismatch(format!("subtasks {} and {}", a.subtask_id, b.subtask_id)));
        }
        if a.pairs.len() != b.pairs.len() {
            return Err(Error::ReportMismatch(format!(
                "{}: {} pairs vs {}",
                a.subtask_id,
                a.pairs.len(),
                b.pairs.len()
            )));
        }
        let (mut gold, mut sa, mut sb) = (Vec::new(), Vec::new(), Vec::new());
        for (pa, pb) in a.pairs.iter().zip(&b.pairs) {
            if pa.index != pb.index || pa.gold != pb.gold {
                return Err(Error::ReportMismatch(format!(
                    "{}: gold differs at pair {}",
                    a.subtask_id, pa.index
                )));
            }
            if let Some(g) = pa.gold {
                gold.push(g);
                sa.push(pa.score);
                sb.push(pb.score);
            }
        }
        Self::new(a.subtask_id.clone(), gold, sa, sb)
    }

    pub fn len(&self) -> usize {
        self.gold.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gold.is_empty()
    }

    /// The same scores with the two systems exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            subtask_id: self.subtask_id.clone(),
            gold: self.gold.clone(),
            sys_a: self.sys_b.clone(),
            sys_b: self.sys_a.clone(),
        }
    }
}

/// `100 * (pearson(a, gold) - pearson(b, gold))` over `indices`.
pub fn delta_statistic(p: &PairedScores, indices: &[usize]) -> Result<f64> {
    let mut g = Vec::with_capacity(indices.len());
    let mut a = Vec::with_capacity(indices.len());
    let mut b = Vec::with_capacity(indices.len());
    for &i in indices {
        g.push(p.gold[i]);
        a.push(p.sys_a[i]);
        b.push(p.sys_b[i]);
    }
    delta_of(&g, &a, &b)
}

fn delta_of(g: &[f64], a: &[f64], b: &[f64]) -> Result<f64> {
    let ra = univariate::pearson(a, g)?;
    let rb = univariate::pearson(b, g)?;
    Ok(100.0 * (ra - rb))
}

/// Which system the interval favours.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    A,
    B,
    Tie,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::A => "a",
            Verdict::B => "b",
            Verdict::Tie => "tie",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfidenceInterval {
    pub lower: f64,
    pub upper: f64,
    pub level: f64,
    pub delta_hat: f64,
    pub replicates: usize,
    pub seed: u64,
    pub z0: f64,
    pub acceleration: f64,
    /// All replicates were identical; the interval collapses to `delta_hat`.
    pub degenerate: bool,
    /// Every replicate fell on one side of `delta_hat` and `z0` was clamped.
    pub z0_clamped: bool,
}

impl ConfidenceInterval {
    /// Tie when the interval contains 0, otherwise the sign of `delta_hat`.
    pub fn verdict(&self) -> Verdict {
        if self.lower <= 0.0 && 0.0 <= self.upper {
            Verdict::Tie
        } else if self.delta_hat > 0.0 {
            Verdict::A
        } else {
            Verdict::B
        }
    }
}

fn std_normal() -> Normal {
    Normal::new(0.0, 1.0).expect("unit normal")
}

/// Linear-interpolation quantile of sorted data.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = (n - 1) as f64 * q.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    if lo + 1 >= n {
        return sorted[n - 1];
    }
    let frac = h - lo as f64;
    sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
}

/// BCa-adjusted quantile levels `(alpha_lo, alpha_hi)` for a two-sided
/// interval at `level` given bias correction `z0` and acceleration `a`.
pub fn bca_levels(z0: f64, a: f64, level: f64) -> (f64, f64) {
    let normal = std_normal();
    let tail = (1.0 - level) / 2.0;
    let adjust = |q: f64, fallback: f64| {
        let z = normal.inverse_cdf(q);
        let denom = 1.0 - a * (z0 + z);
        if denom <= 0.0 {
            fallback
        } else {
            normal.cdf(z0 + (z0 + z) / denom)
        }
    };
    (adjust(tail, 0.0), adjust(1.0 - tail, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BcaEndpoints {
    pub lower: f64,
    pub upper: f64,
    pub z0: f64,
    pub z0_clamped: bool,
}

/// BCa endpoints from a replicate sample, the full-sample statistic and the
/// acceleration constant.
pub fn bca_from_replicates(replicates: &[f64], delta_hat: f64, acceleration: f64, level: f64) -> BcaEndpoints {
    let b = replicates.len() as f64;
    // Exact ties count one half so that swapping the systems mirrors z0.
    let below = replicates.iter().filter(|&&v| v < delta_hat).count() as f64;
    let ties = replicates.iter().filter(|&&v| v == delta_hat).count() as f64;
    let mut prop = (below + 0.5 * ties) / b;
    let mut clamped = false;
    if prop <= 0.0 || prop >= 1.0 {
        prop = prop.clamp(0.5 / b, 1.0 - 0.5 / b);
        clamped = true;
    }
    let z0 = std_normal().inverse_cdf(prop);
    let (lo_q, hi_q) = bca_levels(z0, acceleration, level);
    let mut sorted = replicates.to_vec();
    sorted.sort_by(f64::total_cmp);
    BcaEndpoints {
        lower: quantile_sorted(&sorted, lo_q),
        upper: quantile_sorted(&sorted, hi_q),
        z0,
        z0_clamped: clamped,
    }
}

/// Jackknife acceleration from leave-one-out statistics.
pub fn jackknife_acceleration(loo: &[f64]) -> f64 {
    let mean = loo.iter().sum::<f64>() / loo.len() as f64;
    let (mut s2, mut s3) = (0.0, 0.0);
    for &v in loo {
        let d = mean - v;
        s2 += d * d;
        s3 += d * d * d;
    }
    if s2 == 0.0 {
        0.0
    } else {
        s3 / (6.0 * s2.powf(1.5))
    }
}

fn leave_one_out(p: &PairedScores) -> Result<Vec<f64>> {
    let m = p.len();
    let mut g = Vec::with_capacity(m - 1);
    let mut a = Vec::with_capacity(m - 1);
    let mut b = Vec::with_capacity(m - 1);
    (0..m)
        .map(|skip| {
            g.clear();
            a.clear();
            b.clear();
            for i in (0..m).filter(|&i| i != skip) {
                g.push(p.gold[i]);
                a.push(p.sys_a[i]);
                b.push(p.sys_b[i]);
            }
            delta_of(&g, &a, &b)
        })
        .collect()
}

/// Replicate `r` of the bootstrap distribution of the delta.
fn replicate(p: &PairedScores, seed: u64, r: usize, buf: &mut [Vec<f64>; 3]) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(r as u64);
    let m = p.len() as u32;
    for _ in 0..MAX_REDRAWS {
        for v in buf.iter_mut() {
            v.clear();
        }
        for _ in 0..m {
            let i = rng.random_range(0..m) as usize;
            buf[0].push(p.gold[i]);
            buf[1].push(p.sys_a[i]);
            buf[2].push(p.sys_b[i]);
        }
        match delta_of(&buf[0], &buf[1], &buf[2]) {
            Ok(v) => return Ok(v),
            Err(Error::DegenerateSample(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::DegenerateSample("bootstrap resamples keep producing undefined correlations"))
}

/// All `b` bootstrap replicates of the delta, in replicate order.
pub fn bootstrap_replicates(p: &PairedScores, b: usize, seed: u64) -> Result<Vec<f64>> {
    let batches: Vec<Vec<f64>> = (0..b.div_ceil(BATCH))
        .into_par_iter()
        .map(|batch| {
            let mut buf: [Vec<f64>; 3] = Default::default();
            let end = ((batch + 1) * BATCH).min(b);
            (batch * BATCH..end).map(|r| replicate(p, seed, r, &mut buf)).collect()
        })
        .collect::<Result<_>>()?;
    Ok(batches.concat())
}

/// BCa interval for `delta_statistic` at `level` with `replicates` resamples.
pub fn bca_interval(p: &PairedScores, level: f64, replicates: usize, seed: u64) -> Result<ConfidenceInterval> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidArgument(format!("confidence level {level} outside (0, 1)")));
    }
    if replicates < MIN_REPLICATES {
        return Err(Error::InvalidArgument(format!(
            "need at least {MIN_REPLICATES} bootstrap replicates, got {replicates}"
        )));
    }
    if p.len() < 10 {
        log::warn!("{}: only {} scored pairs; BCa intervals are unreliable", p.subtask_id, p.len());
    }
    let all: Vec<usize> = (0..p.len()).collect();
    let delta_hat = delta_statistic(p, &all)?;
    let reps = bootstrap_replicates(p, replicates, seed)?;

    let mut ci = ConfidenceInterval {
        lower: delta_hat,
        upper: delta_hat,
        level,
        delta_hat,
        replicates,
        seed,
        z0: 0.0,
        acceleration: 0.0,
        degenerate: false,
        z0_clamped: false,
    };
    if reps.iter().all(|&v| v == reps[0]) {
        log::warn!("{}: all bootstrap replicates are identical", p.subtask_id);
        ci.degenerate = true;
        return Ok(ci);
    }

    ci.acceleration = jackknife_acceleration(&leave_one_out(p)?);
    let ends = bca_from_replicates(&reps, delta_hat, ci.acceleration, level);
    if ends.z0_clamped {
        log::warn!("{}: all replicates on one side of the estimate; z0 clamped", p.subtask_id);
    }
    ci.lower = ends.lower;
    ci.upper = ends.upper;
    ci.z0 = ends.z0;
    ci.z0_clamped = ends.z0_clamped;
    Ok(ci)
}
