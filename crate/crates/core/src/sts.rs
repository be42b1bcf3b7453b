//! STS benchmark harness: dataset loading, scoring, Pearson-vs-gold,
//! per-year aggregation and the largest-discrepancy listing.
//!
//! Datasets use the SentEval layout: `<dir>/STS12-en-test/STS.input.<name>.txt`
//! holds tab-separated sentence pairs and `STS.gs.<name>.txt` the gold scores,
//! one per line (blank when absent).

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::embeddings::{self, EmbeddingStore, OovPolicy};
use crate::error::{Error, Result};
use crate::measure::Measure;
use crate::univariate;

/// Score given to pairs that cannot be scored (empty after OOV removal or a
/// degenerate sample). Such pairs are counted in `fallback_count`.
pub const FALLBACK_SCORE: f64 = 0.0;

/// Subtasks per STS year. The STS13 SMT subtask is not distributed and is
/// never part of an STS13 aggregate.
pub const STS_TASKS: [(&str, &[&str]); 5] = [
    ("STS12", &["MSRpar", "MSRvid", "SMTeuroparl", "surprise.OnWN", "surprise.SMTnews"]),
    ("STS13", &["FNWN", "headlines", "OnWN"]),
    ("STS14", &["deft-forum", "deft-news", "headlines", "images", "OnWN", "tweet-news"]),
    ("STS15", &["answers-forums", "answers-students", "belief", "headlines", "images"]),
    ("STS16", &["answer-answer", "headlines", "plagiarism", "postediting", "question-question"]),
];

const EXCLUDED_SUBTASKS: [&str; 1] = ["STS13/SMT"];

#[derive(Debug, Clone, PartialEq)]
pub struct SentencePair {
    pub sentence1: String,
    pub sentence2: String,
    pub gold: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StsDataset {
    pub subtask_id: String,
    pub pairs: Vec<SentencePair>,
}

impl StsDataset {
    /// Number of pairs with a gold score.
    pub fn scored_len(&self) -> usize {
        self.pairs.iter().filter(|p| p.gold.is_some()).count()
    }
}

fn read_lines(path: &Path) -> Result<Vec<String>> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(String::from_utf8_lossy(&bytes)
        .lines()
        .map(|l| l.trim_end_matches('\r').to_owned())
        .collect())
}

/// Reads one subtask from its input and gold files.
pub fn load_sts(subtask_id: &str, input_path: &Path, gs_path: &Path) -> Result<StsDataset> {
    let inputs = read_lines(input_path)?;
    let golds = read_lines(gs_path)?;
    if inputs.len() != golds.len() {
        return Err(Error::parse(
            gs_path,
            golds.len().min(inputs.len()) + 1,
            format!("{} input lines but {} gold lines", inputs.len(), golds.len()),
        ));
    }
    let mut pairs = Vec::with_capacity(inputs.len());
    for (i, (line, gs)) in inputs.iter().zip(&golds).enumerate() {
        let mut fields = line.split('\t');
        let (s1, s2) = match (fields.next(), fields.next()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::parse(input_path, i + 1, "expected two tab-separated sentences")),
        };
        let gs = gs.trim();
        let gold = if gs.is_empty() {
            None
        } else {
            let g: f64 = gs
                .parse()
                .map_err(|_| Error::parse(gs_path, i + 1, format!("cannot parse gold score {gs:?}")))?;
            if !(0.0..=5.0).contains(&g) {
                return Err(Error::parse(gs_path, i + 1, format!("gold score {g} outside [0, 5]")));
            }
            Some(g)
        };
        pairs.push(SentencePair {
            sentence1: s1.to_owned(),
            sentence2: s2.to_owned(),
            gold,
        });
    }
    Ok(StsDataset {
        subtask_id: subtask_id.to_owned(),
        pairs,
    })
}

/// Input and gold file locations for `year/name` under `root`.
///
/// Both `<root>/<year>-en-test/` (SentEval) and `<root>/<year>/` are accepted;
/// the first directory that holds the input file wins.
pub fn subtask_paths(root: &Path, year: &str, name: &str) -> (PathBuf, PathBuf) {
    let candidates = [root.join(format!("{year}-en-test")), root.join(year)];
    let dir = candidates
        .iter()
        .find(|d| d.join(format!("STS.input.{name}.txt")).is_file())
        .unwrap_or(&candidates[0]);
    (
        dir.join(format!("STS.input.{name}.txt")),
        dir.join(format!("STS.gs.{name}.txt")),
    )
}

/// Expands a task list such as `STS12,STS14/images` into `(year, name)` pairs.
pub fn expand_tasks(spec: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if item.eq_ignore_ascii_case("all") {
            for (year, names) in STS_TASKS {
                out.extend(names.iter().map(|n| (year.to_owned(), n.to_string())));
            }
            continue;
        }
        match item.split_once('/') {
            Some((year, name)) => out.push((year.to_owned(), name.to_owned())),
            None => {
                let (year, names) = STS_TASKS
                    .iter()
                    .find(|(y, _)| *y == item)
                    .ok_or_else(|| Error::InvalidArgument(format!("unknown STS year {item:?}")))?;
                out.extend(names.iter().map(|n| (year.to_string(), n.to_string())));
            }
        }
    }
    if out.is_empty() {
        return Err(Error::InvalidArgument("empty task list".into()));
    }
    Ok(out)
}

/// One scored sentence pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PairScore {
    /// Line index of the pair in the subtask files.
    pub index: usize,
    pub sentence1: String,
    pub sentence2: String,
    pub score: f64,
    pub gold: Option<f64>,
    pub fallback: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubtaskReport {
    pub subtask_id: String,
    pub pairs: Vec<PairScore>,
    /// Pearson correlation with gold, times 100; absent when undefined.
    pub pearson: Option<f64>,
    pub fallback_count: usize,
}

impl SubtaskReport {
    /// Builds a report from scored pairs, computing Pearson-vs-gold.
    pub fn from_pairs(subtask_id: impl Into<String>, pairs: Vec<PairScore>) -> Self {
        let subtask_id = subtask_id.into();
        let fallback_count = pairs.iter().filter(|p| p.fallback).count();
        let pearson = pearson_vs_gold(&pairs);
        if pearson.is_none() {
            log::warn!("{subtask_id}: Pearson correlation with gold is undefined");
        }
        Self {
            subtask_id,
            pairs,
            pearson,
            fallback_count,
        }
    }

    pub fn year(&self) -> &str {
        year_of(&self.subtask_id)
    }

    /// `(system score, gold)` for every pair with a gold score.
    pub fn scored(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.pairs.iter().filter_map(|p| p.gold.map(|g| (p.score, g)))
    }
}

fn year_of(subtask_id: &str) -> &str {
    subtask_id.split_once('/').map_or(subtask_id, |(y, _)| y)
}

/// Pearson between system scores and gold times 100, over pairs with gold.
/// Undefined below three such pairs or when either side is constant.
pub fn pearson_vs_gold(pairs: &[PairScore]) -> Option<f64> {
    let (sys, gold): (Vec<f64>, Vec<f64>) = pairs.iter().filter_map(|p| p.gold.map(|g| (p.score, g))).unzip();
    if sys.len() < 3 {
        return None;
    }
    univariate::pearson(&sys, &gold).ok().map(|r| 100.0 * r)
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ScoreOptions {
    pub oov: OovPolicy,
}

/// Scores every pair of `d` with `measure`.
///
/// Pairs run in parallel on the current rayon pool; results are assembled by
/// pair index, so the report does not depend on the thread count.
pub fn score_dataset(
    d: &StsDataset,
    store: &EmbeddingStore,
    measure: &Measure,
    opts: ScoreOptions,
) -> Result<SubtaskReport> {
    let pairs = d
        .pairs
        .par_iter()
        .enumerate()
        .map(|(index, p)| {
            let score = score_sentences(store, measure, &p.sentence1, &p.sentence2, opts.oov)?;
            Ok(PairScore {
                index,
                sentence1: p.sentence1.clone(),
                sentence2: p.sentence2.clone(),
                score: score.unwrap_or(FALLBACK_SCORE),
                gold: p.gold,
                fallback: score.is_none(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SubtaskReport::from_pairs(d.subtask_id.clone(), pairs))
}

/// Similarity of two raw sentences, or `None` when the pair is unscorable.
/// Only the `OovPolicy::Fail` check surfaces as an error.
pub fn score_sentences(
    store: &EmbeddingStore,
    measure: &Measure,
    s1: &str,
    s2: &str,
    oov: OovPolicy,
) -> Result<Option<f64>> {
    let m1 = embeddings::sentence_matrix_with(store, &embeddings::tokenize(s1), oov);
    let m2 = embeddings::sentence_matrix_with(store, &embeddings::tokenize(s2), oov);
    let (m1, m2) = match (m1, m2) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e @ Error::OutOfVocabulary(_)), _) | (_, Err(e @ Error::OutOfVocabulary(_))) => return Err(e),
        _ => return Ok(None),
    };
    match measure.score(&m1, &m2) {
        Ok(v) if v.is_finite() => Ok(Some(v)),
        Ok(_) | Err(Error::DegenerateSample(_)) | Err(Error::DegenerateBandwidth) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Unweighted mean of the defined subtask Pearsons, skipping excluded
/// subtasks (STS13 SMT). `None` when no subtask qualifies.
pub fn aggregate_year<'a>(reports: impl IntoIterator<Item = &'a SubtaskReport>) -> Option<f64> {
    let vals: Vec<f64> = reports
        .into_iter()
        .filter(|r| !EXCLUDED_SUBTASKS.contains(&r.subtask_id.as_str()))
        .filter_map(|r| r.pearson)
        .collect();
    if vals.is_empty() {
        None
    } else {
        Some(vals.iter().sum::<f64>() / vals.len() as f64)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct YearMean {
    pub year: String,
    pub mean: Option<f64>,
    pub subtasks: usize,
}

/// A full evaluation run: one measure over several subtasks.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub measure_id: String,
    pub embeddings_id: String,
    pub config_hash: String,
    pub subtasks: Vec<SubtaskReport>,
    pub years: Vec<YearMean>,
}

impl EvalReport {
    /// Assembles a report and its per-year means (years in first-seen order).
    pub fn new(
        measure_id: impl Into<String>,
        embeddings_id: impl Into<String>,
        config_hash: impl Into<String>,
        subtasks: Vec<SubtaskReport>,
    ) -> Self {
        let mut years: Vec<String> = Vec::new();
        for s in &subtasks {
            if !years.iter().any(|y| y == s.year()) {
                years.push(s.year().to_owned());
            }
        }
        let years = years
            .into_iter()
            .map(|year| {
                let members: Vec<&SubtaskReport> = subtasks
                    .iter()
                    .filter(|s| s.year() == year && !EXCLUDED_SUBTASKS.contains(&s.subtask_id.as_str()))
                    .collect();
                YearMean {
                    mean: aggregate_year(members.iter().copied()),
                    subtasks: members.len(),
                    year,
                }
            })
            .collect();
        Self {
            measure_id: measure_id.into(),
            embeddings_id: embeddings_id.into(),
            config_hash: config_hash.into(),
            subtasks,
            years,
        }
    }

    pub fn subtask(&self, id: &str) -> Option<&SubtaskReport> {
        self.subtasks.iter().find(|s| s.subtask_id == id)
    }
}

/// Short digest of the settings that determine the scores.
pub fn config_hash(measure_id: &str, winsor: f64, oov: OovPolicy, embeddings_id: &str) -> String {
    let canonical = format!(
        "measure={measure_id};winsor={winsor:?};oov={oov:?};tokenizer=lower-ws-punct;embeddings={embeddings_id}"
    );
    let digest = Sha256::digest(canonical.as_bytes());
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Discrepancy {
    pub index: usize,
    pub sentence1: String,
    pub sentence2: String,
    pub gold: f64,
    /// System score mapped linearly onto `[0, 5]`.
    pub system: f64,
    /// `gold - system`
    pub delta: f64,
}

/// The `n` pairs with the largest `|gold - rescaled score|`.
///
/// System scores of the pairs with gold are min-max rescaled to `[0, 5]`, an
/// increasing affine map that leaves Pearson unchanged. Ties in `|delta|` go
/// to the lower pair index.
pub fn top_discrepancies(report: &SubtaskReport, n: usize) -> Result<Vec<Discrepancy>> {
    let scored: Vec<&PairScore> = report.pairs.iter().filter(|p| p.gold.is_some()).collect();
    if scored.len() < 2 {
        return Err(Error::DegenerateSample("need at least two scored pairs to rescale"));
    }
    let lo = scored.iter().map(|p| p.score).fold(f64::INFINITY, f64::min);
    let hi = scored.iter().map(|p| p.score).fold(f64::NEG_INFINITY, f64::max);
    if hi <= lo {
        return Err(Error::DegenerateSample("all system scores are equal; cannot rescale"));
    }
    let mut rows: Vec<Discrepancy> = scored
        .iter()
        .map(|p| {
            let gold = p.gold.expect("filtered above");
            let system = rescale(p.score, lo, hi);
            Discrepancy {
                index: p.index,
                sentence1: p.sentence1.clone(),
                sentence2: p.sentence2.clone(),
                gold,
                system,
                delta: gold - system,
            }
        })
        .collect();
    rows.sort_by(|a, b| b.delta.abs().total_cmp(&a.delta.abs()).then(a.index.cmp(&b.index)));
    rows.truncate(n);
    Ok(rows)
}

/// `5 (s - lo) / (hi - lo)`
pub fn rescale(s: f64, lo: f64, hi: f64) -> f64 {
    5.0 * (s - lo) / (hi - lo)
}
