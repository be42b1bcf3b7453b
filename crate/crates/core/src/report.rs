//! Plain-text serialization of [`EvalReport`].
//!
//! Every line is tab-separated with a key in the first field:
//!
//! ```text
//! format          corrsim-report/1
//! measure_id      <id>
//! embeddings_id   <file name>
//! config_hash     <16 hex digits>
//! subtask         <year/name>
//! pairs           <count>
//! fallback_count  <count>
//! pearson         <r x 100 | NA>
//! pair            <index> <score> <gold | NA> <fallback 0|1> <sentence1> <sentence2>
//! end_subtask
//! year            <year> <mean | NA> <subtask count>
//! ```
//!
//! Reals are written with 17 significant digits (`{:.16e}`), which round-trips
//! every `f64` exactly. Lines starting with `#` are comments.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::sts::{EvalReport, PairScore, SubtaskReport, YearMean};

pub const FORMAT_TAG: &str = "corrsim-report/1";

/// 17 significant digits.
pub fn fmt_real(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_owned(), fmt_real)
}

pub fn to_string(r: &EvalReport) -> String {
    let mut out = String::new();
    out.push_str("# corrsim evaluation report\n");
    let _ = writeln!(out, "format\t{FORMAT_TAG}");
    let _ = writeln!(out, "measure_id\t{}", r.measure_id);
    let _ = writeln!(out, "embeddings_id\t{}", r.embeddings_id);
    let _ = writeln!(out, "config_hash\t{}", r.config_hash);
    for s in &r.subtasks {
        let _ = writeln!(out, "subtask\t{}", s.subtask_id);
        let _ = writeln!(out, "pairs\t{}", s.pairs.len());
        let _ = writeln!(out, "fallback_count\t{}", s.fallback_count);
        let _ = writeln!(out, "pearson\t{}", fmt_opt(s.pearson));
        for p in &s.pairs {
            let _ = writeln!(
                out,
                "pair\t{}\t{}\t{}\t{}\t{}\t{}",
                p.index,
                fmt_real(p.score),
                fmt_opt(p.gold),
                u8::from(p.fallback),
                clean(&p.sentence1),
                clean(&p.sentence2),
            );
        }
        out.push_str("end_subtask\n");
    }
    for y in &r.years {
        let _ = writeln!(out, "year\t{}\t{}\t{}", y.year, fmt_opt(y.mean), y.subtasks);
    }
    out
}

fn clean(s: &str) -> String {
    s.replace(['\t', '\n', '\r'], " ")
}

pub fn write(r: &EvalReport, path: &Path) -> Result<()> {
    fs::write(path, to_string(r)).map_err(|e| Error::io(path, e))
}

pub fn read(path: &Path) -> Result<EvalReport> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse(&text, path)
}

struct Builder {
    id: String,
    declared_pairs: usize,
    pairs: Vec<PairScore>,
    fallback_count: usize,
    pearson: Option<f64>,
}

/// Parses report text; `path` is only used in error messages.
pub fn parse(text: &str, path: &Path) -> Result<EvalReport> {
    let mut measure_id = None;
    let mut embeddings_id = None;
    let mut config_hash = None;
    let mut seen_format = false;
    let mut subtasks = Vec::new();
    let mut years = Vec::new();
    let mut current: Option<Builder> = None;

    for (i, line) in text.lines().enumerate() {
        let ln = i + 1;
        let err = |m: String| Error::parse(path, ln, m);
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let want = |n: usize| -> Result<()> {
            if fields.len() == n {
                Ok(())
            } else {
                Err(Error::parse(path, ln, format!("{:?} expects {} fields, found {}", fields[0], n, fields.len())))
            }
        };
        let real = |s: &str| -> Result<f64> {
            s.parse::<f64>().map_err(|_| Error::parse(path, ln, format!("bad number {s:?}")))
        };
        let opt_real = |s: &str| -> Result<Option<f64>> { if s == "NA" { Ok(None) } else { real(s).map(Some) } };
        let count = |s: &str| -> Result<usize> {
            s.parse::<usize>().map_err(|_| Error::parse(path, ln, format!("bad count {s:?}")))
        };

        match fields[0] {
            "format" => {
                want(2)?;
                if fields[1] != FORMAT_TAG {
                    return Err(err(format!("unsupported format {:?}", fields[1])));
                }
                seen_format = true;
            }
            "measure_id" => {
                want(2)?;
                measure_id = Some(fields[1].to_owned());
            }
            "embeddings_id" => {
                want(2)?;
                embeddings_id = Some(fields[1].to_owned());
            }
            "config_hash" => {
                want(2)?;
                config_hash = Some(fields[1].to_owned());
            }
            "subtask" => {
                want(2)?;
                if current.is_some() {
                    return Err(err("subtask opened before end_subtask".into()));
                }
                current = Some(Builder {
                    id: fields[1].to_owned(),
                    declared_pairs: 0,
                    pairs: Vec::new(),
                    fallback_count: 0,
                    pearson: None,
                });
            }
            key @ ("pairs" | "fallback_count" | "pearson" | "pair") => {
                let b = current.as_mut().ok_or_else(|| err(format!("{key:?} outside a subtask")))?;
                match key {
                    "pairs" => {
                        want(2)?;
                        b.declared_pairs = count(fields[1])?;
                    }
                    "fallback_count" => {
                        want(2)?;
                        b.fallback_count = count(fields[1])?;
                    }
                    "pearson" => {
                        want(2)?;
                        b.pearson = opt_real(fields[1])?;
                    }
                    _ => {
                        want(7)?;
                        b.pairs.push(PairScore {
                            index: count(fields[1])?,
                            score: real(fields[2])?,
                            gold: opt_real(fields[3])?,
                            fallback: match fields[4] {
                                "0" => false,
                                "1" => true,
                                other => return Err(err(format!("bad fallback flag {other:?}"))),
                            },
                            sentence1: fields[5].to_owned(),
                            sentence2: fields[6].to_owned(),
                        });
                    }
                }
            }
            "end_subtask" => {
                let b = current.take().ok_or_else(|| err("end_subtask without subtask".into()))?;
                if b.pairs.len() != b.declared_pairs {
                    return Err(err(format!(
                        "subtask {} declares {} pairs but lists {}",
                        b.id,
                        b.declared_pairs,
                        b.pairs.len()
                    )));
                }
                subtasks.push(SubtaskReport {
                    subtask_id: b.id,
                    pairs: b.pairs,
                    pearson: b.pearson,
                    fallback_count: b.fallback_count,
                });
            }
            "year" => {
                want(4)?;
                years.push(YearMean {
                    year: fields[1].to_owned(),
                    mean: opt_real(fields[2])?,
                    subtasks: count(fields[3])?,
                });
            }
            other => return Err(err(format!("unknown key {other:?}"))),
        }
    }

    let last = text.lines().count();
    if current.is_some() {
        return Err(Error::parse(path, last, "unterminated subtask"));
    }
    if !seen_format {
        return Err(Error::parse(path, 1, "missing format line"));
    }
    let missing = |k: &str| Error::parse(path, last, format!("missing {k}"));
    Ok(EvalReport {
        measure_id: measure_id.ok_or_else(|| missing("measure_id"))?,
        embeddings_id: embeddings_id.ok_or_else(|| missing("embeddings_id"))?,
        config_hash: config_hash.ok_or_else(|| missing("config_hash"))?,
        subtasks,
        years,
    })
}
