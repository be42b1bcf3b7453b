//! Word-embedding tables and sentence matrices.
//!
//! Two plain-text formats are read:
//!
//! * `glove-text`: one token followed by `D` space-separated decimals per line.
//! * `word2vec-text`: a `N D` header line, then rows as above.
//!
//! Values are held as `f64`. A [`SentenceMatrix`] is the `k x D` stack of the
//! vectors of the in-vocabulary tokens of one sentence, in sentence order.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EmbeddingFormat {
    Word2VecText,
    GloveText,
    #[default]
    Auto,
}

impl FromStr for EmbeddingFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "word2vec-text" | "word2vec" => Ok(Self::Word2VecText),
            "glove-text" | "glove" => Ok(Self::GloveText),
            "auto" => Ok(Self::Auto),
            other => Err(Error::InvalidArgument(format!(
                "unknown embedding format {other:?} (expected word2vec-text, glove-text or auto)"
            ))),
        }
    }
}

impl fmt::Display for EmbeddingFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Word2VecText => "word2vec-text",
            Self::GloveText => "glove-text",
            Self::Auto => "auto",
        })
    }
}

/// Immutable vocabulary to vector table.
#[derive(Debug, Clone)]
pub struct EmbeddingStore {
    dim: usize,
    tokens: Vec<String>,
    index: HashMap<String, usize>,
    data: Vec<f64>,
    duplicates_skipped: usize,
}

impl EmbeddingStore {
    /// Builds a store from in-memory rows. Duplicate tokens keep their first row.
    pub fn from_rows<I, S>(dim: usize, rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, Vec<f64>)>,
        S: Into<String>,
    {
        if dim == 0 {
            return Err(Error::InvalidArgument("embedding dimension must be positive".into()));
        }
        let mut store = Self::empty(dim);
        for (token, values) in rows {
            if values.len() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: values.len(),
                });
            }
            if values.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidArgument("embedding rows must be finite".into()));
            }
            store.push(token.into(), &values);
        }
        Ok(store)
    }

    fn empty(dim: usize) -> Self {
        Self {
            dim,
            tokens: Vec::new(),
            index: HashMap::new(),
            data: Vec::new(),
            duplicates_skipped: 0,
        }
    }

    fn push(&mut self, token: String, values: &[f64]) {
        if self.index.contains_key(&token) {
            self.duplicates_skipped += 1;
            return;
        }
        self.index.insert(token.clone(), self.tokens.len());
        self.tokens.push(token);
        self.data.extend_from_slice(values);
    }

    /// Loads an embedding file, optionally keeping only tokens in `vocab_filter`.
    pub fn load(
        path: impl AsRef<Path>,
        format: EmbeddingFormat,
        vocab_filter: Option<&HashSet<String>>,
    ) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Self::from_reader(BufReader::new(file), path, format, vocab_filter)
    }

    /// Parses embeddings from any buffered reader; `path` is only used in messages.
    pub fn from_reader<R: BufRead>(
        reader: R,
        path: &Path,
        format: EmbeddingFormat,
        vocab_filter: Option<&HashSet<String>>,
    ) -> Result<Self> {
        let mut lines = reader.lines().enumerate().peekable();
        let mut header: Option<(usize, usize)> = None;

        if let Some((_, Ok(first))) = lines.peek() {
            let parsed = parse_header(first);
            match (format, parsed) {
                (EmbeddingFormat::Word2VecText, Some(h)) | (EmbeddingFormat::Auto, Some(h)) => {
                    header = Some(h);
                    lines.next();
                }
                (EmbeddingFormat::Word2VecText, None) => {
                    return Err(Error::parse(path, 1, "expected a \"N D\" header line"));
                }
                _ => {}
            }
        }

        let mut store: Option<EmbeddingStore> = header.map(|(_, d)| Self::empty(d));
        let mut rows_seen = 0usize;
        let mut values = Vec::new();

        for (idx, line) in lines {
            let line_no = idx + 1;
            let line = line.map_err(|e| Error::io(path, e))?;
            let line = line.trim_end_matches(['\r', '\n']);
            if line.trim().is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            let token = fields.next().expect("non-empty line has a first field");
            let keep = vocab_filter.is_none_or(|f| f.contains(token));

            values.clear();
            if keep {
                for field in fields {
                    let v: f64 = field.parse().map_err(|_| {
                        Error::parse(path, line_no, format!("cannot parse {field:?} as a number"))
                    })?;
                    if !v.is_finite() {
                        return Err(Error::parse(path, line_no, format!("non-finite value {field:?}")));
                    }
                    values.push(v);
                }
            } else {
                values.resize(fields.count(), 0.0);
            }

            let dim = match &store {
                Some(s) => s.dim,
                None => {
                    if values.is_empty() {
                        return Err(Error::parse(path, line_no, "row has no values"));
                    }
                    store = Some(Self::empty(values.len()));
                    values.len()
                }
            };
            if values.len() != dim {
                return Err(Error::parse(
                    path,
                    line_no,
                    format!("expected {dim} values, found {}", values.len()),
                ));
            }
            rows_seen += 1;
            if keep {
                store.as_mut().expect("initialised above").push(token.to_owned(), &values);
            }
        }

        if let Some((n, _)) = header {
            if n != rows_seen {
                log::warn!("{}: header announces {n} rows, file has {rows_seen}", path.display());
            }
        }
        let store = match store {
            Some(s) if !s.is_empty() => s,
            _ => return Err(Error::EmptyStore(path.to_path_buf())),
        };
        if store.duplicates_skipped > 0 {
            log::warn!(
                "{}: skipped {} duplicate token(s), first occurrence kept",
                path.display(),
                store.duplicates_skipped
            );
        }
        Ok(store)
    }

    /// Writes the table in glove-text format using shortest round-trip decimals.
    pub fn write_glove<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for (token, row) in self.iter() {
            out.write_all(token.as_bytes())?;
            for v in row {
                write!(out, " {v}")?;
            }
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn duplicates_skipped(&self) -> usize {
        self.duplicates_skipped
    }

    pub fn contains(&self, token: &str) -> bool {
        self.index.contains_key(token)
    }

    pub fn get(&self, token: &str) -> Option<&[f64]> {
        self.index.get(token).map(|&i| self.row(i))
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    /// Tokens and their vectors, in load order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &[f64])> + '_ {
        self.tokens
            .iter()
            .zip(self.data.chunks_exact(self.dim))
            .map(|(t, r)| (t.as_str(), r))
    }
}

fn parse_header(line: &str) -> Option<(usize, usize)> {
    let mut fields = line.split_whitespace();
    let n = fields.next()?.parse().ok()?;
    let d: usize = fields.next()?.parse().ok()?;
    if fields.next().is_some() || d == 0 {
        return None;
    }
    Some((n, d))
}

/// Lowercases, splits on Unicode whitespace and strips leading/trailing ASCII
/// punctuation from each token. Tokens that become empty are dropped.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split_whitespace()
        .map(|t| t.trim_matches(|c: char| c.is_ascii_punctuation()))
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

/// What to do with tokens missing from the embedding table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OovPolicy {
    #[default]
    Drop,
    Fail,
}

impl FromStr for OovPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "drop" => Ok(Self::Drop),
            "fail" => Ok(Self::Fail),
            other => Err(Error::InvalidArgument(format!("unknown OOV policy {other:?}"))),
        }
    }
}

/// Row-major `k x D` matrix of the word vectors of one sentence.
#[derive(Debug, Clone, PartialEq)]
pub struct SentenceMatrix {
    dim: usize,
    data: Vec<f64>,
    tokens: Vec<String>,
}

impl SentenceMatrix {
    /// Builds a matrix directly from rows. Tokens are left empty.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let first = rows.first().ok_or(Error::EmptySentence)?;
        let dim = first.len();
        if dim == 0 {
            return Err(Error::InvalidArgument("word vectors must be non-empty".into()));
        }
        let mut data = Vec::with_capacity(rows.len() * dim);
        for r in rows {
            if r.len() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: r.len(),
                });
            }
            if r.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidArgument("word vectors must be finite".into()));
            }
            data.extend_from_slice(r);
        }
        Ok(Self {
            dim,
            data,
            tokens: Vec::new(),
        })
    }

    /// Builds a matrix from a flat row-major buffer of `k * dim` values.
    pub fn from_flat(dim: usize, data: Vec<f64>) -> Result<Self> {
        if dim == 0 || data.is_empty() || !data.len().is_multiple_of(dim) {
            return Err(Error::InvalidArgument(format!(
                "buffer of {} values is not a non-empty multiple of {dim}",
                data.len()
            )));
        }
        Ok(Self {
            dim,
            data,
            tokens: Vec::new(),
        })
    }

    /// Number of words `k`.
    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.data.chunks_exact(self.dim)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    /// A copy with every entry multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|v| v * c).collect(),
            tokens: self.tokens.clone(),
        }
    }

    /// A copy with rows reordered so that row `i` is `self.row(order[i])`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        let mut tokens = Vec::new();
        for &i in order {
            data.extend_from_slice(self.row(i));
            if let Some(t) = self.tokens.get(i) {
                tokens.push(t.clone());
            }
        }
        Self {
            dim: self.dim,
            data,
            tokens,
        }
    }
}

/// Stacks the vectors of the in-vocabulary tokens, dropping the rest.
pub fn sentence_matrix<S: AsRef<str>>(store: &EmbeddingStore, tokens: &[S]) -> Result<SentenceMatrix> {
    sentence_matrix_with(store, tokens, OovPolicy::Drop)
}

pub fn sentence_matrix_with<S: AsRef<str>>(
    store: &EmbeddingStore,
    tokens: &[S],
    oov: OovPolicy,
) -> Result<SentenceMatrix> {
    let mut data = Vec::with_capacity(tokens.len() * store.dim());
    let mut kept = Vec::with_capacity(tokens.len());
    for t in tokens {
        let t = t.as_ref();
        match store.get(t) {
            Some(row) => {
                data.extend_from_slice(row);
                kept.push(t.to_owned());
            }
            None if oov == OovPolicy::Fail => return Err(Error::OutOfVocabulary(t.to_owned())),
            None => {}
        }
    }
    if kept.is_empty() {
        return Err(Error::EmptySentence);
    }
    Ok(SentenceMatrix {
        dim: store.dim(),
        data,
        tokens: kept,
    })
}
