//! `corrsim` command line. Each subcommand is a thin wrapper over a library
//! call; the `run_*` functions return what the command writes so tests can
//! compare against direct library use.
//!
//! Exit codes: 0 success, 2 usage error, 3 data or runtime error.

use std::collections::HashSet;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::diagnostics::{self, NormalityScan};
use crate::embeddings::{self, EmbeddingFormat, EmbeddingStore, OovPolicy};
use crate::error::Error;
use crate::measure::{self, Measure};
use crate::pooling::PoolKind;
use crate::report;
use crate::significance::{self, ConfidenceInterval, PairedScores};
use crate::sts::{self, Discrepancy, EvalReport, ScoreOptions, StsDataset};
use crate::univariate;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "corrsim", version, about = "Correlation-based semantic textual similarity")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Score one sentence pair.
    Sim(SimArgs),
    /// Score STS subtasks and write an evaluation report.
    Eval(EvalArgs),
    /// BCa confidence intervals for the difference between two reports.
    Compare(CompareArgs),
    /// Pooled-mean histograms and word-vector normality scan.
    Diagnose(DiagnoseArgs),
    /// Largest gold/system discrepancies per subtask of a report.
    Errors(ErrorsArgs),
}

#[derive(Debug, Clone, Args)]
pub struct EmbeddingArgs {
    /// Embedding file in word2vec or GloVe text format.
    #[arg(long)]
    pub embeddings: PathBuf,
    /// word2vec-text, glove-text or auto.
    #[arg(long, default_value = "auto")]
    pub format: String,
}

#[derive(Debug, Clone, Args)]
pub struct SimArgs {
    #[command(flatten)]
    pub emb: EmbeddingArgs,
    /// Measure id, e.g. max-spearman or cka-gaussian.
    #[arg(long)]
    pub measure: String,
    /// Tail fraction clipped by the wpearson coefficient.
    #[arg(long, default_value_t = univariate::DEFAULT_WINSOR)]
    pub winsor: f64,
    /// drop or fail on out-of-vocabulary tokens.
    #[arg(long, default_value = "drop")]
    pub oov: String,
    pub sentence1: String,
    pub sentence2: String,
}

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub emb: EmbeddingArgs,
    /// Directory containing STS12-en-test ... STS16-en-test.
    #[arg(long)]
    pub sts_dir: PathBuf,
    /// Comma-separated years (`STS12`) or subtasks (`STS14/images`), or `all`.
    #[arg(long, default_value = "all")]
    pub tasks: String,
    /// Measure id, e.g. max-spearman or cka-gaussian.
    #[arg(long)]
    pub measure: String,
    /// Report file to write.
    #[arg(long)]
    pub out: PathBuf,
    /// drop or fail on out-of-vocabulary tokens.
    #[arg(long, default_value = "drop")]
    pub oov: String,
    /// Tail fraction clipped by the wpearson coefficient.
    #[arg(long, default_value_t = univariate::DEFAULT_WINSOR)]
    pub winsor: f64,
    /// Worker threads; 0 uses all cores. Results do not depend on it.
    #[arg(long, env = "CORRSIM_THREADS", default_value_t = 0)]
    pub threads: usize,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    /// Report of system A.
    #[arg(long)]
    pub a: PathBuf,
    /// Report of system B, over the same pairs.
    #[arg(long)]
    pub b: PathBuf,
    /// Bootstrap replicates per subtask.
    #[arg(long, default_value_t = significance::DEFAULT_REPLICATES)]
    pub bootstrap: usize,
    /// Bootstrap seed.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Confidence level of the intervals.
    #[arg(long, default_value_t = significance::DEFAULT_LEVEL)]
    pub level: f64,
    /// Comparison table to write.
    #[arg(long)]
    pub out: PathBuf,
    /// Worker threads; 0 uses all cores. Results do not depend on it.
    #[arg(long, env = "CORRSIM_THREADS", default_value_t = 0)]
    pub threads: usize,
}

#[derive(Debug, Clone, Args)]
pub struct DiagnoseArgs {
    #[command(flatten)]
    pub emb: EmbeddingArgs,
    /// Directory containing STS12-en-test ... STS16-en-test.
    #[arg(long)]
    pub sts_dir: PathBuf,
    /// Comma-separated years or subtasks, or `all`.
    #[arg(long, default_value = "all")]
    pub tasks: String,
    /// Comma-separated pooling kinds (mean, max, min).
    #[arg(long, default_value = "mean,max,min")]
    pub pooling: String,
    /// Directory for the CSV and TSV outputs.
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Also write per-kind histograms of this sentence's pooled vector.
    #[arg(long)]
    pub sentence: Option<String>,
    /// Shapiro-Wilk significance level.
    #[arg(long, default_value_t = diagnostics::DEFAULT_ALPHA)]
    pub alpha: f64,
    /// Scan only the first N vocabulary tokens (load order).
    #[arg(long)]
    pub normality_limit: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct ErrorsArgs {
    /// Evaluation report to inspect.
    #[arg(long)]
    pub report: PathBuf,
    /// Pairs listed per subtask.
    #[arg(long, default_value_t = 5)]
    pub top: usize,
    /// Table to write.
    #[arg(long)]
    pub out: PathBuf,
    /// Restrict to one subtask id.
    #[arg(long)]
    pub subtask: Option<String>,
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn data(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_DATA,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::UnknownMeasure(id) => Self::usage(format!(
                "unknown measure {id:?}; available measures: {}",
                measure::registry().join(", ")
            )),
            Error::InvalidArgument(_) => Self::usage(e.to_string()),
            other => Self::data(other.to_string()),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

/// Parses arguments, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(&cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("corrsim: {}", e.message);
            e.code
        }
    }
}

fn dispatch(cmd: &Command) -> CliResult<()> {
    let mut out = String::new();
    match cmd {
        Command::Sim(a) => {
            let _ = writeln!(out, "{:.6}", run_sim(a)?);
        }
        Command::Eval(a) => {
            let (report, warnings) = run_eval(a)?;
            for s in &report.subtasks {
                let r = s.pearson.map_or("NA".to_owned(), |v| format!("{v:.2}"));
                let _ = writeln!(out, "{}\t{}\tfallback={}", s.subtask_id, r, s.fallback_count);
            }
            for y in &report.years {
                let m = y.mean.map_or("NA".to_owned(), |v| format!("{v:.2}"));
                let _ = writeln!(out, "{}\tmean={}\tsubtasks={}", y.year, m, y.subtasks);
            }
            if warnings > 0 {
                eprintln!("corrsim: {warnings} warning(s)");
            }
        }
        Command::Compare(a) => {
            let rows = run_compare(a)?;
            out = comparison_table(a, &rows);
        }
        Command::Diagnose(a) => {
            for p in run_diagnose(a)? {
                let _ = writeln!(out, "{}", p.display());
            }
        }
        Command::Errors(a) => {
            out = discrepancy_table(&run_errors(a)?);
        }
    }
    // A closed stdout (e.g. piped into `head`) is not an error for the run.
    let _ = std::io::stdout().lock().write_all(out.as_bytes());
    Ok(())
}

fn parse_format(s: &str) -> CliResult<EmbeddingFormat> {
    s.parse().map_err(CliError::from)
}

fn parse_oov(s: &str) -> CliResult<OovPolicy> {
    s.parse().map_err(CliError::from)
}

fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> CliResult<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::data(format!("cannot start thread pool: {e}")))?;
    Ok(pool.install(f))
}

/// Similarity of two sentences under the requested measure.
pub fn run_sim(a: &SimArgs) -> CliResult<f64> {
    let measure = Measure::parse_with_winsor(&a.measure, a.winsor)?;
    let format = parse_format(&a.emb.format)?;
    let oov = parse_oov(&a.oov)?;
    let (t1, t2) = (embeddings::tokenize(&a.sentence1), embeddings::tokenize(&a.sentence2));
    let vocab: HashSet<String> = t1.iter().chain(&t2).cloned().collect();
    let store = EmbeddingStore::load(&a.emb.embeddings, format, Some(&vocab))?;
    let s1 = embeddings::sentence_matrix_with(&store, &t1, oov)?;
    let s2 = embeddings::sentence_matrix_with(&store, &t2, oov)?;
    Ok(measure.score(&s1, &s2)?)
}

/// Loads the requested subtasks, skipping (and counting) missing ones.
pub fn load_datasets(sts_dir: &Path, tasks: &str) -> CliResult<(Vec<StsDataset>, usize)> {
    let mut datasets = Vec::new();
    let mut missing = 0;
    for (year, name) in sts::expand_tasks(tasks)? {
        let (input, gs) = sts::subtask_paths(sts_dir, &year, &name);
        if !input.is_file() || !gs.is_file() {
            eprintln!("corrsim: warning: missing subtask {year}/{name} ({})", input.display());
            missing += 1;
            continue;
        }
        datasets.push(sts::load_sts(&format!("{year}/{name}"), &input, &gs)?);
    }
    if datasets.is_empty() {
        return Err(CliError::data(format!("no STS subtask files found under {}", sts_dir.display())));
    }
    Ok((datasets, missing))
}

fn corpus_vocab(datasets: &[StsDataset]) -> HashSet<String> {
    datasets
        .iter()
        .flat_map(|d| &d.pairs)
        .flat_map(|p| embeddings::tokenize(&p.sentence1).into_iter().chain(embeddings::tokenize(&p.sentence2)))
        .collect()
}

fn embeddings_id(path: &Path) -> String {
    path.file_name()
        .map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned())
}

/// Scores the subtasks and writes the report; returns it with the warning count.
pub fn run_eval(a: &EvalArgs) -> CliResult<(EvalReport, usize)> {
    let measure = Measure::parse_with_winsor(&a.measure, a.winsor)?;
    let format = parse_format(&a.emb.format)?;
    let oov = parse_oov(&a.oov)?;
    let (datasets, mut warnings) = load_datasets(&a.sts_dir, &a.tasks)?;
    let vocab = corpus_vocab(&datasets);
    let store = EmbeddingStore::load(&a.emb.embeddings, format, Some(&vocab))?;

    let opts = ScoreOptions { oov };
    let subtasks = with_threads(a.threads, || {
        datasets
            .iter()
            .map(|d| sts::score_dataset(d, &store, &measure, opts))
            .collect::<Result<Vec<_>, _>>()
    })??;
    for s in &subtasks {
        if s.fallback_count > 0 {
            eprintln!(
                "corrsim: warning: {}: {} pair(s) scored with the fallback {}",
                s.subtask_id,
                s.fallback_count,
                sts::FALLBACK_SCORE
            );
            warnings += 1;
        }
        if s.pearson.is_none() {
            eprintln!("corrsim: warning: {}: Pearson with gold is undefined", s.subtask_id);
            warnings += 1;
        }
    }

    let emb_id = embeddings_id(&a.emb.embeddings);
    let hash = sts::config_hash(&measure.id(), a.winsor, oov, &emb_id);
    let report = EvalReport::new(measure.id(), emb_id, hash, subtasks);
    report::write(&report, &a.out)?;
    Ok((report, warnings))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub subtask_id: String,
    pub pairs: usize,
    pub pearson_a: f64,
    pub pearson_b: f64,
    pub interval: ConfidenceInterval,
}

/// Pairs the subtasks of two reports and bootstraps each delta.
pub fn compare_reports(
    a: &EvalReport,
    b: &EvalReport,
    level: f64,
    replicates: usize,
    seed: u64,
) -> Result<Vec<ComparisonRow>, Error> {
    if a.subtasks.len() != b.subtasks.len() {
        return Err(Error::ReportMismatch(format!(
            "{} subtasks vs {}",
            a.subtasks.len(),
            b.subtasks.len()
        )));
    }
    let mut rows = Vec::new();
    for sa in &a.subtasks {
        let sb = b
            .subtask(&sa.subtask_id)
            .ok_or_else(|| Error::ReportMismatch(format!("{} missing from second report", sa.subtask_id)))?;
        let paired = PairedScores::from_reports(sa, sb)?;
        let ci = significance::bca_interval(&paired, level, replicates, seed)?;
        rows.push(ComparisonRow {
            subtask_id: sa.subtask_id.clone(),
            pairs: paired.len(),
            pearson_a: 100.0 * univariate::pearson(&paired.sys_a, &paired.gold)?,
            pearson_b: 100.0 * univariate::pearson(&paired.sys_b, &paired.gold)?,
            interval: ci,
        });
    }
    Ok(rows)
}

pub fn run_compare(a: &CompareArgs) -> CliResult<Vec<ComparisonRow>> {
    let ra = report::read(&a.a)?;
    let rb = report::read(&a.b)?;
    let rows = with_threads(a.threads, || compare_reports(&ra, &rb, a.level, a.bootstrap, a.seed))??;
    let text = comparison_header(&ra, &rb, a) + &comparison_table(a, &rows);
    fs::write(&a.out, text).map_err(|e| Error::io(&a.out, e))?;
    Ok(rows)
}

fn comparison_header(ra: &EvalReport, rb: &EvalReport, a: &CompareArgs) -> String {
    format!(
        "# corrsim comparison\n# a\t{}\t{}\n# b\t{}\t{}\n# level\t{}\n# replicates\t{}\n# seed\t{}\n",
        ra.measure_id, ra.embeddings_id, rb.measure_id, rb.embeddings_id, a.level, a.bootstrap, a.seed
    )
}

/// Tab-separated comparison table, one row per subtask.
pub fn comparison_table(a: &CompareArgs, rows: &[ComparisonRow]) -> String {
    let pct = (a.level * 100.0).round();
    let mut out = format!("subtask\tpairs\tpearson_a\tpearson_b\tdelta\tci{pct}_lower\tci{pct}_upper\tverdict\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{}\t{}\t{:.6}\t{:.6}\t{:.6}\t{:.6}\t{:.6}\t{}",
            r.subtask_id,
            r.pairs,
            r.pearson_a,
            r.pearson_b,
            r.interval.delta_hat,
            r.interval.lower,
            r.interval.upper,
            r.interval.verdict().as_str()
        );
    }
    out
}

fn parse_kinds(list: &str) -> CliResult<Vec<PoolKind>> {
    let mut kinds = Vec::new();
    for k in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let k: PoolKind = k.parse()?;
        if !kinds.contains(&k) {
            kinds.push(k);
        }
    }
    if kinds.is_empty() {
        return Err(CliError::usage("--pooling needs at least one of mean, max, min"));
    }
    Ok(kinds)
}

/// Writes the diagnostic tables and returns their paths.
pub fn run_diagnose(a: &DiagnoseArgs) -> CliResult<Vec<PathBuf>> {
    let kinds = parse_kinds(&a.pooling)?;
    let format = parse_format(&a.emb.format)?;
    let (datasets, _) = load_datasets(&a.sts_dir, &a.tasks)?;
    let mut vocab = corpus_vocab(&datasets);
    let sentence_tokens = a.sentence.as_deref().map(embeddings::tokenize);
    if let Some(t) = &sentence_tokens {
        vocab.extend(t.iter().cloned());
    }
    let store = EmbeddingStore::load(&a.emb.embeddings, format, Some(&vocab))?;

    let corpus: Vec<_> = datasets
        .iter()
        .flat_map(|d| &d.pairs)
        .flat_map(|p| [&p.sentence1, &p.sentence2])
        .filter_map(|s| embeddings::sentence_matrix(&store, &embeddings::tokenize(s)).ok())
        .collect();

    fs::create_dir_all(&a.out_dir).map_err(|e| Error::io(&a.out_dir, e))?;
    let mut written = Vec::new();
    let mut emit = |name: String, body: String| -> CliResult<()> {
        let path = a.out_dir.join(name);
        fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
        written.push(path);
        Ok(())
    };

    for (kind, h) in diagnostics::pooled_histograms(&corpus, &kinds)? {
        emit(format!("pooled_means_{kind}.csv"), h.to_csv())?;
    }
    if let Some(tokens) = &sentence_tokens {
        let s = embeddings::sentence_matrix(&store, tokens)?;
        for (kind, h) in diagnostics::sentence_histograms(&s, &kinds)? {
            emit(format!("sentence_{kind}.csv"), h.to_csv())?;
        }
    }
    let scan = normality(&store, a.normality_limit, a.alpha)?;
    emit("normality.tsv".into(), scan.to_tsv())?;
    emit("normality_summary.txt".into(), scan.summary())?;
    Ok(written)
}

fn normality(store: &EmbeddingStore, limit: Option<usize>, alpha: f64) -> CliResult<NormalityScan> {
    let sample: Option<Vec<String>> = limit.map(|n| store.tokens().iter().take(n).cloned().collect());
    Ok(diagnostics::normality_scan(store, sample.as_deref(), alpha)?)
}

/// Largest discrepancies per subtask, written as a table.
pub fn run_errors(a: &ErrorsArgs) -> CliResult<Vec<(String, Discrepancy)>> {
    let r = report::read(&a.report)?;
    let mut rows = Vec::new();
    for s in &r.subtasks {
        if a.subtask.as_deref().is_some_and(|id| id != s.subtask_id) {
            continue;
        }
        let top = sts::top_discrepancies(s, a.top)
            .map_err(|e| CliError::data(format!("{}: {e}", s.subtask_id)))?;
        rows.extend(top.into_iter().map(|d| (s.subtask_id.clone(), d)));
    }
    if let Some(id) = &a.subtask {
        if rows.is_empty() && r.subtask(id).is_none() {
            return Err(CliError::data(format!("subtask {id} not in report")));
        }
    }
    fs::write(&a.out, discrepancy_table(&rows)).map_err(|e| Error::io(&a.out, e))?;
    Ok(rows)
}

pub fn discrepancy_table(rows: &[(String, Discrepancy)]) -> String {
    let mut out = String::from("subtask\tpair\tsentence1\tsentence2\tgold\tsystem\tdelta\n");
    for (id, d) in rows {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{:.4}\t{:.4}\t{:+.4}",
            id, d.index, d.sentence1, d.sentence2, d.gold, d.system, d.delta
        );
    }
    out
}
