//! Evaluates measures on an STS directory laid out like the official release
//! (`STS12-en-test/STS.input.MSRvid.txt` and so on).
//!
//! ```text
//! cargo run --example sts_eval -- [EMBEDDINGS STS_DIR TASKS]
//! ```
//!
//! Defaults to the bundled ten-pair fixture.

use std::collections::HashSet;
use std::error::Error;
use std::path::PathBuf;

use corrsim::sts::{self, ScoreOptions};
use corrsim::{tokenize, EmbeddingFormat, EmbeddingStore, EvalReport, Measure};

fn main() -> Result<(), Box<dyn Error>> {
    let fixture = PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/mini"));
    let mut args = std::env::args().skip(1);
    let emb = args.next().map_or_else(|| fixture.join("tiny.vec"), PathBuf::from);
    let sts_dir = args.next().map_or_else(|| fixture.join("sts"), PathBuf::from);
    let tasks = args.next().unwrap_or_else(|| "STS12/MSRvid".into());

    let mut datasets = Vec::new();
    for (year, name) in sts::expand_tasks(&tasks)? {
        let (input, gs) = sts::subtask_paths(&sts_dir, &year, &name);
        if input.is_file() && gs.is_file() {
            datasets.push(sts::load_sts(&format!("{year}/{name}"), &input, &gs)?);
        }
    }
    let vocab: HashSet<String> = datasets
        .iter()
        .flat_map(|d| &d.pairs)
        .flat_map(|p| tokenize(&p.sentence1).into_iter().chain(tokenize(&p.sentence2)))
        .collect();
    let store = EmbeddingStore::load(&emb, EmbeddingFormat::Auto, Some(&vocab))?;

    for id in ["mean-cos", "max-spearman", "cka-linear", "cka-gaussian", "cka-dcor"] {
        let measure = Measure::parse(id)?;
        let subtasks = datasets
            .iter()
            .map(|d| sts::score_dataset(d, &store, &measure, ScoreOptions::default()))
            .collect::<Result<Vec<_>, _>>()?;
        let report = EvalReport::new(id, "example", "-", subtasks);
        for s in &report.subtasks {
            let r = s.pearson.map_or("NA".into(), |v| format!("{v:.2}"));
            println!("{id:<13} {:<22} pearson x100 {r:>6}  fallbacks {}", s.subtask_id, s.fallback_count);
        }
        for y in &report.years {
            println!("{id:<13} {:<22} year mean    {:>6}", y.year, y.mean.map_or("NA".into(), |v| format!("{v:.2}")));
        }
    }
    Ok(())
}
