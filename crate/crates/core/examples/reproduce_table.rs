//! Set-based rows of the STS 2012-2016 results table, next to the published
//! numbers.
//!
//! ```text
//! CORRSIM_FASTTEXT=crawl-300d-2M.vec CORRSIM_STS_DIR=data/sts \
//!     cargo run --release --example reproduce_table
//! ```
//!
//! Each cell is the mean Pearson x 100 over the year's subtasks (STS13 SMT
//! excluded). Cells further than 1.0 from the published value are starred.

use std::collections::HashSet;
use std::error::Error;
use std::path::PathBuf;

use corrsim::sts::{self, ScoreOptions};
use corrsim::{tokenize, EmbeddingFormat, EmbeddingStore, EvalReport, Measure};

const YEARS: [&str; 5] = ["STS12", "STS13", "STS14", "STS15", "STS16"];
const PUBLISHED: [(&str, [f64; 5]); 5] = [
    ("mean-cos", [58.3, 57.9, 64.9, 67.6, 64.3]),
    ("max-spearman", [61.0, 62.9, 70.9, 75.9, 75.8]),
    ("cka-linear", [59.8, 62.1, 69.5, 74.6, 70.3]),
    ("cka-gaussian", [60.5, 63.8, 71.6, 76.3, 73.7]),
    ("cka-dcor", [61.0, 63.2, 71.5, 75.6, 72.4]),
];

fn env_path(name: &str) -> Result<PathBuf, String> {
    std::env::var_os(name).map(PathBuf::from).ok_or_else(|| format!("set {name}"))
}

fn main() -> Result<(), Box<dyn Error>> {
    let emb = env_path("CORRSIM_FASTTEXT")?;
    let sts_dir = env_path("CORRSIM_STS_DIR")?;

    let mut datasets = Vec::new();
    for (year, name) in sts::expand_tasks("all")? {
        let (input, gs) = sts::subtask_paths(&sts_dir, &year, &name);
        if input.is_file() && gs.is_file() {
            datasets.push(sts::load_sts(&format!("{year}/{name}"), &input, &gs)?);
        } else {
            eprintln!("missing {year}/{name}");
        }
    }
    let vocab: HashSet<String> = datasets
        .iter()
        .flat_map(|d| &d.pairs)
        .flat_map(|p| tokenize(&p.sentence1).into_iter().chain(tokenize(&p.sentence2)))
        .collect();
    let store = EmbeddingStore::load(&emb, EmbeddingFormat::Auto, Some(&vocab))?;
    eprintln!("{} of {} corpus tokens have vectors", store.len(), vocab.len());

    print!("{:<14}", "measure");
    for y in YEARS {
        print!("{y:>14}");
    }
    println!();
    for (id, published) in PUBLISHED {
        let measure = Measure::parse(id)?;
        let subtasks = datasets
            .iter()
            .map(|d| sts::score_dataset(d, &store, &measure, ScoreOptions::default()))
            .collect::<Result<Vec<_>, _>>()?;
        let report = EvalReport::new(id, "fasttext", "-", subtasks);
        print!("{id:<14}");
        for (year, want) in YEARS.iter().zip(published) {
            let cell = match report.years.iter().find(|y| y.year == *year).and_then(|y| y.mean) {
                Some(got) => format!("{got:.1}/{want:.1}{}", if (got - want).abs() > 1.0 { "*" } else { "" }),
                None => format!("NA/{want:.1}*"),
            };
            print!("{cell:>14}");
        }
        println!();
    }
    Ok(())
}
