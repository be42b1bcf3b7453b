//! The pairs where a measure disagrees most with the human scores.
//!
//! System scores are min-max rescaled onto the gold `[0, 5]` range before
//! taking `gold - system`. Uses the bundled fixture unless an embedding file
//! and STS directory are given.

use std::error::Error;
use std::path::PathBuf;

use corrsim::sts::{self, ScoreOptions};
use corrsim::{EmbeddingFormat, EmbeddingStore, Measure};

fn main() -> Result<(), Box<dyn Error>> {
    let fixture = PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/mini"));
    let mut args = std::env::args().skip(1);
    let emb = args.next().map_or_else(|| fixture.join("tiny.vec"), PathBuf::from);
    let sts_dir = args.next().map_or_else(|| fixture.join("sts"), PathBuf::from);

    let (input, gs) = sts::subtask_paths(&sts_dir, "STS12", "MSRvid");
    let data = sts::load_sts("STS12/MSRvid", &input, &gs)?;
    let store = EmbeddingStore::load(&emb, EmbeddingFormat::Auto, None)?;
    let report = sts::score_dataset(&data, &store, &Measure::parse("max-spearman")?, ScoreOptions::default())?;

    println!("{:>4} {:>5} {:>6} {:>6}  sentences", "pair", "gold", "system", "delta");
    for d in sts::top_discrepancies(&report, 3)? {
        println!("{:>4} {:>5.2} {:>6.2} {:>+6.2}  {} | {}", d.index, d.gold, d.system, d.delta, d.sentence1, d.sentence2);
    }
    Ok(())
}
