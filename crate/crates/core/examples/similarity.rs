//! Scores one sentence pair with every registered measure.
//!
//! ```text
//! cargo run --example similarity -- [EMBEDDINGS] ["sentence one" "sentence two"]
//! ```
//!
//! Without arguments it uses the bundled toy vectors. The max-spearman row is
//! the pooled Spearman baseline: max-pool each sentence's word vectors, then
//! correlate the two pooled vectors' entries.

use std::error::Error;

use corrsim::measure::registry;
use corrsim::sts::score_sentences;
use corrsim::{EmbeddingFormat, EmbeddingStore, Measure, OovPolicy};

fn main() -> Result<(), Box<dyn Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let path = args
        .first()
        .cloned()
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/mini/tiny.vec").into());
    let (s1, s2) = match &args[..] {
        [_, a, b, ..] => (a.as_str(), b.as_str()),
        _ => ("a man is playing a guitar", "a woman plays the piano"),
    };
    let store = EmbeddingStore::load(&path, EmbeddingFormat::Auto, None)?;
    println!("{} words, D = {}", store.len(), store.dim());
    println!("s1: {s1}\ns2: {s2}\n");
    for id in registry() {
        let measure = Measure::parse(&id)?;
        match score_sentences(&store, &measure, s1, s2, OovPolicy::Drop)? {
            Some(v) => println!("{id:<16} {v:+.6}"),
            None => println!("{id:<16} unscorable"),
        }
    }
    Ok(())
}
