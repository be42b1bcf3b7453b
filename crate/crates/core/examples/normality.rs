//! Shapiro-Wilk test on word vectors.
//!
//! Runs the scan on an embedding file (the bundled toy vectors by default) and
//! on two synthetic stores, one Gaussian and one with a few heavy outlier
//! dimensions per vector, to show the failure fraction the test reports in
//! each case.

use std::error::Error;

use corrsim::diagnostics::{normality_scan, DEFAULT_ALPHA};
use corrsim::{EmbeddingFormat, EmbeddingStore};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn synthetic(seed: u64, outliers: usize) -> Result<EmbeddingStore, corrsim::Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = (0..500).map(|i| {
        let mut v: Vec<f64> = (0..300).map(|_| rng.sample(StandardNormal)).collect();
        for _ in 0..outliers {
            let j = rng.random_range(0..300);
            v[j] *= 12.0;
        }
        (format!("w{i}"), v)
    });
    EmbeddingStore::from_rows(300, rows.collect::<Vec<_>>())
}

fn main() -> Result<(), Box<dyn Error>> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/mini/tiny.vec").into());
    let stores = [
        (path.clone(), EmbeddingStore::load(&path, EmbeddingFormat::Auto, None)?),
        ("gaussian".into(), synthetic(1, 0)?),
        ("gaussian + 3 outlier dims".into(), synthetic(2, 3)?),
    ];
    for (name, store) in &stores {
        let scan = normality_scan(store, None, DEFAULT_ALPHA)?;
        println!(
            "{name}: {} tested, {} fail at alpha {} ({:.1}%), {} degenerate",
            scan.tested,
            scan.failing,
            scan.alpha,
            100.0 * scan.failure_fraction(),
            scan.degenerate
        );
    }
    Ok(())
}
