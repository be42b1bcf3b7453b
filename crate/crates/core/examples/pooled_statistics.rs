//! Where pooled sentence vectors sit, on a synthetic corpus of i.i.d. normal
//! word vectors.
//!
//! Max-pooling shifts the mean up and skews each pooled vector to the right;
//! min-pooling mirrors that. The density histograms of the per-sentence means
//! are written as CSV to the directory given as the first argument, if any.

use std::error::Error;
use std::fs;
use std::path::PathBuf;

use corrsim::diagnostics;
use corrsim::pooling::{self, PoolKind};
use corrsim::SentenceMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn main() -> Result<(), Box<dyn Error>> {
    let out: Option<PathBuf> = std::env::args_os().nth(1).map(Into::into);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let corpus: Vec<SentenceMatrix> = (0..1000)
        .map(|_| {
            let k = rng.random_range(3..=20);
            let data = (0..k * 300).map(|_| rng.sample(StandardNormal)).collect();
            SentenceMatrix::from_flat(300, data)
        })
        .collect::<Result<_, _>>()?;

    let avg = |v: Vec<f64>| v.iter().sum::<f64>() / v.len() as f64;
    println!("pooling  mean of sentence means  mean vector skewness");
    for kind in PoolKind::ALL {
        println!(
            "{:<8} {:>+22.4} {:>+21.4}",
            kind.as_str(),
            avg(pooling::pooled_mean_distribution(&corpus, kind)),
            avg(pooling::pooled_skewness_distribution(&corpus, kind)),
        );
    }

    if let Some(dir) = out {
        fs::create_dir_all(&dir)?;
        for (kind, hist) in diagnostics::pooled_histograms(&corpus, &PoolKind::ALL)? {
            let path = dir.join(format!("pooled_means_{}.csv", kind.as_str()));
            fs::write(&path, hist.to_csv())?;
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}
