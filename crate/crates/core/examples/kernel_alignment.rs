//! CKA and KA between sets of word vectors.
//!
//! A sentence of `k` words is read as `D` observations of a `k`-variate
//! variable. With one word per sentence the linear kernel reduces to squared
//! Pearson (CKA) and squared cosine (KA), and the distance kernel to squared
//! distance correlation; the first block prints these side by side.

use std::error::Error;

use corrsim::kernel::{self, Bandwidth, KernelKind};
use corrsim::univariate::{cosine, pearson};
use corrsim::SentenceMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn random_sentence(rng: &mut ChaCha8Rng, k: usize, d: usize) -> Result<SentenceMatrix, corrsim::Error> {
    SentenceMatrix::from_flat(d, (0..k * d).map(|_| rng.sample(StandardNormal)).collect())
}

fn main() -> Result<(), Box<dyn Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);

    let x: Vec<f64> = (0..300).map(|_| rng.sample(StandardNormal)).collect();
    let y: Vec<f64> = x.iter().map(|v| 0.6 * v + 0.8 * rng.sample::<f64, _>(StandardNormal)).collect();
    let (sx, sy) = (SentenceMatrix::from_rows(std::slice::from_ref(&x))?, SentenceMatrix::from_rows(std::slice::from_ref(&y))?);
    let r = pearson(&x, &y)?;
    let c = cosine(&x, &y)?;
    println!("single word: pearson^2 {:.6}  cka-linear {:.6}", r * r, kernel::cka(&sx, &sy, KernelKind::Linear, Bandwidth::Median)?);
    println!("             cosine^2  {:.6}  ka-linear  {:.6}", c * c, kernel::ka(&sx, &sy, KernelKind::Linear, Bandwidth::Median)?);

    // A sentence against a noisy copy of itself, and against an unrelated one.
    let a = random_sentence(&mut rng, 8, 300)?;
    let noise = random_sentence(&mut rng, 8, 300)?;
    let near: Vec<f64> = a.as_flat().iter().zip(noise.as_flat()).map(|(u, e)| u + 0.5 * e).collect();
    let near = SentenceMatrix::from_flat(300, near)?;
    let far = random_sentence(&mut rng, 5, 300)?;
    println!("\nkernel    related  unrelated");
    for kind in [KernelKind::Linear, KernelKind::Gaussian, KernelKind::Distance] {
        println!(
            "{:<9} {:.4}   {:.4}",
            kind.as_str(),
            kernel::cka(&a, &near, kind, Bandwidth::Median)?,
            kernel::cka(&a, &far, kind, Bandwidth::Median)?
        );
    }
    Ok(())
}
