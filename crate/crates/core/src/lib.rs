//! Sentence similarity from word embeddings, treating each word vector as a
//! sample of `D` observations.
//!
//! Two families of measures are provided. Pooled measures reduce a sentence
//! to one `D`-vector (mean, max or min over its words) and compare two pooled
//! vectors with a correlation coefficient. Kernel measures keep every word and
//! compare the two sentences' `D x D` Gram matrices with centered kernel
//! alignment (CKA) or plain kernel alignment (KA).
//!
//! ```
//! use corrsim::{EmbeddingStore, Measure, sentence_matrix};
//!
//! let store = EmbeddingStore::from_rows(4, [
//!     ("cat", vec![0.1, 0.9, -0.3, 0.4]),
//!     ("dog", vec![0.2, 0.8, -0.1, 0.5]),
//!     ("sat", vec![-0.6, 0.1, 0.7, 0.0]),
//! ]).unwrap();
//! let a = sentence_matrix(&store, &["cat", "sat"]).unwrap();
//! let b = sentence_matrix(&store, &["dog", "sat"]).unwrap();
//! let r = Measure::parse("max-spearman").unwrap().score(&a, &b).unwrap();
//! assert!((-1.0..=1.0).contains(&r));
//! ```
//!
//! The STS harness ([`sts`]), the bootstrap comparison ([`significance`]) and
//! the diagnostics ([`diagnostics`]) build on these measures; [`cli`] wires
//! them to the `corrsim` binary.

pub mod cli;
pub mod diagnostics;
pub mod embeddings;
pub mod error;
pub mod kernel;
pub mod measure;
pub mod pooling;
pub mod report;
pub mod shapiro;
pub mod significance;
pub mod sts;
pub mod univariate;

pub use embeddings::{sentence_matrix, tokenize, EmbeddingFormat, EmbeddingStore, OovPolicy, SentenceMatrix};
pub use error::{Error, Result};
pub use kernel::{cka, ka, KernelKind};
pub use measure::Measure;
pub use pooling::{Coefficient, PoolKind};
pub use significance::{bca_interval, ConfidenceInterval, PairedScores, Verdict};
pub use sts::{EvalReport, SubtaskReport};
