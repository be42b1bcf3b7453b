//! Runs every command over the bundled mini-STS fixture.

use std::path::{Path, PathBuf};

use corrsim::cli::{self, CompareArgs, DiagnoseArgs, EmbeddingArgs, ErrorsArgs, EvalArgs};

use super::fixture_dir;

fn emb() -> EmbeddingArgs {
    EmbeddingArgs {
        embeddings: fixture_dir().join("tiny.vec"),
        format: "auto".into(),
    }
}

/// Runs every command on the fixture and returns `(golden name, produced path)`.
pub fn produce(out: &Path) -> Vec<(&'static str, PathBuf)> {
    let sts_dir = fixture_dir().join("sts");
    let mut files = Vec::new();
    for (name, measure) in [("max-spearman.report", "max-spearman"), ("cka-gaussian.report", "cka-gaussian")] {
        let path = out.join(name);
        cli::run_eval(&EvalArgs {
            emb: emb(),
            sts_dir: sts_dir.clone(),
            tasks: "STS12/MSRvid".into(),
            measure: measure.into(),
            out: path.clone(),
            oov: "drop".into(),
            winsor: 0.05,
            threads: 2,
        })
        .unwrap();
        files.push((name, path));
    }
    let cmp = out.join("comparison.tsv");
    cli::run_compare(&CompareArgs {
        a: out.join("max-spearman.report"),
        b: out.join("cka-gaussian.report"),
        bootstrap: 10_000,
        seed: 42,
        level: 0.95,
        out: cmp.clone(),
        threads: 2,
    })
    .unwrap();
    files.push(("comparison.tsv", cmp));
    let errs = out.join("errors.tsv");
    cli::run_errors(&ErrorsArgs {
        report: out.join("max-spearman.report"),
        top: 5,
        out: errs.clone(),
        subtask: None,
    })
    .unwrap();
    files.push(("errors.tsv", errs));
    let diag = out.join("diag");
    cli::run_diagnose(&DiagnoseArgs {
        emb: emb(),
        sts_dir,
        tasks: "STS12/MSRvid".into(),
        pooling: "mean,max,min".into(),
        out_dir: diag.clone(),
        sentence: None,
        alpha: 0.05,
        normality_limit: None,
    })
    .unwrap();
    for kind in ["mean", "max", "min"] {
        let name: &'static str = match kind {
            "mean" => "pooled_means_mean.csv",
            "max" => "pooled_means_max.csv",
            _ => "pooled_means_min.csv",
        };
        files.push((name, diag.join(name)));
    }
    files
}
