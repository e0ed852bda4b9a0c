//! Algorithm 2: cluster vertices on the eigenvectors outside the bulk and
//! score against the planted partition.
//!
//! cargo run --release --example detect -- [n] [seed]

use hynb::detect::{detect_alg2, eigenspace_overlap, overlap, DetectOptions};
use hynb::model::{assign_labels, sample, LabelMode, ModelParams};
use hynb::signal::signal_spectrum;

fn main() -> hynb::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(3000, |s| s.parse().expect("n"));
    let seed: u64 = args.next().map_or(0, |s| s.parse().expect("seed"));

    let params = ModelParams::symmetric(n, 4, 4, 130.0, 2.0)?;
    let labels = assign_labels(&params, LabelMode::Deterministic, seed)?;
    let g = sample(&params, &labels, seed)?;

    let mut opts = DetectOptions::default();
    opts.arnoldi.seed = seed;
    opts.kmeans.seed = seed;
    let det = detect_alg2(&g, None, &opts)?;
    if det.below_threshold {
        println!("no informative eigenvalue besides the Perron one");
        return Ok(());
    }
    println!("informative eigenvalues:");
    for &i in &det.report.informative {
        println!("  {:.4}", det.report.ritz_values[i]);
    }
    println!(
        "k = {}, embedding dimension {}",
        det.partition.k,
        det.embedding.dim()
    );
    println!(
        "overlap with the planted partition {:.4}",
        overlap(&labels.sigma, &det.partition.assignment, 4)
    );

    let spec = signal_spectrum(&params)?;
    for i in 1..spec.r0 {
        let (measured, predicted) = eigenspace_overlap(&det.report, &spec, &labels, i)?;
        println!(
            "eigenvector {}: overlap {measured:.4}, predicted {predicted:.4}",
            i + 1
        );
    }
    Ok(())
}
