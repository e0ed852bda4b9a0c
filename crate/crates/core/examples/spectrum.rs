//! Leading eigenvalues of the reduced non-backtracking operator for the
//! four-block example: one outlier near 12, three near 6, and a bulk inside
//! radius sqrt(12). Also writes an SVG scatter to the system temp directory.
//!
//! cargo run --release --example spectrum -- [n] [seed]

use hynb::eigen::{leading_outliers, ArnoldiOptions, DEFAULT_MARGIN};
use hynb::harness::write_spectrum_svg;
use hynb::ihara::ReducedOperator;
use hynb::model::{assign_labels, sample, LabelMode, ModelParams};

fn main() -> hynb::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(2000, |s| s.parse().expect("n"));
    let seed: u64 = args.next().map_or(0, |s| s.parse().expect("seed"));

    let params = ModelParams::symmetric(n, 4, 4, 130.0, 2.0)?;
    let labels = assign_labels(&params, LabelMode::Deterministic, seed)?;
    let g = sample(&params, &labels, seed)?;
    let op = ReducedOperator::new(&g);
    let opts = ArnoldiOptions {
        seed,
        ..Default::default()
    };
    let rep = leading_outliers(&op, g.q(), g.mean_degree(), DEFAULT_MARGIN, 16, 64, &opts)?;

    let radius = rep.bulk_radius.unwrap_or_default();
    println!(
        "bulk radius sqrt((q-1) d) = {radius:.3}, converged = {}",
        rep.converged
    );
    for (k, z) in rep.ritz_values.iter().enumerate() {
        let tag = if rep.informative.contains(&k) {
            "outlier"
        } else {
            ""
        };
        println!(
            "{:>3}  {:+9.4} {:+9.4}i  |.| = {:7.4}  {tag}",
            k,
            z.re,
            z.im,
            z.norm()
        );
    }

    let points: Vec<_> = rep
        .ritz_values
        .iter()
        .enumerate()
        .map(|(k, &z)| (z, rep.informative.contains(&k)))
        .collect();
    let path = std::env::temp_dir().join("hynb-spectrum.svg");
    let file = std::fs::File::create(&path).expect("create svg");
    write_spectrum_svg(file, &points, radius).expect("write svg");
    println!("wrote {}", path.display());
    Ok(())
}
