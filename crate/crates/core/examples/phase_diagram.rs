//! Overlap of Algorithm 2 across the Kesten-Stigum threshold for two blocks
//! and q = 3. Writes phase.csv to the system temp directory.
//!
//! cargo run --release --example phase_diagram -- [n]

use hynb::harness::{cmd_phase_diagram, ExperimentConfig, PhaseConfig};
use hynb::model::ModelConfig;

fn main() -> hynb::Result<()> {
    let n: usize = std::env::args()
        .nth(1)
        .map_or(3000, |s| s.parse().expect("n"));
    let mut cfg = ExperimentConfig::new(ModelConfig::symmetric(n, 2, 3, 0.0, 0.0));
    cfg.seeds = vec![0, 1, 2];
    cfg.out_dir = std::env::temp_dir().join("hynb-phase");
    cfg.phase = Some(PhaseConfig {
        d: 6.0,
        margins: vec![-0.5, -0.3, 0.0, 0.3, 0.6, 1.0, 2.0],
    });
    println!(
        "{:>7} {:>7} {:>7} {:>8} {:>8}",
        "margin", "c_in", "c_out", "mean", "median"
    );
    for row in cmd_phase_diagram(&cfg)? {
        println!(
            "{:>+7.2} {:>7.3} {:>7.3} {:>8.4} {:>8.4}",
            row.rel_margin, row.c_in, row.c_out, row.mean_overlap, row.median_overlap
        );
    }
    println!("wrote {}", cfg.out_dir.join("phase.csv").display());
    Ok(())
}
