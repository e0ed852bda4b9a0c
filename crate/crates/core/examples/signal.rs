//! Deterministic quantities of a block model: eigenvalues of the signal
//! matrix, informative count and predicted eigenvector overlaps.
//!
//! cargo run --example signal

use hynb::model::ModelParams;
use hynb::signal::signal_spectrum;

fn main() -> hynb::Result<()> {
    for (r, q, c_in, c_out) in [(4, 4, 130.0, 2.0), (2, 3, 12.0, 4.0), (2, 3, 8.0, 5.0)] {
        let params = ModelParams::symmetric(1000, r, q, c_in, c_out)?;
        let spec = signal_spectrum(&params)?;
        println!(
            "r = {r}, q = {q}, c_in = {c_in}, c_out = {c_out}: d = {:.3}, r0 = {}",
            spec.d, spec.r0
        );
        for i in 0..spec.r() {
            let overlap = spec
                .theoretical_overlap(i)
                .map_or("-".to_string(), |o| format!("{o:.4}"));
            println!(
                "  mu_{} = {:+.4}  tau = {:.4}  outlier at {:+.3}  overlap {overlap}",
                i + 1,
                spec.mu[i],
                spec.tau[i],
                (q - 1) as f64 * spec.mu[i]
            );
        }
    }
    Ok(())
}
