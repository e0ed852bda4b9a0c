//! The determinant identity relating the non-backtracking operator to the
//! reduced 2n x 2n matrix, checked at random complex points, and the
//! multiplicities of the trivial eigenvalues 1 and -(q-1).
//!
//! cargo run --example ihara_bass

use hynb::ihara::{trivial_multiplicities, wrap_angle, IharaBassCheck};
use hynb::model::{assign_labels, sample, LabelMode, ModelParams};
use num_complex::Complex64;

fn main() -> hynb::Result<()> {
    let params = ModelParams::symmetric(30, 2, 3, 16.0, 6.0)?;
    let labels = assign_labels(&params, LabelMode::Deterministic, 1)?;
    let g = sample(&params, &labels, 1)?;
    println!("n = {}, q = {}, m = {}", g.n(), g.q(), g.m());

    let chk = IharaBassCheck::new(&g)?;
    println!(
        "calibrated phase offset {:+.4} (matches (-1)^(qm): {})",
        wrap_angle(chk.phase_offset),
        chk.offset_matches_parity()
    );
    for k in 0..5 {
        let z = Complex64::from_polar(0.3 + 0.3 * k as f64, 0.9 * k as f64 + 0.2);
        let ((ll, la), (rl, ra)) = chk.sides(z)?;
        println!(
            "z = {z:.3}: log|lhs| = {ll:.6}, log|rhs| = {rl:.6}, arg lhs - arg rhs = {:+.4}, residual {:.1e}",
            wrap_angle(la - ra),
            chk.residual(z)?
        );
    }

    let t = trivial_multiplicities(&g)?;
    println!(
        "eigenvalue 1: B has {}, reduced has {}",
        t.one_b, t.one_reduced
    );
    println!(
        "eigenvalue -(q-1): B has {}, reduced has {}",
        t.neg_b, t.neg_reduced
    );
    println!(
        "excess equals ((q-1)m - n, m - n) = ({}, {}): {}",
        (g.q() - 1) * g.m() - g.n(),
        g.m() as i64 - g.n() as i64,
        t.matches_formula(g.n(), g.q(), g.m())
    );
    Ok(())
}
