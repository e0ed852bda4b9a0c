mod common;

use hynb::eigen::dense_spectrum;
use hynb::ihara::{
    ihara_bass_residual, p_inverse_is_exact, trivial_multiplicities, IharaBassCheck,
    ReducedOperator,
};
use hynb::nb::{build_b_integer, identity_deviations, NBOperator};
use hynb::sparse::MatVec;
use hynb::Hypergraph;
use num_complex::Complex64;
use proptest::prelude::*;

use common::random_instance;

fn small_instance() -> impl Strategy<Value = Hypergraph> {
    (any::<u64>(), 2usize..=5).prop_map(|(seed, q)| random_instance(seed, 6..=24, &[q], 3.0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn algebraic_identities_are_exact(g in small_instance(), seed in any::<u64>()) {
        let rep = identity_deviations(&g, 4, 2, seed);
        prop_assert!(rep.passed(), "{:?}", rep.deviations);
        prop_assert!(p_inverse_is_exact(&g));
    }

    #[test]
    fn b_has_zero_one_entries_and_skips_backtracking(g in small_instance()) {
        let b = build_b_integer(&g);
        let q = g.q();
        for row in 0..b.rows() {
            let (u, e) = g.oriented_pair(row);
            for (col, v) in b.row(row) {
                prop_assert_eq!(v, 1);
                let (w, f) = g.oriented_pair(col);
                prop_assert!(f != e && w != u && g.edge(e).contains(&w));
                prop_assert_eq!(col / q, f);
            }
        }
    }

    #[test]
    fn determinant_identity_holds(g in small_instance(), r in 0.1f64..2.0, th in 0.0f64..std::f64::consts::TAU) {
        prop_assume!(g.oriented_count() <= 400);
        let z = Complex64::from_polar(r, th);
        if let Ok(res) = ihara_bass_residual(&g, z) {
            prop_assert!(res < 1e-6, "residual {res} at {z}");
        }
    }
}

#[test]
fn calibrated_sign_is_parity_of_qm() {
    for seed in 0..20 {
        let g = random_instance(seed, 5..=20, &[2, 3, 4], 2.0);
        if g.m() == 0 {
            continue;
        }
        let chk = IharaBassCheck::new(&g).unwrap();
        assert!(
            chk.offset_matches_parity(),
            "seed {seed}: offset {}",
            chk.phase_offset
        );
    }
}

#[test]
fn trivial_multiplicities_match_edge_counts() {
    let mut checked = 0;
    for seed in 0..40 {
        let g = random_instance(seed, 8..=20, &[3, 4], 5.0);
        if g.m() < g.n() || g.oriented_count() > 600 {
            continue;
        }
        let t = trivial_multiplicities(&g).unwrap();
        assert!(t.matches_formula(g.n(), g.q(), g.m()), "seed {seed}: {t:?}");
        checked += 1;
    }
    assert!(checked >= 10);
}

#[test]
fn reduced_spectrum_is_contained_in_nb_spectrum() {
    for seed in 0..6 {
        let g = random_instance(100 + seed, 10..=16, &[3], 3.0);
        if g.oriented_count() > 300 || g.m() == 0 {
            continue;
        }
        let q = g.q() as f64;
        let b = dense_spectrum(&NBOperator::new(&g).to_dense(), false)
            .unwrap()
            .values;
        let red = dense_spectrum(&ReducedOperator::new(&g).to_dense(), false)
            .unwrap()
            .values;
        for z in red {
            if (z - 1.0).norm() < 1e-6 || (z + (q - 1.0)).norm() < 1e-6 {
                continue;
            }
            let nearest = b
                .iter()
                .map(|w| (w - z).norm())
                .fold(f64::INFINITY, f64::min);
            assert!(
                nearest < 1e-6 * z.norm().max(1.0),
                "seed {seed}: {z} missing from the spectrum of B"
            );
        }
    }
}

#[test]
fn nb_and_reduced_agree_on_leading_eigenvalue() {
    let g = random_instance(7, 60..=60, &[3], 4.0);
    let b = dense_spectrum(&NBOperator::new(&g).to_dense(), false)
        .unwrap()
        .values;
    let red = dense_spectrum(&ReducedOperator::new(&g).to_dense(), false)
        .unwrap()
        .values;
    let top = |v: &[Complex64]| v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    assert!((top(&b) - top(&red)).abs() < 1e-8);
}
