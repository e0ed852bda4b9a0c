use approx::assert_relative_eq;
use hynb::model::ModelParams;
use hynb::signal::{
    gamma, signal_spectrum, symmetric_degree, symmetric_from_margin, symmetric_mu2,
};
use proptest::prelude::*;

#[test]
fn four_block_example_values() {
    let p = ModelParams::symmetric(2000, 4, 4, 130.0, 2.0).unwrap();
    let s = signal_spectrum(&p).unwrap();
    assert_relative_eq!(s.d, 4.0, epsilon = 1e-12);
    assert_relative_eq!(s.mu[0], 4.0, epsilon = 1e-12);
    for i in 1..4 {
        assert_relative_eq!(s.mu[i], 2.0, epsilon = 1e-12);
        assert_relative_eq!(s.tau[i], 1.0 / 3.0, epsilon = 1e-12);
        assert_relative_eq!(
            s.theoretical_overlap(i).unwrap(),
            0.5f64.sqrt(),
            epsilon = 1e-12
        );
    }
    assert_eq!(s.r0, 4);
    assert_eq!(s.eigenspace(1, 1e-9), vec![1, 2, 3]);
    // Outliers of the reduced operator sit at (q-1) mu: 12 and 6.
    assert_relative_eq!(3.0 * s.mu[0], 12.0, epsilon = 1e-12);
    let (g1, _) = s.gamma_ell(1, 1).unwrap();
    assert_relative_eq!(g1, 5.0 / 3.0, epsilon = 1e-12);
}

#[test]
fn two_block_q3_values() {
    let p = ModelParams::symmetric(1000, 2, 3, 12.0, 4.0).unwrap();
    let s = signal_spectrum(&p).unwrap();
    assert_relative_eq!(s.d, 6.0, epsilon = 1e-12);
    assert_relative_eq!(s.mu[1], 2.0, epsilon = 1e-12);
    assert_relative_eq!(s.tau[1], 0.75, epsilon = 1e-12);
    assert_relative_eq!(s.ks_margin[1], 2.0, epsilon = 1e-12);
    assert_relative_eq!(
        s.theoretical_overlap(1).unwrap(),
        0.2f64.sqrt(),
        epsilon = 1e-12
    );
}

#[test]
fn below_threshold_index_is_not_informative() {
    let p = ModelParams::symmetric(1000, 2, 3, 8.0, 5.0).unwrap();
    let s = signal_spectrum(&p).unwrap();
    assert_eq!(s.r0, 1);
    assert!(s.theoretical_overlap(1).is_err());
    assert!(s.gamma_ell(1, 2).is_err());
}

#[test]
fn gamma_limits() {
    assert_eq!(gamma(3, 6.0, 2.0, 0), Some(1.0));
    assert_eq!(gamma(3, 8.0, 2.0, 3), None);
    assert_eq!(gamma(3, 6.0, 0.0, 3), None);
}

proptest! {
    #[test]
    fn eigenpairs_are_pi_orthonormal(
        r in 2usize..=5,
        q in 2usize..=5,
        c_out in 0.5f64..10.0,
        ratio in 1.1f64..50.0,
    ) {
        let p = ModelParams::symmetric(500, r, q, c_out * ratio, c_out).unwrap();
        let s = signal_spectrum(&p).unwrap();
        for i in 0..r {
            let qphi = s.apply_q(&s.phi[i]);
            for k in 0..r {
                prop_assert!((qphi[k] - s.mu[i] * s.phi[i][k]).abs() <= 1e-10 * s.mu[0].abs().max(1.0));
            }
            for j in 0..r {
                let target = if i == j { 1.0 } else { 0.0 };
                prop_assert!((s.pi_dot(&s.phi[i], &s.phi[j]) - target).abs() < 1e-10);
            }
        }
        prop_assert!((s.mu[0] - s.d).abs() < 1e-9 * s.d);
        prop_assert!((s.d - symmetric_degree(r, q, c_out * ratio, c_out)).abs() < 1e-9 * s.d);
        prop_assert!((s.mu[1] - symmetric_mu2(r, q, c_out * ratio, c_out)).abs() < 1e-9 * s.d);
    }

    #[test]
    fn gamma_tends_to_inverse_squared_overlap(q in 2usize..=5, d in 1.0f64..20.0, excess in 0.05f64..5.0) {
        let mu = ((1.0 + excess) * d / (q - 1) as f64).sqrt();
        let p = hynb::signal::theoretical_overlap_value(q, d, mu);
        let g = gamma(q, d, mu, 2000).unwrap();
        prop_assert!((g * p * p - 1.0).abs() < 1e-9);
        // Increasing in ell.
        prop_assert!(gamma(q, d, mu, 3).unwrap() <= gamma(q, d, mu, 4).unwrap());
    }

    #[test]
    fn margin_parametrisation_round_trips(r in 2usize..=4, q in 2usize..=4, d in 2.0f64..12.0, m in -0.5f64..1.0) {
        if let Ok((c_in, c_out)) = symmetric_from_margin(r, q, d, m) {
            prop_assert!((symmetric_degree(r, q, c_in, c_out) - d).abs() < 1e-9);
            let mu2 = symmetric_mu2(r, q, c_in, c_out);
            prop_assert!(((q - 1) as f64 * mu2 * mu2 - (1.0 + m) * d).abs() < 1e-9);
        }
    }
}
