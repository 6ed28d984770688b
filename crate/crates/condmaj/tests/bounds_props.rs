//! Bound-layer invariants: the Monte-Carlo maximizer never crosses the
//! closed form, the two-column bound is structurally sound for any basis
//! pair, and the doubled-memory bound stays normalized wherever its
//! parameters roam.

use condmaj::bounds::{
    bipartite_bound, eta_monte_carlo, overlap_constant, tripartite_bound, MeasurementBasis,
};
use condmaj::closedform::build_omega;
use condmaj::cmdecide::conditionally_majorizes;
use condmaj::sampling;
use rand::Rng;

#[test]
fn eta_monte_carlo_never_exceeds_closed_form() {
    let mut rng = sampling::rng(2323);
    for case in 0..20 {
        let d = 2 + case % 2;
        let b1 = MeasurementBasis::new(sampling::haar_basis(d, &mut rng)).unwrap();
        let b2 = MeasurementBasis::new(sampling::haar_basis(d, &mut rng)).unwrap();
        let c = overlap_constant(&b1, &b2);
        let eta = 0.25 * (1.0 + c) * (1.0 + c);
        let mc = eta_monte_carlo(&b1, &b2, 2000, case as u64);
        assert!(
            mc <= eta + 1e-9,
            "case {case}: sampled {mc} above closed form {eta}"
        );
        assert!(mc > 0.0);
    }
}

#[test]
fn tripartite_bound_structure_for_random_bases() {
    let mut rng = sampling::rng(2424);
    for case in 0..50 {
        let d = 2 + case % 2;
        let b1 = MeasurementBasis::new(sampling::haar_basis(d, &mut rng)).unwrap();
        let b2 = MeasurementBasis::new(sampling::haar_basis(d, &mut rng)).unwrap();
        let alpha = 0.75 + 0.2 * rng.random::<f64>();
        let t = tripartite_bound(&b1, &b2, alpha).unwrap();
        // alpha * beta recovers eta.
        assert!((t.alpha * t.beta - t.eta).abs() < 1e-9);
        // l is the largest integer with beta * l <= 1.
        assert!(t.beta * t.l as f64 <= 1.0 + 1e-9);
        assert!(t.beta * (t.l + 1) as f64 > 1.0 - 1e-9);
        // omega: l plateaus of height beta, then the remainder, then zeros.
        let omega = t.omega_matrix.omega.as_slice();
        for (i, &w) in omega.iter().enumerate() {
            if i < t.l {
                assert!((w - t.beta).abs() < 1e-9);
            } else if i == t.l {
                assert!((w - (1.0 - t.l as f64 * t.beta)).abs() < 1e-9);
            } else {
                assert_eq!(w, 0.0);
            }
        }
        assert_eq!(omega.len(), d * d);
        // Total mass of the assembled bound matrix.
        let total: f64 = t.omega_matrix.as_matrix.matrix().data.iter().sum();
        assert!((total - 1.0).abs() < 1e-9);
    }
}

/// The plateau vector majorizes every conditional whose peak stays below
/// beta, which is exactly what the mass condition of the generic
/// construction needs; the two constructions must therefore agree.
#[test]
fn tripartite_bound_agrees_with_generic_omega_construction() {
    let mut rng = sampling::rng(2525);
    let mut confirmed = 0usize;
    for _ in 0..30 {
        let b1 = MeasurementBasis::new(sampling::haar_basis(2, &mut rng)).unwrap();
        let b2 = MeasurementBasis::new(sampling::haar_basis(2, &mut rng)).unwrap();
        let alpha = 0.9;
        let t = tripartite_bound(&b1, &b2, alpha).unwrap();
        // A random product outcome matrix from the scenario.
        let a1 = MeasurementBasis::new(sampling::haar_basis(2, &mut rng)).unwrap();
        let a2 = MeasurementBasis::new(sampling::haar_basis(2, &mut rng)).unwrap();
        let psi = sampling::haar_state(8, &mut rng);
        let q = condmaj::selfcheck::tripartite_outcome_matrix(&psi, &b1, &b2, &a1, &a2);
        if let Some(generic) = build_omega(&t.omega_matrix.omega, alpha, &q) {
            confirmed += 1;
            let d = conditionally_majorizes(&generic.as_matrix, &q).unwrap();
            assert!(d.verdict);
            // Same alpha and omega produce the same matrix.
            assert!(
                generic
                    .as_matrix
                    .matrix()
                    .max_abs_diff(t.omega_matrix.as_matrix.matrix())
                    < 1e-12
            );
        }
    }
    assert!(confirmed > 0, "mass condition never satisfied");
}

#[test]
fn bipartite_psi_normalized_over_random_parameters() {
    let mut rng = sampling::rng(2626);
    for case in 0..200 {
        let lambda = sampling::random_prob_vector(2, &mut rng);
        let s = MeasurementBasis::new(sampling::haar_basis(2, &mut rng)).unwrap();
        let t = MeasurementBasis::new(sampling::haar_basis(2, &mut rng)).unwrap();
        let (x1, z1, x2, z2) = loop {
            let idx = (
                rng.random_range(0..2),
                rng.random_range(0..2),
                rng.random_range(0..2),
                rng.random_range(0..2),
            );
            if (idx.0, idx.1) != (idx.2, idx.3) {
                break idx;
            }
        };
        let Ok(probe) = bipartite_bound(&lambda, &s, &t, x1, z1, x2, z2, 0.0) else {
            continue;
        };
        let top = probe.px[x1] * probe.qz[z1];
        for k in 0..=6 {
            let omega = top * k as f64 / 6.0;
            let b = bipartite_bound(&lambda, &s, &t, x1, z1, x2, z2, omega).unwrap();
            assert!(
                (b.psi.norm() - 1.0).abs() <= 1e-9,
                "case {case}: norm drifted at weight {omega}"
            );
        }
        let _ = case;
    }
}

#[test]
fn bipartite_post_measurement_probabilities_are_consistent() {
    let mut rng = sampling::rng(2727);
    for _ in 0..100 {
        let lambda = sampling::random_prob_vector(2, &mut rng);
        let s = MeasurementBasis::new(sampling::haar_basis(2, &mut rng)).unwrap();
        let t = MeasurementBasis::new(sampling::haar_basis(2, &mut rng)).unwrap();
        let Ok(b) = bipartite_bound(&lambda, &s, &t, 0, 0, 1, 1, 0.0) else {
            continue;
        };
        // p_x = sum_y lambda_y |<s_x|y>|^2, and both families sum to one.
        for (x, sv) in s.vectors().iter().enumerate() {
            let expect: f64 = (0..2)
                .map(|y| lambda.as_slice()[y] * sv[y].norm_sqr())
                .sum();
            assert!((b.px[x] - expect).abs() < 1e-12);
        }
        assert!((b.px.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        assert!((b.qz.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        // Memory states are normalized.
        for phi in b.phi_states.iter().chain(b.varphi_states.iter()) {
            assert!((phi.norm() - 1.0).abs() < 1e-9);
        }
    }
}
