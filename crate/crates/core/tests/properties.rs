use approx::assert_relative_eq;
use proptest::prelude::*;

use crase_core::crase::{
    crase_cov, duan_at_witness, duan_sum_closed, minimize_duan_closed, rates_to_chi, witness_theta,
};
use crase_core::gaussian::{
    apply_map, beamsplitter_map, duan_sum, minimize_duan, partial_trace, photon_number,
    symplectic_check, two_mode_squeeze_map, vacuum_cov, CovarianceMatrix,
};
use crase_core::SqueezeParams;

/// Squeezer on (A0, B0), then the beamsplitter on (B0, C0), then drop C0.
fn pipeline_cov(chi: f64, eps: f64) -> CovarianceMatrix {
    let v = vacuum_cov(3).unwrap();
    let v = apply_map(&v, &two_mode_squeeze_map(chi).unwrap(), &[0, 1]).unwrap();
    let v = apply_map(&v, &beamsplitter_map(eps).unwrap(), &[1, 2]).unwrap();
    partial_trace(&v, &[0, 1]).unwrap()
}

/// Written out independently of the library.
fn closed_form(chi: f64, eps: f64, theta: f64) -> f64 {
    let (c, s) = (chi.cosh(), chi.sinh());
    1.0 + 2.0 * s * s
        - 2.0 * eps * (1.0 - theta) * s * s
        - 4.0 * (theta * (1.0 - theta)).sqrt() * (1.0 - eps).sqrt() * c * s
}

/// Exact minimum over theta in [0, 1]. With theta = sin^2(phi) the sum is
/// `a sin^2 + b cos^2 - k sin(2 phi)`, whose minimum is
/// `(a+b)/2 - sqrt((a-b)^2/4 + k^2)`.
fn exact_minimum(chi: f64, eps: f64) -> (f64, f64) {
    let (c, s) = (chi.cosh(), chi.sinh());
    let a = 1.0 + 2.0 * s * s;
    let b = 1.0 + 2.0 * (1.0 - eps) * s * s;
    let k = 2.0 * (1.0 - eps).sqrt() * s * c;
    let r = ((a - b).powi(2) / 4.0 + k * k).sqrt();
    let theta = if r == 0.0 {
        0.5
    } else {
        0.5 * (1.0 - (a - b) / (2.0 * r))
    };
    ((a + b) / 2.0 - r, theta)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn vacuum_saturates_the_bound(theta in 1e-6f64..(1.0 - 1e-6)) {
        let v = vacuum_cov(2).unwrap();
        prop_assert!((duan_sum(&v, theta, (0, 1)).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn pipeline_matches_closed_form(chi in 0.0f64..3.0, eps in 0.0f64..=1.0, theta in 1e-6f64..(1.0 - 1e-6)) {
        let v = pipeline_cov(chi, eps);
        let got = duan_sum(&v, theta, (0, 1)).unwrap();
        prop_assert!((got - closed_form(chi, eps, theta)).abs() < 1e-10);
        let p = SqueezeParams::new(chi, eps).unwrap();
        prop_assert!((duan_sum_closed(p, theta).unwrap() - closed_form(chi, eps, theta)).abs() < 1e-10);
        prop_assert!((crase_cov(p).entries() - v.entries()).amax() < 1e-10);
    }

    #[test]
    fn built_in_maps_are_symplectic(chi in 0.0f64..5.0, eps in 0.0f64..=1.0) {
        prop_assert!(symplectic_check(&two_mode_squeeze_map(chi).unwrap(), 1e-12 * chi.cosh().powi(2)));
        prop_assert!(symplectic_check(&beamsplitter_map(eps).unwrap(), 1e-12));
    }

    #[test]
    fn minimizer_is_sound(
        chi in 0.0f64..3.0,
        eps in 0.0f64..1.0,
        probes in proptest::collection::vec(1e-6f64..(1.0 - 1e-6), 1000),
    ) {
        let v = crase_cov(SqueezeParams::new(chi, eps).unwrap());
        let r = minimize_duan(&v, (0, 1)).unwrap();
        for t in probes {
            prop_assert!(r.sum_min <= duan_sum(&v, t, (0, 1)).unwrap() + 1e-12);
        }
        let (exact, _) = exact_minimum(chi, eps);
        prop_assert!((r.sum_min - exact).abs() < 1e-9 * exact.abs().max(1.0));
        prop_assert_eq!(r.entangled, r.sum_min < 1.0);
    }

    #[test]
    fn witness_is_entangled(cosh_chi in 1.0001f64..20.0, eps in 0.0f64..0.999) {
        let p = SqueezeParams::new(cosh_chi.acosh(), eps).unwrap();
        prop_assert!(duan_at_witness(p) < 1.0);
        prop_assert!(minimize_duan_closed(p).sum_min <= duan_at_witness(p) + 1e-12);
    }

    /// Unnormalized weights (|lambda|, 1/lambda) give the same test after
    /// dividing by lambda^2 + 1/lambda^2.
    #[test]
    fn footnote_rescaling(chi in 0.0f64..3.0, eps in 0.0f64..1.0, lambda in 0.1f64..10.0) {
        let v = crase_cov(SqueezeParams::new(chi, eps).unwrap());
        let (l2, il2) = (lambda * lambda, 1.0 / (lambda * lambda));
        let unnormalized = l2 * (v.get(0, 0) + v.get(1, 1))
            + il2 * (v.get(2, 2) + v.get(3, 3))
            + 2.0 * (v.get(0, 2) - v.get(1, 3));
        let bound = l2 + il2;
        let theta = l2 / bound;
        let normalized = duan_sum(&v, theta, (0, 1)).unwrap();
        prop_assert!((normalized * bound - unnormalized).abs() < 1e-9 * unnormalized.abs().max(1.0));
        if (unnormalized - bound).abs() > 1e-9 * bound {
            prop_assert_eq!(normalized < 1.0, unnormalized < bound);
        }
    }

    #[test]
    fn chi_increases_with_gain(gb in 0.1f64..10.0, f1 in 0.0f64..0.98, df in 1e-4f64..0.01) {
        let lo = rates_to_chi(gb, f1 * gb).unwrap();
        let hi = rates_to_chi(gb, (f1 + df) * gb).unwrap();
        prop_assert!(hi > lo);
    }

    #[test]
    fn photon_numbers_follow_recall(chi in 0.0f64..3.0, eps in 0.0f64..=1.0) {
        let v = pipeline_cov(chi, eps);
        let (na, nb) = (photon_number(&v, 0).unwrap(), photon_number(&v, 1).unwrap());
        prop_assert!((na - chi.sinh().powi(2)).abs() < 1e-10 * na.max(1.0));
        prop_assert!((nb - (1.0 - eps) * na).abs() < 1e-10 * na.max(1.0));
    }
}

#[test]
fn quoted_duan_values() {
    let chi = 2.0f64.acosh();
    let p = SqueezeParams::new(chi, 0.0).unwrap();
    let v = crase_cov(p);
    // 7 - 4 sqrt(3) = exp(-2 chi) at cosh(chi) = 2.
    assert_relative_eq!(
        duan_sum(&v, 0.5, (0, 1)).unwrap(),
        0.0717967697244908,
        epsilon = 1e-13
    );
    let r = minimize_duan(&v, (0, 1)).unwrap();
    assert_eq!(r.theta_star, 0.5);
    assert_relative_eq!(r.sum_min, (-2.0 * chi).exp(), epsilon = 1e-12);

    let p = SqueezeParams::new(chi, 0.25).unwrap();
    let theta = witness_theta(0.25);
    // At the witness weight the sum reduces to 1 - 2(1-eps)(1 - e^{-2chi})/(2-eps).
    let reduced = 1.0 - 2.0 * 0.75 * (1.0 - (-2.0 * chi).exp()) / 1.75;
    let at_witness = duan_sum(&crase_cov(p), theta, (0, 1)).unwrap();
    assert_relative_eq!(at_witness, reduced, epsilon = 1e-12);
    assert_relative_eq!(at_witness, 0.2043972, epsilon = 1e-7);
    let r = minimize_duan_closed(p);
    let (exact, exact_theta) = exact_minimum(chi, 0.25);
    assert!(r.sum_min <= at_witness);
    assert_relative_eq!(r.sum_min, exact, epsilon = 1e-12);
    assert!((r.theta_star - exact_theta).abs() < 1e-6);
}

#[test]
fn squeezed_vacuum_blocks() {
    for chi in [0.0, 0.4, 2.0f64.acosh(), 2.5] {
        let v = apply_map(
            &vacuum_cov(2).unwrap(),
            &two_mode_squeeze_map(chi).unwrap(),
            &[0, 1],
        )
        .unwrap();
        let d = (2.0 * chi).cosh() / 2.0;
        let x = (2.0 * chi).sinh() / 2.0;
        for i in 0..4 {
            assert_relative_eq!(v.get(i, i), d, epsilon = 1e-12 * d);
        }
        assert_relative_eq!(v.get(0, 2), x, epsilon = 1e-12 * d);
        assert_relative_eq!(v.get(1, 3), -x, epsilon = 1e-12 * d);
        let reduced = partial_trace(&v, &[0]).unwrap();
        assert_relative_eq!(
            photon_number(&reduced, 0).unwrap(),
            chi.sinh().powi(2),
            epsilon = 1e-12 * d
        );
        assert!(reduced.is_physical());
    }
}
