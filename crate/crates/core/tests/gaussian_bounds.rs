use proptest::prelude::*;

use confbc::channels::{kappa, GaussianBc};
use confbc::gaussian::{
    beta_envelope, decode_forward_gap_bound, decode_forward_region, gap_certificate, half_bit_degraded_region,
    half_bit_one_sided_region, outer_envelope_g, psi,
};
use confbc::regions::{envelope_dominates, DirectionSet};

/// A channel with `|a| ≥ |b|` and partly correlated noises.
fn channel() -> impl Strategy<Value = GaussianBc> {
    (-3.0f64..3.0, -3.0f64..3.0, -0.95f64..0.95, -2.0f64..1.5, 0.0f64..1.5, 0.0f64..1.5).prop_map(
        |(a, b, lambda, log_p, c12, c21)| {
            let (a, b) = if a.abs() >= b.abs() { (a, b) } else { (b, a) };
            GaussianBc::new(a, b, lambda, 10f64.powf(log_p), c12, c21).unwrap()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn psi_is_increasing_and_concave(x in 0.0f64..100.0, h in 1e-3f64..1.0) {
        let (a, b, c) = (psi(x).unwrap(), psi(x + h).unwrap(), psi(x + 2.0 * h).unwrap());
        prop_assert!(b > a);
        prop_assert!(b - a >= c - b - 1e-12);
    }

    #[test]
    fn kappa_is_nonnegative_and_sign_symmetric(a in -5.0f64..5.0, b in -5.0f64..5.0, l in -0.99f64..0.99) {
        let k = kappa(a, b, l);
        prop_assert!(k >= 0.0);
        prop_assert!((k - kappa(-a, -b, l)).abs() <= 1e-12 * (1.0 + k));
    }

    #[test]
    fn kappa_is_continuous_in_lambda(a in -5.0f64..5.0, b in -5.0f64..5.0, l in -0.9f64..0.9) {
        let k = kappa(a, b, l);
        prop_assert!((kappa(a, b, l + 1e-7) - k).abs() <= 1e-4 * (1.0 + k));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn achievable_regions_sit_inside_the_outer_bound(ch in channel()) {
        let step = 0.05;
        let d3 = DirectionSet::canonical_3d();
        let outer = outer_envelope_g(&ch, step, &d3).unwrap();
        let df = beta_envelope(step, &d3, |b| decode_forward_region(&ch, b)).unwrap();
        prop_assert!(envelope_dominates(&outer, &df, 1e-9).unwrap().dominated);

        let d2 = DirectionSet::canonical_2d();
        let outer2 = outer_envelope_g(&ch, step, &d2).unwrap();
        let half = beta_envelope(step, &d2, |b| half_bit_degraded_region(&ch, b)).unwrap();
        prop_assert!(envelope_dominates(&outer2, &half, 1e-9).unwrap().dominated);

        let one_sided = GaussianBc { c12: 0.0, ..ch };
        let outer1 = outer_envelope_g(&one_sided, step, &d3).unwrap();
        let half1 = beta_envelope(step, &d3, |b| half_bit_one_sided_region(&one_sided, b)).unwrap();
        prop_assert!(envelope_dominates(&outer1, &half1, 1e-9).unwrap().dominated);
    }

    #[test]
    fn gap_certificates_hold(ch in channel()) {
        for gap in gap_certificate(&ch, 0.05).unwrap() {
            prop_assert!(gap.holds(1e-9), "{gap:?}");
        }
    }
}

#[test]
fn decode_forward_gap_bound_values() {
    assert!((decode_forward_gap_bound(0.0) - 0.5).abs() < 1e-15);
    assert!((decode_forward_gap_bound(0.5) - 1.0).abs() < 1e-15);
    assert!((decode_forward_gap_bound(-0.5) - 1.0).abs() < 1e-15);
    assert!(decode_forward_gap_bound(1.0).is_infinite());
}
