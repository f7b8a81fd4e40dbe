//! Prescriptions: dispatch, the limit chain, reflection and serialization.

use heat_oscillation::prescribe::PeriodicSplit;
use heat_oscillation::*;
use proptest::prelude::*;

fn spec() -> QuadratureSpec {
    QuadratureSpec::default()
}

/// Ordered quadruples with random ties.
fn quadruple() -> impl Strategy<Value = (f64, f64, f64, f64)> {
    (
        -3.0f64..3.0,
        prop::array::uniform3(prop_oneof![Just(0.0), 0.05f64..2.0]),
    )
        .prop_map(|(r, gaps)| {
            let alpha = r + gaps[0];
            let beta = alpha + gaps[1];
            (r, alpha, beta, beta + gaps[2])
        })
}

#[test]
fn dispatch_by_ties() {
    let cases = [
        ((0.5, 0.5, 0.5, 0.5), Construction::Constant),
        ((-1.0, 0.2, 0.2, 1.0), Construction::PeriodicPlateau),
        ((0.0, 0.0, 1.0, 1.0), Construction::LogLogSine),
        ((0.0, 0.0, 0.0, 1.0), Construction::RisingBumps),
        ((0.0, 1.0, 1.0, 1.0), Construction::FallingBumps),
        ((0.0, 0.0, 1.0, 2.0), Construction::LogLogWithPeakBumps),
        ((-2.0, 0.0, 1.0, 1.0), Construction::LogLogWithPeakBumps),
        ((-1.0, -0.3, 0.3, 1.0), Construction::DataLogSine),
        ((-2.0, -0.3, 0.3, 1.0), Construction::LogSinePlusPeriodic),
        ((-1.0, -0.3, 0.3, 2.0), Construction::LogSinePlusPeriodic),
    ];
    for ((r, a, b, s), want) in cases {
        let cert = prescribe_data(r, a, b, s, 1, &spec()).unwrap();
        assert_eq!(cert.construction, want, "({r}, {a}, {b}, {s})");
    }
    let mirrored = prescribe_data(-2.0, 0.0, 1.0, 1.0, 1, &spec()).unwrap();
    assert!(mirrored.reflected);
}

#[test]
fn input_errors() {
    let s = spec();
    match prescribe_average(-1.0, -0.3, 0.4, 1.0, 1, &s) {
        Err(e @ Error::Symmetry { .. }) => assert!(e.to_string().contains("p+q=α+β")),
        other => panic!("{other:?}"),
    }
    assert!(matches!(
        prescribe_average(-1.0, -1.0, 1.0, 1.0, 1, &s),
        Err(Error::OutOfScope(_))
    ));
    assert!(matches!(
        prescribe_data(1.0, 0.0, 0.5, 2.0, 1, &s),
        Err(Error::Domain(_))
    ));
    assert!(matches!(
        prescribe_data(0.0, 0.1, 0.5, 2.0, 0, &s),
        Err(Error::Domain(_))
    ));
    assert!(matches!(
        prescribe_data(f64::NAN, 0.1, 0.5, 2.0, 1, &s),
        Err(Error::Domain(_))
    ));
}

#[test]
fn two_mode_example_breaks_symmetry() {
    let cert = two_mode_example(&spec()).unwrap();
    let (p, q) = cert.expected_h_band.unwrap();
    let (a, b) = cert.expected_u_band;
    assert!((p + q).abs() < 1e-12);
    assert!((a + b).abs() > 0.04);
    assert!(cert.chain_holds(0.0));
}

#[test]
fn split_stays_inside_the_gap() {
    let PeriodicSplit { epsilon, delta } = PeriodicSplit::new(-1.0, -0.3, 0.3);
    assert!(epsilon > 0.0 && delta > 0.3 && (epsilon + delta - 1.0).abs() < 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn data_prescription_pins_its_limits((r, a, b, s) in quadruple(), n in 1u32..=3) {
        let cert = prescribe_data(r, a, b, s, n, &spec()).unwrap();
        let (lo, hi) = cert.expected_phi_band;
        prop_assert!((lo - r).abs() < 1e-9 && (hi - s).abs() < 1e-9, "{:?} for {:?}", cert.expected_phi_band, (r, a, b, s));
        prop_assert_eq!(cert.expected_u_band, (a, b));
        prop_assert!(cert.chain_holds(1e-9));
        let text = cert.to_json().unwrap();
        prop_assert_eq!(PrescriptionCertificate::from_json(&text).unwrap(), cert);
    }

    #[test]
    fn reflection_flips_bands((r, a, b, s) in quadruple(), n in 1u32..=3, log_tau in 0.0f64..8.0) {
        let plain = prescribe_data(r, a, b, s, n, &spec()).unwrap();
        let mirror = prescribe_data(-s, -b, -a, -r, n, &spec()).unwrap();
        let flip = |(lo, hi): (f64, f64)| (-hi, -lo);
        let close = |x: (f64, f64), y: (f64, f64)| (x.0 - y.0).abs() < 1e-9 && (x.1 - y.1).abs() < 1e-9;
        prop_assert!(close(plain.expected_phi_band, flip(mirror.expected_phi_band)));
        prop_assert!(close(plain.expected_u_band, flip(mirror.expected_u_band)));
        if plain.reflected {
            // built from the mirror, so the data are its negation
            let tau = 10f64.powf(log_tau);
            let x = eval_phi(&plain.data, tau).unwrap();
            let y = eval_phi(&mirror.data, tau).unwrap();
            prop_assert!((x + y).abs() < 1e-12 * (1.0 + x.abs()));
        }
    }

    #[test]
    fn average_prescription_chain(p in -2.0f64..0.0, width in 0.2f64..3.0, frac in 0.05f64..0.9, n in 1u32..=3) {
        let q = p + width;
        let mid = (p + q) / 2.0;
        let half = frac * width / 2.0;
        let (a, b) = (mid - half, mid + half);
        let cert = prescribe_average(p, a, b, q, n, &spec()).unwrap();
        prop_assert_eq!(cert.expected_h_band, Some((p, q)));
        prop_assert!(cert.chain_holds(1e-9));
        let m = cert.m_used.unwrap();
        let ratio = moment_norm(n, m, KernelFlavor::AverageKernel, &spec()).unwrap();
        prop_assert!((ratio - (b - a) / (q - p)).abs() < 1e-9);
    }
}
