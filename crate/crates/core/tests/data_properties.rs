//! Properties of the initial-data family: the periodic wave, ball averages,
//! analytic bands and serialization.

use std::f64::consts::{PI, TAU};

use heat_oscillation::*;
use proptest::prelude::*;

/// Composite Simpson on `[a, b]` with `n` (even) intervals.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += f(a + h * i as f64) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

fn wave() -> impl Strategy<Value = Trapezoid> {
    (0.05f64..3.0, -3.0f64..-0.05).prop_map(|(hi, lo)| Trapezoid::fitted(hi, lo).unwrap())
}

fn leaf() -> impl Strategy<Value = InitialDataExpr> {
    prop_oneof![
        (-2.0f64..2.0).prop_map(InitialDataExpr::constant),
        (0.1f64..2.0, 0.2f64..6.0, -1.0f64..1.0)
            .prop_map(|(a, m, c)| InitialDataExpr::log_sine(a, m, c)),
        (0.1f64..2.0, 0.2f64..6.0, -1.0f64..1.0, 1u32..=4)
            .prop_map(|(a, m, c, n)| InitialDataExpr::log_sine_preimage(a, m, c, n)),
        (-1.5f64..1.5, -1.0f64..1.0)
            .prop_map(|(amplitude, offset)| InitialDataExpr::LogLogSine { amplitude, offset }),
        wave().prop_map(InitialDataExpr::PeriodicZeroMean),
        (-2.0f64..2.0, 0.1f64..1.0, -1.0f64..1.0, 2.5f64..5.0).prop_map(
            |(height, half_width, baseline, base)| {
                InitialDataExpr::BumpTrain {
                    height,
                    half_width,
                    baseline,
                    centers: CenterLaw::Geometric { base },
                }
            }
        ),
        (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(c, s)| InitialDataExpr::LogPeriodic {
            g: PeriodicProfile::TrigPoly {
                constant: 0.1,
                cos: vec![c],
                sin: vec![0.0, s]
            }
        }),
    ]
}

fn expr() -> impl Strategy<Value = InitialDataExpr> {
    leaf().prop_recursive(2, 8, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(InitialDataExpr::negated),
            prop::collection::vec(inner, 1..4).prop_map(InitialDataExpr::sum),
        ]
    })
}

#[test]
fn out_of_domain_radii() {
    let e = InitialDataExpr::log_sine(1.0, 1.0, 0.0);
    assert!(matches!(eval_phi(&e, -1.0), Err(Error::Domain(_))));
    assert!(matches!(eval_phi(&e, f64::NAN), Err(Error::Domain(_))));
    assert!(matches!(eval_phi(&e, f64::INFINITY), Err(Error::Range(_))));
    assert!(matches!(numeric_h(&e, 0, 1.0, 1e-9), Err(Error::Domain(_))));
}

#[test]
fn first_double_exponential_centers() {
    let peak = CenterLaw::DoubleExp {
        parity: Parity::Peak,
    };
    let trough = CenterLaw::DoubleExp {
        parity: Parity::Trough,
    };
    let c0 = peak.center(0).unwrap();
    assert!((c0 - ((PI / 2.0).exp().exp() - 2.0)).abs() < 1e-9 * c0);
    assert!((c0 - 120.6).abs() < 0.5);
    let t0 = trough.center(0).unwrap();
    assert!((t0.ln().ln() - 1.5 * PI).abs() < 1e-12);
    assert!(peak.center(1).is_none());
    assert_eq!(peak.inner_exponent(3), Some(6.0 * PI + PI / 2.0));
}

#[test]
fn periodic_average_against_brute_force() {
    let w = Trapezoid::fitted(1.3, -0.9).unwrap();
    let e = InitialDataExpr::sum(vec![
        InitialDataExpr::constant(0.2),
        InitialDataExpr::PeriodicZeroMean(w),
    ]);
    for n in 1..=3u32 {
        for tau in [3.0f64, 50.0, 400.0] {
            let brute = n as f64 / tau.powi(n as i32)
                * simpson(
                    |r| eval_phi(&e, r).unwrap() * r.powi(n as i32 - 1),
                    0.0,
                    tau,
                    400_000,
                );
            let got = numeric_h(&e, n, tau, 1e-11).unwrap();
            assert!(
                (got - brute).abs() < 1e-7,
                "n={n} τ={tau}: {got} vs {brute}"
            );
        }
    }
}

#[test]
fn preimage_band_is_widened() {
    let e = InitialDataExpr::log_sine_preimage(0.8, 3.0, 0.1, 2);
    let (lo, hi) = analytic_band_phi(&e).unwrap();
    let amp = 0.8 * (1.0f64 + 1.5 * 1.5).sqrt();
    assert!((lo - (0.1 - amp)).abs() < 1e-9 && (hi - (0.1 + amp)).abs() < 1e-9);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn wave_has_zero_mean_and_exact_range(w in wave(), shift in -50.0f64..50.0) {
        let mean = simpson(|y| w.eval(y + shift), 0.0, TAU, 20_000) / TAU;
        prop_assert!(mean.abs() < 1e-6 * (w.v_max - w.v_min));
        let (p_hi, p_lo) = w.plateaus();
        prop_assert!(p_hi >= 0.0 && p_lo >= 0.0);
        let (y_max, y_min) = w.extremizers();
        prop_assert!((w.eval(y_max) - w.v_max).abs() < 1e-12);
        prop_assert!((w.eval(y_min) - w.v_min).abs() < 1e-12);
        for i in 0..64 {
            let y = shift + i as f64 * 0.37;
            let v = w.eval(y);
            prop_assert!(v <= w.v_max + 1e-12 && v >= w.v_min - 1e-12);
            prop_assert!((v - w.eval(y + TAU)).abs() < 1e-9);
        }
    }

    #[test]
    fn json_round_trip(e in expr()) {
        let text = e.to_json().unwrap();
        prop_assert_eq!(InitialDataExpr::from_json(&text).unwrap(), e);
    }

    #[test]
    fn average_identity_holds(a in 0.1f64..2.0, m in 0.2f64..6.0, c in -1.0f64..1.0, n in 1u32..=4, log_tau in -1.0f64..6.0) {
        // φ = H + (τ/n) H′ with H′ by central differences
        let h = InitialDataExpr::log_sine(a, m, c);
        let phi = phi_from_h(&h, n).unwrap();
        let tau = 10f64.powf(log_tau);
        let d = 1e-5 * tau;
        let dh = (eval_phi(&h, tau + d).unwrap() - eval_phi(&h, tau - d).unwrap()) / (2.0 * d);
        let lhs = eval_phi(&phi, tau).unwrap();
        prop_assert!((lhs - eval_phi(&h, tau).unwrap() - tau / n as f64 * dh).abs() < 1e-6);
        // slow oscillation: τ|H′| ≤ a·m
        prop_assert!(tau * dh.abs() <= a * m * (1.0 + 1e-6));
    }

    #[test]
    fn numeric_average_matches_closed_form(a in 0.1f64..2.0, m in 0.2f64..6.0, c in -1.0f64..1.0, n in 1u32..=3, log_tau in -0.5f64..8.0) {
        let h = InitialDataExpr::log_sine(a, m, c);
        let phi = phi_from_h(&h, n).unwrap();
        prop_assert_eq!(closed_h(&phi, n), Some(h.clone()));
        let tau = 10f64.powf(log_tau);
        let got = numeric_h(&phi, n, tau, 1e-10).unwrap();
        prop_assert!((got - eval_phi(&h, tau).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn values_stay_in_sup_bound(e in expr(), log_tau in -3.0f64..12.0) {
        let tau = 10f64.powf(log_tau);
        prop_assert!(eval_phi(&e, tau).unwrap().abs() <= e.sup_abs() + 1e-12);
    }

    #[test]
    fn log_sine_band(a in 0.1f64..2.0, m in 0.2f64..6.0, c in -1.0f64..1.0) {
        let (lo, hi) = analytic_band_phi(&InitialDataExpr::log_sine(a, m, c)).unwrap();
        prop_assert!((lo - (c - a)).abs() < 1e-9 && (hi - (c + a)).abs() < 1e-9);
        let (nlo, nhi) = analytic_band_phi(&InitialDataExpr::log_sine(a, m, c).negated()).unwrap();
        prop_assert!((nlo + hi).abs() < 1e-9 && (nhi + lo).abs() < 1e-9);
    }
}
