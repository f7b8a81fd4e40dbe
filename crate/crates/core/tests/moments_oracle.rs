//! Kernel moments against the closed form
//! `c·∫ e^{−z²} z^k e^{im log z} dz = (c/2)·Γ((k+1+im)/2)`,
//! with the complex Gamma function evaluated here by an independent
//! Stirling series.

use heat_oscillation::{kernel_moments, moment_norm, solve_m, KernelFlavor, QuadratureSpec};
use num_complex::Complex64;
use proptest::prelude::*;

/// `log Γ(z)` for `Re z > 0`: shift up by recurrence, then Stirling.
fn ln_gamma(z: Complex64) -> Complex64 {
    let mut z = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while z.re < 15.0 {
        shift += z.ln();
        z += 1.0;
    }
    // B2/(1·2), B4/(3·4), ...
    let coeffs = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360360.0,
        1.0 / 156.0,
    ];
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut p = inv;
    for c in coeffs {
        series += p * c;
        p *= inv2;
    }
    (z - 0.5) * z.ln() - z + 0.5 * (2.0 * std::f64::consts::PI).ln() + series - shift
}

fn oracle(n: u32, m: f64, flavor: KernelFlavor) -> (f64, f64) {
    let k = flavor.power(n) as f64;
    // normalization fixes c·Γ((k+1)/2)/2 = 1
    let base = ln_gamma(Complex64::new((k + 1.0) / 2.0, 0.0));
    let v = (ln_gamma(Complex64::new((k + 1.0) / 2.0, m / 2.0)) - base).exp();
    (v.re, v.im)
}

fn oracle_root(n: u32, ratio: f64, flavor: KernelFlavor) -> f64 {
    let norm = |m: f64| {
        let (a, b) = oracle(n, m, flavor);
        a.hypot(b)
    };
    let (mut lo, mut hi) = (1e-3, 1e2);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if norm(mid) > ratio {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn stirling_oracle_sanity() {
    // Γ(1/2) = √π, |Γ(iy)|² = π/(y sinh πy)
    let g = ln_gamma(Complex64::new(0.5, 0.0)).exp();
    assert!((g.re - std::f64::consts::PI.sqrt()).abs() < 1e-13);
    let y: f64 = 0.7;
    let lhs = (2.0 * ln_gamma(Complex64::new(1.0, y)).re).exp();
    let rhs = std::f64::consts::PI * y / (std::f64::consts::PI * y).sinh();
    assert!((lhs - rhs).abs() < 1e-13);
}

#[test]
fn moments_match_gamma_grid() {
    let spec = QuadratureSpec::default();
    for n in 1..=5 {
        for flavor in [KernelFlavor::AverageKernel, KernelFlavor::DataKernel] {
            for m in [0.01, 0.5, 1.0, 2.0, 3.6778, 7.5, 20.0] {
                let got = kernel_moments(n, m, flavor, &spec).unwrap();
                let (a, b) = oracle(n, m, flavor);
                assert!(
                    (got.a_value - a).abs() < 1e-9,
                    "n={n} {flavor:?} m={m}: A {} vs {a}",
                    got.a_value
                );
                assert!(
                    (got.b_value - b).abs() < 1e-9,
                    "n={n} {flavor:?} m={m}: B {} vs {b}",
                    got.b_value
                );
            }
        }
    }
}

#[test]
fn frequency_roots_match_oracle() {
    let spec = QuadratureSpec::default();
    let cases = [
        (1, 0.3, KernelFlavor::AverageKernel, 3.6778),
        (2, 0.3, KernelFlavor::AverageKernel, 4.2829),
        (2, 0.5, KernelFlavor::AverageKernel, 3.1221),
        (1, 0.3, KernelFlavor::DataKernel, 1.9729),
    ];
    for (n, ratio, flavor, rounded) in cases {
        let m = solve_m(n, ratio, flavor, &spec, 1e-12).unwrap();
        let reference = oracle_root(n, ratio, flavor);
        assert!((m - reference).abs() < 1e-8, "{m} vs {reference}");
        assert!((m - rounded).abs() < 5e-5);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn moment_modulus_matches_oracle(n in 1u32..=4, m in 0.05f64..30.0, data in any::<bool>()) {
        let flavor = if data { KernelFlavor::DataKernel } else { KernelFlavor::AverageKernel };
        let got = moment_norm(n, m, flavor, &QuadratureSpec::default()).unwrap();
        let (a, b) = oracle(n, m, flavor);
        prop_assert!((got - a.hypot(b)).abs() < 1e-9);
    }

    #[test]
    fn modulus_decreases_in_frequency(n in 1u32..=4, m in 0.01f64..40.0, dm in 0.01f64..5.0) {
        let spec = QuadratureSpec::default();
        let flavor = KernelFlavor::AverageKernel;
        let a = moment_norm(n, m, flavor, &spec).unwrap();
        let b = moment_norm(n, m + dm, flavor, &spec).unwrap();
        prop_assert!(b < a);
        prop_assert!(a < 1.0);
    }
}
