//! Kernel moments `A(m)`, `B(m)` of the two radial representation formulas
//! and the frequency solve that prescribes their modulus.
//!
//! With `c` the kernel coefficient and `k` the kernel power,
//!
//! ```text
//! A(m) = c ∫₀^∞ e^{−z²} z^k cos(m log z) dz,
//! B(m) = c ∫₀^∞ e^{−z²} z^k sin(m log z) dz.
//! ```
//!
//! The average kernel (`k = n+1`, `c = 2ω(n)/π^{n/2}`) acts on the ball
//! average `H`; the data kernel (`k = n−1`, `c = nω(n)/π^{n/2}`) acts on the
//! initial data itself. Both coefficients normalize their weight to one, so
//! `A² + B² < 1` for every `m > 0`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{
    integrate_log_oscillatory, integrate_weighted, integrate_weighted_with, log_axis_weight,
    weighted_tail_bound, IntegrandHints, QuadratureSpec, Trig,
};
use crate::special::gamma;

/// Which representation formula a moment belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KernelFlavor {
    /// Power `n+1`, coefficient `2ω(n)/π^{n/2}`; acts on `H`.
    AverageKernel,
    /// Power `n−1`, coefficient `nω(n)/π^{n/2}`; acts on `φ`.
    DataKernel,
}

impl KernelFlavor {
    pub fn power(self, n: u32) -> u32 {
        match self {
            KernelFlavor::AverageKernel => n + 1,
            KernelFlavor::DataKernel => n - 1,
        }
    }

    pub fn coefficient(self, n: u32) -> Result<f64> {
        let omega = unit_ball_volume(n)?;
        let scale = PI.powf(n as f64 / 2.0);
        Ok(match self {
            KernelFlavor::AverageKernel => 2.0 * omega / scale,
            KernelFlavor::DataKernel => n as f64 * omega / scale,
        })
    }
}

/// The pair `(A(m), B(m))` (or its finite-time shifted version).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentPair {
    pub a_value: f64,
    pub b_value: f64,
    pub m: f64,
    pub n: u32,
    pub flavor: KernelFlavor,
    pub abs_error_est: f64,
}

impl MomentPair {
    /// `√(A² + B²)`.
    pub fn norm(&self) -> f64 {
        self.a_value.hypot(self.b_value)
    }
}

/// Volume of the unit ball in `ℝⁿ`, `π^{n/2}/Γ(n/2 + 1)`.
pub fn unit_ball_volume(n: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("dimension must be at least 1".into()));
    }
    let half = n as f64 / 2.0;
    Ok(PI.powf(half) / gamma(half + 1.0))
}

fn check_dimension(n: u32) -> Result<()> {
    if n == 0 {
        Err(Error::Domain("dimension must be at least 1".into()))
    } else {
        Ok(())
    }
}

fn check_frequency(m: f64) -> Result<()> {
    if m > 0.0 && m.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("frequency m must be > 0, got {m}")))
    }
}

/// `coefficient · ∫₀^∞ e^{−z²} z^k dz`, which equals one for both flavors.
pub fn kernel_normalization(n: u32, flavor: KernelFlavor, spec: &QuadratureSpec) -> Result<f64> {
    check_dimension(n)?;
    let c = flavor.coefficient(n)?;
    Ok(c * integrate_weighted(|_| 1.0, flavor.power(n), spec)?.value)
}

/// `A(m)`, `B(m)` via the log substitution `x = log z`.
pub fn kernel_moments(
    n: u32,
    m: f64,
    flavor: KernelFlavor,
    spec: &QuadratureSpec,
) -> Result<MomentPair> {
    check_dimension(n)?;
    check_frequency(m)?;
    let power = flavor.power(n);
    let coeff = flavor.coefficient(n)?;
    let local = spec.for_power(power);
    let weight = log_axis_weight(power);
    let a = integrate_log_oscillatory(&weight, m, Trig::Cos, &local)?;
    let b = integrate_log_oscillatory(&weight, m, Trig::Sin, &local)?;
    let tail = weighted_tail_bound(power, local.x_min, spec.z_max);
    Ok(MomentPair {
        a_value: coeff * a.value,
        b_value: coeff * b.value,
        m,
        n,
        flavor,
        abs_error_est: coeff * (a.abs_error_est.max(b.abs_error_est) + tail),
    })
}

/// Moments with `log z` replaced by `log(z + shift)`; `shift = 1/√(4t)` gives
/// the exact finite-time coefficients of `u(0, t)`.
pub fn kernel_moments_shifted(
    n: u32,
    m: f64,
    flavor: KernelFlavor,
    shift: f64,
    spec: &QuadratureSpec,
) -> Result<MomentPair> {
    if !(shift >= 0.0 && shift.is_finite()) {
        return Err(Error::Domain(format!("shift must be >= 0, got {shift}")));
    }
    if shift == 0.0 {
        return kernel_moments(n, m, flavor, spec);
    }
    check_dimension(n)?;
    check_frequency(m)?;
    let power = flavor.power(n);
    let coeff = flavor.coefficient(n)?;
    let hints = IntegrandHints {
        log_frequency: Some(m),
        z_breakpoints: Vec::new(),
    };
    let a = integrate_weighted_with(|z| (m * (z + shift).ln()).cos(), power, spec, &hints)?;
    let b = integrate_weighted_with(|z| (m * (z + shift).ln()).sin(), power, spec, &hints)?;
    Ok(MomentPair {
        a_value: coeff * a.value,
        b_value: coeff * b.value,
        m,
        n,
        flavor,
        abs_error_est: coeff * a.abs_error_est.max(b.abs_error_est),
    })
}

/// `√(A(m)² + B(m)²)`.
pub fn moment_norm(n: u32, m: f64, flavor: KernelFlavor, spec: &QuadratureSpec) -> Result<f64> {
    Ok(kernel_moments(n, m, flavor, spec)?.norm())
}

/// Scan grid for [`solve_m`]: this many log-spaced frequencies.
pub const SCAN_POINTS: usize = 200;
pub const SCAN_LO: f64 = 1e-3;
pub const SCAN_HI: f64 = 1e2;

/// Default accuracy of the frequency solve.
pub const DEFAULT_ROOT_TOL: f64 = 1e-10;

/// Smallest `m` on the scan grid bracket with `moment_norm(n, m) = ratio`.
///
/// The modulus is scanned at [`SCAN_POINTS`] log-spaced frequencies in
/// `[SCAN_LO, SCAN_HI]`; the first sign change of `norm − ratio` is bisected
/// until `|norm − ratio| ≤ root_tol`.
pub fn solve_m(
    n: u32,
    ratio: f64,
    flavor: KernelFlavor,
    spec: &QuadratureSpec,
    root_tol: f64,
) -> Result<f64> {
    check_dimension(n)?;
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::Domain(format!(
            "ratio must lie in the open interval (0, 1), got {ratio}"
        )));
    }
    if !(root_tol > 0.0) {
        return Err(Error::Domain(format!(
            "root_tol must be > 0, got {root_tol}"
        )));
    }
    let residual = |m: f64| -> Result<f64> { Ok(moment_norm(n, m, flavor, spec)? - ratio) };

    let step = (SCAN_HI / SCAN_LO).ln() / (SCAN_POINTS - 1) as f64;
    let grid = |i: usize| SCAN_LO * (step * i as f64).exp();
    let mut prev_m = grid(0);
    let mut prev_r = residual(prev_m)?;
    if prev_r.abs() <= root_tol {
        return Ok(prev_m);
    }
    for i in 1..SCAN_POINTS {
        let m = grid(i);
        let r = residual(m)?;
        if r.abs() <= root_tol {
            return Ok(m);
        }
        if r.signum() != prev_r.signum() {
            return bisect(&residual, prev_m, prev_r, m, root_tol);
        }
        prev_m = m;
        prev_r = r;
    }
    Err(Error::SearchFailure(format!(
        "no m in [{SCAN_LO}, {SCAN_HI}] with moment norm {ratio} (n = {n}, {flavor:?})"
    )))
}

fn bisect<F>(f: &F, mut lo: f64, mut f_lo: f64, mut hi: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid)?;
        if f_mid.abs() <= tol || mid <= lo || mid >= hi {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_volumes() {
        assert!((unit_ball_volume(1).unwrap() - 2.0).abs() < 1e-14);
        assert!((unit_ball_volume(2).unwrap() - PI).abs() < 1e-14);
        assert!((unit_ball_volume(3).unwrap() - 4.0 * PI / 3.0).abs() < 1e-14);
        assert!(matches!(unit_ball_volume(0), Err(Error::Domain(_))));
    }

    #[test]
    fn zero_shift_is_identical() {
        let spec = QuadratureSpec::default();
        let a = kernel_moments(1, 1.0, KernelFlavor::AverageKernel, &spec).unwrap();
        let b = kernel_moments_shifted(1, 1.0, KernelFlavor::AverageKernel, 0.0, &spec).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn solve_rejects_closed_endpoints() {
        let spec = QuadratureSpec::default();
        for r in [0.0, 1.0, 1.5, -0.2] {
            assert!(matches!(
                solve_m(1, r, KernelFlavor::AverageKernel, &spec, 1e-10),
                Err(Error::Domain(_))
            ));
        }
    }

    #[test]
    fn negative_shift_rejected() {
        let spec = QuadratureSpec::default();
        assert!(kernel_moments_shifted(1, 1.0, KernelFlavor::DataKernel, -1.0, &spec).is_err());
    }
}
