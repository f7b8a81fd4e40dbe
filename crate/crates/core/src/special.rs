//! Real Gamma function.

use std::f64::consts::PI;

// Lanczos approximation with g = 7, n = 9 (relative error below 1e-15 on
// the positive axis).
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Γ(x) for real `x`, using the reflection formula below 1/2.
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        PI / ((PI * x).sin() * gamma(1.0 - x))
    } else {
        let x = x - 1.0;
        let mut acc = LANCZOS_COEF[0];
        for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
            acc += c / (x + i as f64);
        }
        let t = x + LANCZOS_G + 0.5;
        (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
    }
}

/// Bernoulli numbers `B_0 … B_14` with `B_1 = −1/2`.
pub const BERNOULLI: [f64; 15] = [
    1.0,
    -0.5,
    1.0 / 6.0,
    0.0,
    -1.0 / 30.0,
    0.0,
    1.0 / 42.0,
    0.0,
    -1.0 / 30.0,
    0.0,
    5.0 / 66.0,
    0.0,
    -691.0 / 2730.0,
    0.0,
    7.0 / 6.0,
];

pub fn binomial(n: u32, k: u32) -> f64 {
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// `(2π)^{q−1} B_q(x) / q!` for `x ∈ [0, 1)` and `q ≥ 2`.
///
/// Low orders expand the Bernoulli polynomial directly; from order 13 on the
/// Fourier series `−(1/π) Σ_j cos(2πjx − qπ/2)/j^q` converges to full
/// precision within a few hundred terms.
pub fn scaled_bernoulli_poly(q: u32, x: f64) -> f64 {
    assert!(q >= 2, "order must be at least 2");
    if q <= 12 {
        let mut poly = 0.0;
        for k in 0..=q {
            poly += binomial(q, k) * BERNOULLI[k as usize] * x.powi((q - k) as i32);
        }
        let mut scale = 1.0;
        for i in 1..=q {
            scale *= 2.0 * PI / i as f64;
        }
        poly * scale / (2.0 * PI)
    } else {
        let phase = q as f64 * PI / 2.0;
        let mut acc = 0.0;
        for j in 1..=400u32 {
            let jf = j as f64;
            acc += (2.0 * PI * jf * x - phase).cos() / jf.powi(q as i32);
        }
        -acc / PI
    }
}
