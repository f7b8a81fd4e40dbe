//! Closed-form family of bounded continuous radial initial data.
//!
//! Every constructible datum is an [`InitialDataExpr`]: an immutable tree of
//! log-slow sines, log-log sines, periodic trapezoids, bump trains, sums and
//! negations. The module evaluates `φ(τ)`, the ball average `H(τ)` (closed
//! form where one exists, adaptive quadrature otherwise), the inverse map
//! `φ = H + (τ/n) H′`, and the exact asymptotic band `(liminf φ, limsup φ)`.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate_panels, width_for_frequency, PanelOptions};
use crate::special::{binomial, BERNOULLI};

/// Ramp width of a periodic trapezoid when none is requested.
pub const DEFAULT_RAMP_WIDTH: f64 = PI / 8.0;

/// Above this many kinks in a window, kinks are no longer passed to the
/// quadrature as breakpoints.
pub const KINK_LIMIT: usize = 500_000;

/// 2π-periodic zero-mean trapezoidal wave.
///
/// Over one period starting at 0: a ramp `0 → v_max`, a plateau at `v_max`
/// of length `P₊`, a ramp `v_max → 0`, a ramp `0 → v_min`, a plateau at
/// `v_min` of length `P₋` and a ramp `v_min → 0`. All ramps have width `w`
/// and the plateaus solve `P₊ + P₋ = 2π − 4w`, `v_max(P₊+w) + v_min(P₋+w) = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Trapezoid {
    pub v_max: f64,
    pub v_min: f64,
    pub ramp_width: f64,
}

impl Trapezoid {
    pub fn new(v_max: f64, v_min: f64, ramp_width: f64) -> Result<Trapezoid> {
        let t = Trapezoid {
            v_max,
            v_min,
            ramp_width,
        };
        t.validate()?;
        Ok(t)
    }

    /// Trapezoid with the default ramp width, narrowed to half the largest
    /// admissible width when the default would force a negative plateau.
    pub fn fitted(v_max: f64, v_min: f64) -> Result<Trapezoid> {
        if !(v_max > 0.0 && v_min < 0.0) {
            return Err(Error::Domain(format!(
                "trapezoid needs v_max > 0 > v_min, got {v_max}, {v_min}"
            )));
        }
        let hi = -v_min;
        let limit = (TAU * hi / (v_max + 3.0 * hi)).min(TAU * v_max / (hi + 3.0 * v_max));
        let w = if DEFAULT_RAMP_WIDTH < limit {
            DEFAULT_RAMP_WIDTH
        } else {
            0.5 * limit
        };
        Trapezoid::new(v_max, v_min, w)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.v_max > 0.0 && self.v_max.is_finite()) {
            return Err(Error::Domain(format!(
                "v_max must be > 0, got {}",
                self.v_max
            )));
        }
        if !(self.v_min < 0.0 && self.v_min.is_finite()) {
            return Err(Error::Domain(format!(
                "v_min must be < 0, got {}",
                self.v_min
            )));
        }
        if !(self.ramp_width > 0.0 && self.ramp_width < PI / 4.0) {
            return Err(Error::Domain(format!(
                "ramp_width must lie in (0, π/4), got {}",
                self.ramp_width
            )));
        }
        let (p_hi, p_lo) = self.plateaus();
        if p_hi < 0.0 || p_lo < 0.0 {
            return Err(Error::Domain(format!(
                "trapezoid ({}, {}, w = {}) needs a negative plateau",
                self.v_max, self.v_min, self.ramp_width
            )));
        }
        Ok(())
    }

    /// `(P₊, P₋)`.
    pub fn plateaus(&self) -> (f64, f64) {
        let w = self.ramp_width;
        let total = TAU - 4.0 * w;
        let p_hi =
            (-self.v_min * total - w * (self.v_max + self.v_min)) / (self.v_max - self.v_min);
        (p_hi, total - p_hi)
    }

    /// Segment end points over one period, starting at 0 and ending at 2π.
    pub fn knots(&self) -> [f64; 7] {
        let w = self.ramp_width;
        let (p_hi, p_lo) = self.plateaus();
        [
            0.0,
            w,
            w + p_hi,
            2.0 * w + p_hi,
            3.0 * w + p_hi,
            3.0 * w + p_hi + p_lo,
            TAU,
        ]
    }

    fn knot_values(&self) -> [f64; 7] {
        [
            0.0, self.v_max, self.v_max, 0.0, self.v_min, self.v_min, 0.0,
        ]
    }

    /// Linear pieces `(s0, s1, value at s0, slope)` over one period.
    pub fn segments(&self) -> Vec<(f64, f64, f64, f64)> {
        let k = self.knots();
        let v = self.knot_values();
        (0..6)
            .filter(|&i| k[i + 1] > k[i])
            .map(|i| (k[i], k[i + 1], v[i], (v[i + 1] - v[i]) / (k[i + 1] - k[i])))
            .collect()
    }

    pub fn eval(&self, y: f64) -> f64 {
        let s = y.rem_euclid(TAU);
        let k = self.knots();
        let v = self.knot_values();
        for i in 0..6 {
            if s <= k[i + 1] && k[i + 1] > k[i] {
                let frac = ((s - k[i]) / (k[i + 1] - k[i])).clamp(0.0, 1.0);
                return v[i] + frac * (v[i + 1] - v[i]);
            }
        }
        0.0
    }

    /// Right derivative.
    pub fn slope(&self, y: f64) -> f64 {
        let s = y.rem_euclid(TAU);
        for (s0, s1, _, slope) in self.segments() {
            if s >= s0 && s < s1 {
                return slope;
            }
        }
        0.0
    }

    /// Exact `∫₀^{2π}` of the wave; zero up to rounding.
    pub fn period_integral(&self) -> f64 {
        self.segments()
            .iter()
            .map(|&(s0, s1, v0, slope)| (s1 - s0) * (v0 + 0.5 * slope * (s1 - s0)))
            .sum()
    }

    /// Mid points of the high and low plateaus (or the apexes when a plateau
    /// is empty).
    pub fn extremizers(&self) -> (f64, f64) {
        let k = self.knots();
        (0.5 * (k[1] + k[2]), 0.5 * (k[4] + k[5]))
    }

    /// Kinks in `[lo, hi]`, or `None` when there are more than `limit`.
    pub fn kinks_in(&self, lo: f64, hi: f64, limit: usize) -> Option<Vec<f64>> {
        if hi < lo {
            return Some(Vec::new());
        }
        let first = (lo / TAU).floor();
        let last = (hi / TAU).floor();
        let periods = last - first + 1.0;
        if periods * 6.0 > limit as f64 {
            return None;
        }
        let k = self.knots();
        let mut out = Vec::new();
        let mut p = first;
        while p <= last {
            let base = p * TAU;
            for &knot in &k[..6] {
                let x = base + knot;
                if x >= lo && x <= hi {
                    out.push(x);
                }
            }
            p += 1.0;
        }
        Some(out)
    }
}

/// A 2π-periodic profile `g` with an exact derivative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "profile")]
pub enum PeriodicProfile {
    Trapezoid(Trapezoid),
    /// `constant + Σ_k cos[k−1]·cos(k y) + sin[k−1]·sin(k y)`.
    TrigPoly {
        constant: f64,
        cos: Vec<f64>,
        sin: Vec<f64>,
    },
}

impl PeriodicProfile {
    pub fn eval(&self, y: f64) -> f64 {
        match self {
            PeriodicProfile::Trapezoid(t) => t.eval(y),
            PeriodicProfile::TrigPoly { constant, cos, sin } => {
                let mut acc = *constant;
                for (i, c) in cos.iter().enumerate() {
                    acc += c * ((i + 1) as f64 * y).cos();
                }
                for (i, s) in sin.iter().enumerate() {
                    acc += s * ((i + 1) as f64 * y).sin();
                }
                acc
            }
        }
    }

    pub fn derivative(&self, y: f64) -> f64 {
        match self {
            PeriodicProfile::Trapezoid(t) => t.slope(y),
            PeriodicProfile::TrigPoly { cos, sin, .. } => {
                let mut acc = 0.0;
                for (i, c) in cos.iter().enumerate() {
                    let k = (i + 1) as f64;
                    acc -= c * k * (k * y).sin();
                }
                for (i, s) in sin.iter().enumerate() {
                    let k = (i + 1) as f64;
                    acc += s * k * (k * y).cos();
                }
                acc
            }
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            PeriodicProfile::Trapezoid(t) => t.validate(),
            PeriodicProfile::TrigPoly { constant, cos, sin } => {
                if constant.is_finite() && cos.iter().chain(sin).all(|c| c.is_finite()) {
                    Ok(())
                } else {
                    Err(Error::Domain("non-finite trigonometric coefficient".into()))
                }
            }
        }
    }

    /// Highest harmonic, used to size quadrature panels.
    fn harmonics(&self) -> f64 {
        match self {
            PeriodicProfile::Trapezoid(_) => 1.0,
            PeriodicProfile::TrigPoly { cos, sin, .. } => cos.len().max(sin.len()).max(1) as f64,
        }
    }

    fn sup_abs(&self) -> f64 {
        match self {
            PeriodicProfile::Trapezoid(t) => t.v_max.max(-t.v_min),
            PeriodicProfile::TrigPoly { constant, cos, sin } => {
                constant.abs() + cos.iter().chain(sin).map(|c| c.abs()).sum::<f64>()
            }
        }
    }

    fn sup_abs_derivative(&self) -> f64 {
        match self {
            PeriodicProfile::Trapezoid(t) => (t.v_max / t.ramp_width).max(-t.v_min / t.ramp_width),
            PeriodicProfile::TrigPoly { cos, sin, .. } => cos
                .iter()
                .enumerate()
                .chain(sin.iter().enumerate())
                .map(|(i, c)| (i + 1) as f64 * c.abs())
                .sum(),
        }
    }

    /// Kink positions of the profile on the `y` axis.
    fn kinks_in(&self, lo: f64, hi: f64, limit: usize) -> Option<Vec<f64>> {
        match self {
            PeriodicProfile::Trapezoid(t) => t.kinks_in(lo, hi, limit),
            PeriodicProfile::TrigPoly { .. } => Some(Vec::new()),
        }
    }
}

/// Which extremum of the log-log sine a double-exponential bump sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    /// `log(τ + 2) = exp(2kπ + π/2)`.
    Peak,
    /// `log(τ + 2) = exp(2kπ + 3π/2)`.
    Trough,
}

/// Placement of the bumps of a [`InitialDataExpr::BumpTrain`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law")]
pub enum CenterLaw {
    /// Centers `base^k`, `k ≥ 1`.
    Geometric { base: f64 },
    /// Centers `exp(exp(E_k)) − 2` with inner exponent
    /// `E_k = 2kπ + π/2` (peak) or `2kπ + 3π/2` (trough), `k ≥ 0`.
    DoubleExp { parity: Parity },
}

/// Largest `E` with `exp(exp(E))` finite.
fn max_inner_exponent() -> f64 {
    f64::MAX.ln().ln()
}

impl CenterLaw {
    /// Log-log coordinate `E_k` of the `k`-th center; exact for every `k`.
    pub fn inner_exponent(&self, k: u32) -> Option<f64> {
        match *self {
            CenterLaw::DoubleExp { parity } => {
                let phase = match parity {
                    Parity::Peak => PI / 2.0,
                    Parity::Trough => 1.5 * PI,
                };
                Some(TAU * k as f64 + phase)
            }
            CenterLaw::Geometric { .. } => None,
        }
    }

    /// Index of the first center.
    pub fn first_index(&self) -> u32 {
        match self {
            CenterLaw::Geometric { .. } => 1,
            CenterLaw::DoubleExp { .. } => 0,
        }
    }

    /// The `k`-th center, `None` when it overflows.
    pub fn center(&self, k: u32) -> Option<f64> {
        match *self {
            CenterLaw::Geometric { base } => {
                let c = base.powi(k as i32);
                c.is_finite().then_some(c)
            }
            CenterLaw::DoubleExp { .. } => {
                let e = self.inner_exponent(k)?;
                if e > max_inner_exponent() {
                    None
                } else {
                    let c = e.exp().exp() - 2.0;
                    c.is_finite().then_some(c)
                }
            }
        }
    }

    /// Every representable center in `[lo, hi]`.
    pub fn centers_in(&self, lo: f64, hi: f64) -> Vec<f64> {
        let mut out = Vec::new();
        let mut k = self.first_index();
        while let Some(c) = self.center(k) {
            if c > hi {
                break;
            }
            if c >= lo {
                out.push(c);
            }
            k += 1;
            if k > 100_000 {
                break;
            }
        }
        out
    }

    fn nearest_center(&self, tau: f64) -> Option<f64> {
        match *self {
            CenterLaw::Geometric { base } => {
                let guess = (tau.max(1.0).ln() / base.ln()).round().max(1.0) as u32;
                [guess.saturating_sub(1).max(1), guess, guess + 1]
                    .iter()
                    .filter_map(|&k| self.center(k))
                    .min_by(|a, b| (a - tau).abs().total_cmp(&(b - tau).abs()))
            }
            CenterLaw::DoubleExp { .. } => {
                let mut best: Option<f64> = None;
                let mut k = 0;
                while let Some(c) = self.center(k) {
                    if best.is_none_or(|b| (c - tau).abs() < (b - tau).abs()) {
                        best = Some(c);
                    }
                    k += 1;
                }
                best
            }
        }
    }
}

/// Radial initial data `φ(τ)`, `τ ≥ 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum InitialDataExpr {
    Constant {
        c: f64,
    },
    /// `amplitude·sin(m log(τ+1)) + offset`.
    LogSine {
        amplitude: f64,
        m: f64,
        offset: f64,
    },
    /// The datum whose ball average in dimension `n` is the matching
    /// `LogSine`: `a·sin(mL) + a·(mτ)/(n(τ+1))·cos(mL) + offset`,
    /// `L = log(τ+1)`.
    LogSineAvgPreimage {
        amplitude: f64,
        m: f64,
        offset: f64,
        n: u32,
    },
    /// `amplitude·sin(log(log(τ+2))) + offset`.
    LogLogSine {
        amplitude: f64,
        offset: f64,
    },
    PeriodicZeroMean(Trapezoid),
    /// `baseline` plus triangular bumps of the given height and half width.
    BumpTrain {
        height: f64,
        half_width: f64,
        baseline: f64,
        centers: CenterLaw,
    },
    /// `g(log(τ+1))`.
    LogPeriodic {
        g: PeriodicProfile,
    },
    /// `(τ/n)·G′(τ) + G(τ)` with `G(τ) = g(log(τ+1))`; its ball average is `G`.
    SlowFromPeriodic {
        g: PeriodicProfile,
        n: u32,
    },
    Neg {
        inner: Box<InitialDataExpr>,
    },
    Sum {
        terms: Vec<InitialDataExpr>,
    },
}

use InitialDataExpr as E;

impl InitialDataExpr {
    pub fn constant(c: f64) -> Self {
        E::Constant { c }
    }

    pub fn log_sine(amplitude: f64, m: f64, offset: f64) -> Self {
        E::LogSine {
            amplitude,
            m,
            offset,
        }
    }

    pub fn log_sine_preimage(amplitude: f64, m: f64, offset: f64, n: u32) -> Self {
        E::LogSineAvgPreimage {
            amplitude,
            m,
            offset,
            n,
        }
    }

    pub fn sum(terms: Vec<InitialDataExpr>) -> Self {
        E::Sum { terms }
    }

    pub fn negated(self) -> Self {
        E::Neg {
            inner: Box::new(self),
        }
    }

    /// Checks every parameter invariant of the tree.
    pub fn validate(&self) -> Result<()> {
        let finite = |name: &str, v: f64| -> Result<()> {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::Domain(format!("{name} must be finite, got {v}")))
            }
        };
        let positive = |name: &str, v: f64| -> Result<()> {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Domain(format!("{name} must be > 0, got {v}")))
            }
        };
        let dim = |n: u32| -> Result<()> {
            if n >= 1 {
                Ok(())
            } else {
                Err(Error::Domain("dimension must be at least 1".into()))
            }
        };
        match self {
            E::Constant { c } => finite("c", *c),
            E::LogSine {
                amplitude,
                m,
                offset,
            } => {
                positive("amplitude", *amplitude)?;
                positive("m", *m)?;
                finite("offset", *offset)
            }
            E::LogSineAvgPreimage {
                amplitude,
                m,
                offset,
                n,
            } => {
                positive("amplitude", *amplitude)?;
                positive("m", *m)?;
                finite("offset", *offset)?;
                dim(*n)
            }
            E::LogLogSine { amplitude, offset } => {
                finite("amplitude", *amplitude)?;
                finite("offset", *offset)
            }
            E::PeriodicZeroMean(t) => t.validate(),
            E::BumpTrain {
                height,
                half_width,
                baseline,
                centers,
            } => {
                finite("height", *height)?;
                positive("half_width", *half_width)?;
                finite("baseline", *baseline)?;
                match centers {
                    CenterLaw::Geometric { base } => {
                        if !(*base > 1.0 && base.is_finite()) {
                            return Err(Error::Domain(format!("base must be > 1, got {base}")));
                        }
                        // spacing grows with k, so the first gap is the smallest
                        let gap = base * base - base;
                        if gap <= 2.0 * half_width {
                            return Err(Error::Domain(format!(
                                "bumps overlap: first gap {gap} <= 2·half_width"
                            )));
                        }
                        if base - half_width < 0.0 {
                            return Err(Error::Domain("first bump reaches below τ = 0".into()));
                        }
                        Ok(())
                    }
                    CenterLaw::DoubleExp { .. } => {
                        let first = centers.center(0).unwrap_or(f64::INFINITY);
                        if first - half_width < 0.0 {
                            return Err(Error::Domain("first bump reaches below τ = 0".into()));
                        }
                        Ok(())
                    }
                }
            }
            E::LogPeriodic { g } => g.validate(),
            E::SlowFromPeriodic { g, n } => {
                g.validate()?;
                dim(*n)
            }
            E::Neg { inner } => inner.validate(),
            E::Sum { terms } => terms.iter().try_for_each(|t| t.validate()),
        }
    }

    pub(crate) fn eval_unchecked(&self, tau: f64) -> f64 {
        match self {
            E::Constant { c } => *c,
            E::LogSine {
                amplitude,
                m,
                offset,
            } => amplitude * (m * tau.ln_1p()).sin() + offset,
            E::LogSineAvgPreimage {
                amplitude,
                m,
                offset,
                n,
            } => {
                let theta = m * tau.ln_1p();
                let ratio = tau / (tau + 1.0);
                amplitude * theta.sin() + amplitude * m * ratio / *n as f64 * theta.cos() + offset
            }
            E::LogLogSine { amplitude, offset } => amplitude * (tau + 2.0).ln().ln().sin() + offset,
            E::PeriodicZeroMean(t) => t.eval(tau),
            E::BumpTrain {
                height,
                half_width,
                baseline,
                centers,
            } => {
                let bump = centers
                    .nearest_center(tau)
                    .map(|c| (1.0 - (tau - c).abs() / half_width).max(0.0))
                    .unwrap_or(0.0);
                baseline + height * bump
            }
            E::LogPeriodic { g } => g.eval(tau.ln_1p()),
            E::SlowFromPeriodic { g, n } => {
                let y = tau.ln_1p();
                tau / (*n as f64 * (tau + 1.0)) * g.derivative(y) + g.eval(y)
            }
            E::Neg { inner } => -inner.eval_unchecked(tau),
            E::Sum { terms } => terms.iter().map(|t| t.eval_unchecked(tau)).sum(),
        }
    }

    /// Analytic upper bound on `sup_τ |φ(τ)|`; exact for single leaves.
    pub fn sup_abs(&self) -> f64 {
        match self {
            E::Constant { c } => c.abs(),
            E::LogSine {
                amplitude, offset, ..
            } => amplitude.abs() + offset.abs(),
            E::LogSineAvgPreimage {
                amplitude,
                m,
                offset,
                n,
            } => amplitude.abs() * (1.0 + (m / *n as f64).powi(2)).sqrt() + offset.abs(),
            E::LogLogSine { amplitude, offset } => amplitude.abs() + offset.abs(),
            E::PeriodicZeroMean(t) => t.v_max.max(-t.v_min),
            E::BumpTrain {
                height, baseline, ..
            } => baseline.abs().max((baseline + height).abs()),
            E::LogPeriodic { g } => g.sup_abs(),
            E::SlowFromPeriodic { g, n } => g.sup_abs() + g.sup_abs_derivative() / *n as f64,
            E::Neg { inner } => inner.sup_abs(),
            E::Sum { terms } => terms.iter().map(|t| t.sup_abs()).sum(),
        }
    }

    /// Largest frequency in `log τ` of any log-periodic part.
    pub fn max_log_frequency(&self) -> Option<f64> {
        let own = match self {
            E::LogSine { m, .. } | E::LogSineAvgPreimage { m, .. } => Some(*m),
            E::LogPeriodic { g } | E::SlowFromPeriodic { g, .. } => Some(g.harmonics()),
            E::LogLogSine { .. } => Some(1.0),
            E::Neg { inner } => inner.max_log_frequency(),
            E::Sum { terms } => terms
                .iter()
                .filter_map(|t| t.max_log_frequency())
                .reduce(f64::max),
            _ => None,
        };
        own
    }

    /// Kink locations of `φ` in `[lo, hi]`; empty when there are none or
    /// more than [`KINK_LIMIT`].
    pub fn kinks(&self, lo: f64, hi: f64) -> Vec<f64> {
        let mut out = Vec::new();
        if self.collect_kinks(lo.max(0.0), hi, &mut out) {
            out.sort_by(f64::total_cmp);
            out.dedup();
            out
        } else {
            Vec::new()
        }
    }

    fn collect_kinks(&self, lo: f64, hi: f64, out: &mut Vec<f64>) -> bool {
        match self {
            E::PeriodicZeroMean(t) => {
                match t.kinks_in(lo, hi, KINK_LIMIT - out.len().min(KINK_LIMIT)) {
                    Some(k) => {
                        out.extend(k);
                        true
                    }
                    None => false,
                }
            }
            E::BumpTrain {
                half_width,
                centers,
                ..
            } => {
                for c in centers.centers_in(lo - half_width, hi + half_width) {
                    for x in [c - half_width, c, c + half_width] {
                        if x >= lo && x <= hi {
                            out.push(x);
                        }
                    }
                }
                out.len() <= KINK_LIMIT
            }
            E::LogPeriodic { g } | E::SlowFromPeriodic { g, .. } => {
                match g.kinks_in(lo.ln_1p(), hi.ln_1p(), KINK_LIMIT) {
                    Some(ys) => {
                        out.extend(
                            ys.into_iter()
                                .map(|y| y.exp_m1())
                                .filter(|&t| t >= lo && t <= hi),
                        );
                        true
                    }
                    None => false,
                }
            }
            E::Neg { inner } => inner.collect_kinks(lo, hi, out),
            E::Sum { terms } => terms.iter().all(|t| t.collect_kinks(lo, hi, out)),
            _ => true,
        }
    }

    /// Representable bump centers in `[lo, hi]`.
    pub fn bump_centers(&self, lo: f64, hi: f64) -> Vec<f64> {
        match self {
            E::BumpTrain { centers, .. } => centers.centers_in(lo, hi),
            E::Neg { inner } => inner.bump_centers(lo, hi),
            E::Sum { terms } => terms.iter().flat_map(|t| t.bump_centers(lo, hi)).collect(),
            _ => Vec::new(),
        }
    }
}

/// `φ(τ)`.
pub fn eval_phi(expr: &InitialDataExpr, tau: f64) -> Result<f64> {
    if tau.is_nan() || tau < 0.0 {
        return Err(Error::Domain(format!("radius must be >= 0, got {tau}")));
    }
    if !tau.is_finite() {
        return Err(Error::Range(
            "radius is not representable in double precision; use analytic_band_phi for limits"
                .into(),
        ));
    }
    Ok(expr.eval_unchecked(tau))
}

/// Closed-form ball average in dimension `n`, where one exists.
pub fn closed_h(expr: &InitialDataExpr, n: u32) -> Option<InitialDataExpr> {
    match expr {
        E::Constant { c } => Some(E::Constant { c: *c }),
        E::LogSineAvgPreimage {
            amplitude,
            m,
            offset,
            n: dim,
        } if *dim == n => Some(E::LogSine {
            amplitude: *amplitude,
            m: *m,
            offset: *offset,
        }),
        E::SlowFromPeriodic { g, n: dim } if *dim == n => Some(E::LogPeriodic { g: g.clone() }),
        E::Neg { inner } => closed_h(inner, n).map(InitialDataExpr::negated),
        E::Sum { terms } => terms
            .iter()
            .map(|t| closed_h(t, n))
            .collect::<Option<Vec<_>>>()
            .map(|terms| E::Sum { terms }),
        _ => None,
    }
}

/// `φ = H + (τ/n) H′` for a closed-form `H`.
pub fn phi_from_h(h: &InitialDataExpr, n: u32) -> Result<InitialDataExpr> {
    if n == 0 {
        return Err(Error::Domain("dimension must be at least 1".into()));
    }
    match h {
        E::Constant { c } => Ok(E::Constant { c: *c }),
        E::LogSine {
            amplitude,
            m,
            offset,
        } => Ok(E::LogSineAvgPreimage {
            amplitude: *amplitude,
            m: *m,
            offset: *offset,
            n,
        }),
        E::LogPeriodic { g } => Ok(E::SlowFromPeriodic { g: g.clone(), n }),
        E::Neg { inner } => Ok(phi_from_h(inner, n)?.negated()),
        E::Sum { terms } => Ok(E::Sum {
            terms: terms
                .iter()
                .map(|t| phi_from_h(t, n))
                .collect::<Result<_>>()?,
        }),
        other => Err(Error::Unsupported(format!(
            "no closed-form derivative for {}",
            variant_name(other)
        ))),
    }
}

pub fn variant_name(expr: &InitialDataExpr) -> &'static str {
    match expr {
        E::Constant { .. } => "Constant",
        E::LogSine { .. } => "LogSine",
        E::LogSineAvgPreimage { .. } => "LogSineAvgPreimage",
        E::LogLogSine { .. } => "LogLogSine",
        E::PeriodicZeroMean(_) => "PeriodicZeroMean",
        E::BumpTrain { .. } => "BumpTrain",
        E::LogPeriodic { .. } => "LogPeriodic",
        E::SlowFromPeriodic { .. } => "SlowFromPeriodic",
        E::Neg { .. } => "Neg",
        E::Sum { .. } => "Sum",
    }
}

/// Ball average `H(τ) = (n/τⁿ) ∫₀^τ φ(r) r^{n−1} dr` to absolute accuracy
/// `tol`.
///
/// Periodic leaves are summed period by period in closed form; every other
/// leaf is integrated adaptively on the log axis after the substitution
/// `r = τ e^x`.
pub fn numeric_h(expr: &InitialDataExpr, n: u32, tau: f64, tol: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("dimension must be at least 1".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be > 0, got {tol}")));
    }
    if tau.is_nan() || tau < 0.0 {
        return Err(Error::Domain(format!("radius must be >= 0, got {tau}")));
    }
    if !tau.is_finite() {
        return Err(Error::Range(format!("radius {tau} is not representable")));
    }
    if tau == 0.0 {
        return eval_phi(expr, 0.0);
    }
    let leaves = leaf_count(expr).max(1);
    numeric_h_inner(expr, n, tau, tol / leaves as f64)
}

fn leaf_count(expr: &InitialDataExpr) -> usize {
    match expr {
        E::Neg { inner } => leaf_count(inner),
        E::Sum { terms } => terms.iter().map(leaf_count).sum(),
        _ => 1,
    }
}

fn numeric_h_inner(expr: &InitialDataExpr, n: u32, tau: f64, tol: f64) -> Result<f64> {
    match expr {
        E::Constant { c } => Ok(*c),
        E::Neg { inner } => Ok(-numeric_h_inner(inner, n, tau, tol)?),
        E::Sum { terms } => terms.iter().map(|t| numeric_h_inner(t, n, tau, tol)).sum(),
        E::PeriodicZeroMean(t) => Ok(periodic_average(t, n, tau)),
        leaf => average_by_quadrature(leaf, n, tau, tol),
    }
}

fn average_by_quadrature(expr: &InitialDataExpr, n: u32, tau: f64, tol: f64) -> Result<f64> {
    let nf = n as f64;
    let sup = expr.sup_abs().max(1.0);
    // n ∫_{−∞}^{x_lo} e^{nx} |φ| dx ≤ sup·e^{n x_lo}
    let x_lo = (0.1 * tol / sup).ln() / nf;
    let kinks = expr.kinks(tau * x_lo.exp(), tau);
    let breaks: Vec<f64> = kinks
        .iter()
        .filter(|&&k| k > 0.0)
        .map(|k| (k / tau).ln())
        .collect();
    let opts = PanelOptions {
        max_width: width_for_frequency(expr.max_log_frequency()),
        breakpoints: &breaks,
        rel_tol: 1e-13,
        abs_tol: 0.5 * tol / nf,
        max_panels: 2_000_000,
    };
    let r = integrate_panels(
        |x| expr.eval_unchecked(tau * x.exp()) * (nf * x).exp(),
        x_lo,
        0.0,
        &opts,
    )?;
    Ok(nf * r.value)
}

/// Σ_{k=0}^{K−1} k^p by Faulhaber's formula.
fn power_sum(p: u32, k: f64) -> f64 {
    let mut acc = 0.0;
    for j in 0..=p {
        acc += binomial(p + 1, j) * BERNOULLI[j as usize] * k.powi((p + 1 - j) as i32);
    }
    acc / (p + 1) as f64
}

/// `∫₀^R f(s) s^j ds` for the trapezoid, `0 ≤ R ≤ 2π`.
fn trapezoid_moment(t: &Trapezoid, j: u32, upper: f64) -> f64 {
    let jf = j as f64;
    t.segments()
        .iter()
        .filter(|seg| seg.0 < upper)
        .map(|&(s0, s1, v0, slope)| {
            let s1 = s1.min(upper);
            // f(s) = (v0 − slope·s0) + slope·s
            let c0 = v0 - slope * s0;
            c0 * (s1.powf(jf + 1.0) - s0.powf(jf + 1.0)) / (jf + 1.0)
                + slope * (s1.powf(jf + 2.0) - s0.powf(jf + 2.0)) / (jf + 2.0)
        })
        .sum()
}

/// Ball average of the periodic wave: `τ = 2πK + R`, the `K` full periods are
/// folded onto `[0, 2π)` with the binomial expansion of `(s + 2πk)^{n−1}` and
/// summed by power sums; the remainder `[2πK, τ]` is integrated exactly.
fn periodic_average(t: &Trapezoid, n: u32, tau: f64) -> f64 {
    let periods = (tau / TAU).floor();
    let rem = tau - periods * TAU;
    let nm1 = n - 1;
    let mut full = 0.0;
    let mut partial = 0.0;
    for j in 0..=nm1 {
        let c = binomial(nm1, j);
        let shift_pow = nm1 - j;
        full += c
            * trapezoid_moment(t, j, TAU)
            * TAU.powi(shift_pow as i32)
            * power_sum(shift_pow, periods);
        partial += c * (TAU * periods).powi(shift_pow as i32) * trapezoid_moment(t, j, rem);
    }
    n as f64 * (full + partial) / tau.powi(n as i32)
}

/// One term of a flattened sum together with its sign.
pub(crate) fn flatten<'a>(
    expr: &'a InitialDataExpr,
    sign: f64,
    out: &mut Vec<(f64, &'a InitialDataExpr)>,
) {
    match expr {
        E::Neg { inner } => flatten(inner, -sign, out),
        E::Sum { terms } => terms.iter().for_each(|t| flatten(t, sign, out)),
        leaf => out.push((sign, leaf)),
    }
}

/// Limit shape of the log-periodic part of `φ` as a function of
/// `y = log(τ+1)`: the `τ/(τ+1)` factors are replaced by one.
#[derive(Debug, Clone)]
pub struct SlowProfile {
    parts: Vec<(f64, SlowPart)>,
    /// Fundamental frequency in `y`.
    pub base_frequency: f64,
}

#[derive(Debug, Clone)]
enum SlowPart {
    Sine {
        amplitude: f64,
        m: f64,
        cos_coef: f64,
    },
    Profile {
        g: PeriodicProfile,
        derivative_weight: f64,
    },
}

impl SlowProfile {
    /// Collects the log-periodic leaves; `None` when there are none.
    pub(crate) fn from_leaves(leaves: &[(f64, &InitialDataExpr)]) -> Result<Option<SlowProfile>> {
        let mut parts = Vec::new();
        let mut freqs = Vec::new();
        for &(sign, leaf) in leaves {
            match leaf {
                E::LogSine { amplitude, m, .. } => {
                    parts.push((
                        sign,
                        SlowPart::Sine {
                            amplitude: *amplitude,
                            m: *m,
                            cos_coef: 0.0,
                        },
                    ));
                    freqs.push(*m);
                }
                E::LogSineAvgPreimage {
                    amplitude, m, n, ..
                } => {
                    parts.push((
                        sign,
                        SlowPart::Sine {
                            amplitude: *amplitude,
                            m: *m,
                            cos_coef: amplitude * m / *n as f64,
                        },
                    ));
                    freqs.push(*m);
                }
                E::LogPeriodic { g } => {
                    parts.push((
                        sign,
                        SlowPart::Profile {
                            g: g.clone(),
                            derivative_weight: 0.0,
                        },
                    ));
                    freqs.push(1.0);
                }
                E::SlowFromPeriodic { g, n } => {
                    parts.push((
                        sign,
                        SlowPart::Profile {
                            g: g.clone(),
                            derivative_weight: 1.0 / *n as f64,
                        },
                    ));
                    freqs.push(1.0);
                }
                _ => {}
            }
        }
        if parts.is_empty() {
            return Ok(None);
        }
        let base = common_frequency(&freqs).ok_or_else(|| {
            Error::Unsupported(format!("log frequencies {freqs:?} have no common period"))
        })?;
        Ok(Some(SlowProfile {
            parts,
            base_frequency: base,
        }))
    }

    /// Value of the limit shape at `y` (without offsets).
    pub fn eval(&self, y: f64) -> f64 {
        self.parts
            .iter()
            .map(|(sign, part)| {
                sign * match part {
                    SlowPart::Sine {
                        amplitude,
                        m,
                        cos_coef,
                    } => amplitude * (m * y).sin() + cos_coef * (m * y).cos(),
                    SlowPart::Profile {
                        g,
                        derivative_weight,
                    } => g.eval(y) + derivative_weight * g.derivative(y),
                }
            })
            .sum()
    }

    pub fn period(&self) -> f64 {
        TAU / self.base_frequency
    }

    fn kinks(&self) -> Vec<f64> {
        let period = self.period();
        let mut out = Vec::new();
        for (_, part) in &self.parts {
            if let SlowPart::Profile { g, .. } = part {
                if let Some(k) = g.kinks_in(0.0, period, KINK_LIMIT) {
                    out.extend(k);
                }
            }
        }
        out
    }

    /// `((y_min, min), (y_max, max))` over one period.
    pub fn extrema(&self) -> ((f64, f64), (f64, f64)) {
        let period = self.period();
        let max_freq = self
            .parts
            .iter()
            .map(|(_, p)| match p {
                SlowPart::Sine { m, .. } => *m,
                SlowPart::Profile { g, .. } => g.harmonics(),
            })
            .fold(self.base_frequency, f64::max);
        let samples = ((period * max_freq / TAU) * 256.0).ceil().max(512.0) as usize;
        let mut candidates: Vec<f64> = (0..samples)
            .map(|i| period * i as f64 / samples as f64)
            .collect();
        // one-sided limits at profile kinks
        for k in self.kinks() {
            for d in [-1e-9, 1e-9] {
                candidates.push((k + d).rem_euclid(period));
            }
        }
        let h = period / samples as f64;
        let mut lo = (0.0, f64::INFINITY);
        let mut hi = (0.0, f64::NEG_INFINITY);
        for &y in &candidates {
            let v = self.eval(y);
            if v < lo.1 {
                lo = (y, v);
            }
            if v > hi.1 {
                hi = (y, v);
            }
        }
        let lo = refine(|y| self.eval(y), lo, h, false);
        let hi = refine(|y| self.eval(y), hi, h, true);
        (lo, hi)
    }
}

/// Golden-section polish of a grid extremum within one grid step.
pub(crate) fn refine<F: Fn(f64) -> f64>(
    f: F,
    start: (f64, f64),
    h: f64,
    maximize: bool,
) -> (f64, f64) {
    let sign = if maximize { -1.0 } else { 1.0 };
    let g = |x: f64| sign * f(x);
    let (mut a, mut b) = (start.0 - h, start.0 + h);
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (g(c), g(d));
    for _ in 0..80 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = g(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = g(d);
        }
        if (b - a).abs() < 1e-14 * (1.0 + start.0.abs()) {
            break;
        }
    }
    let x = 0.5 * (a + b);
    let v = f(x);
    if sign * v < sign * start.1 {
        (x, v)
    } else {
        start
    }
}

/// Fundamental frequency `f0` with every `f/f0` an integer, when the ratios
/// have denominators up to 64.
fn common_frequency(freqs: &[f64]) -> Option<f64> {
    let first = *freqs.first()?;
    for q in 1..=64u32 {
        let base = first / q as f64;
        let ok = freqs.iter().all(|&f| {
            let r = f / base;
            (r - r.round()).abs() < 1e-9 * r.max(1.0) && r.round() >= 1.0
        });
        if ok {
            // smallest integer multiples give the longest common period
            return Some(base);
        }
    }
    None
}

/// Exact `(liminf φ, limsup φ)` as `τ → ∞`.
///
/// A sum is supported when its non-constant part is a combination of
/// log-periodic terms with commensurate frequencies, optionally plus one
/// periodic trapezoid (the extremes add because the slow part is nearly
/// constant over arbitrarily many periods), or a log-log sine with bumps
/// placed on its peaks or troughs, or a single bump train.
pub fn analytic_band_phi(expr: &InitialDataExpr) -> Result<(f64, f64)> {
    let mut leaves = Vec::new();
    flatten(expr, 1.0, &mut leaves);

    let mut shift = 0.0;
    let mut slow_leaves = Vec::new();
    let mut loglog: Vec<(f64, f64, f64)> = Vec::new();
    let mut periodic: Vec<(f64, Trapezoid)> = Vec::new();
    let mut geometric: Vec<(f64, f64, f64)> = Vec::new();
    let mut aligned: Vec<(f64, f64, f64, Parity)> = Vec::new();
    for &(sign, leaf) in &leaves {
        match leaf {
            E::Constant { c } => shift += sign * c,
            E::LogSine { offset, .. } | E::LogSineAvgPreimage { offset, .. } => {
                shift += sign * offset;
                slow_leaves.push((sign, leaf));
            }
            E::LogPeriodic { .. } | E::SlowFromPeriodic { .. } => slow_leaves.push((sign, leaf)),
            E::LogLogSine { amplitude, offset } => loglog.push((sign, *amplitude, *offset)),
            E::PeriodicZeroMean(t) => periodic.push((sign, *t)),
            E::BumpTrain {
                height,
                baseline,
                centers,
                ..
            } => match centers {
                CenterLaw::Geometric { .. } => geometric.push((sign, *height, *baseline)),
                CenterLaw::DoubleExp { parity } => {
                    aligned.push((sign, *height, *baseline, *parity))
                }
            },
            E::Neg { .. } | E::Sum { .. } => unreachable!("flattened"),
        }
    }

    let unsupported = |why: &str| Err(Error::Unsupported(format!("band of this sum: {why}")));
    if periodic.len() > 1 {
        return unsupported("more than one periodic term");
    }
    if !geometric.is_empty() {
        if geometric.len() > 1
            || !slow_leaves.is_empty()
            || !loglog.is_empty()
            || !periodic.is_empty()
            || !aligned.is_empty()
        {
            return unsupported("a geometric bump train must stand alone");
        }
        let (sign, h, b) = geometric[0];
        let (lo, hi) = (b.min(b + h), b.max(b + h));
        return Ok(signed_band(sign, lo, hi, shift));
    }
    if !loglog.is_empty() && (!slow_leaves.is_empty() || loglog.len() > 1) {
        return unsupported("a log-log sine cannot be combined with other slow terms");
    }
    if !aligned.is_empty() && (loglog.is_empty() || !periodic.is_empty()) {
        return unsupported("double-exponential bumps need exactly one log-log sine");
    }

    let (mut lo, mut hi) = (shift, shift);
    if let Some(profile) = SlowProfile::from_leaves(&slow_leaves)? {
        let ((_, mn), (_, mx)) = profile.extrema();
        lo += mn;
        hi += mx;
    }
    if let Some(&(sign, a, c)) = loglog.first() {
        let base = sign * c;
        let amp = (sign * a).abs();
        let (mut ll_lo, mut ll_hi) = (base - amp, base + amp);
        let mut baselines = 0.0;
        let mut at_peak = 0.0;
        let mut at_trough = 0.0;
        for &(bsign, h, b, parity) in &aligned {
            baselines += bsign * b;
            match parity {
                Parity::Peak => at_peak += bsign * h,
                Parity::Trough => at_trough += bsign * h,
            }
        }
        // value of the log-log sine where sin = +1 and sin = −1
        let v_peak = base + sign * a + at_peak;
        let v_trough = base - sign * a + at_trough;
        ll_lo = ll_lo.min(v_peak).min(v_trough);
        ll_hi = ll_hi.max(v_peak).max(v_trough);
        lo += ll_lo + baselines;
        hi += ll_hi + baselines;
    }
    if let Some(&(sign, t)) = periodic.first() {
        let (plo, phi) = if sign > 0.0 {
            (t.v_min, t.v_max)
        } else {
            (-t.v_max, -t.v_min)
        };
        lo += plo;
        hi += phi;
    }
    Ok((lo, hi))
}

fn signed_band(sign: f64, lo: f64, hi: f64, shift: f64) -> (f64, f64) {
    if sign > 0.0 {
        (lo + shift, hi + shift)
    } else {
        (-hi + shift, -lo + shift)
    }
}

/// Schema tag of serialized expressions.
pub const EXPR_SCHEMA: &str = "idexpr/1";

#[derive(Serialize, Deserialize)]
struct ExprDocument {
    schema: String,
    expr: InitialDataExpr,
}

impl InitialDataExpr {
    /// JSON document `{"schema": "idexpr/1", "expr": ...}`.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&ExprDocument {
            schema: EXPR_SCHEMA.into(),
            expr: self.clone(),
        })?)
    }

    pub fn from_json(text: &str) -> Result<InitialDataExpr> {
        let doc: ExprDocument = serde_json::from_str(text)?;
        if doc.schema != EXPR_SCHEMA {
            return Err(Error::Serialization(format!(
                "expected schema {EXPR_SCHEMA}, found {}",
                doc.schema
            )));
        }
        doc.expr.validate()?;
        Ok(doc.expr)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trap() -> Trapezoid {
        Trapezoid::new(2.0, -1.0, DEFAULT_RAMP_WIDTH).unwrap()
    }

    #[test]
    fn preimage_vanishes_at_origin() {
        let e = InitialDataExpr::log_sine_preimage(1.0, 2.5, 0.0, 3);
        assert_eq!(eval_phi(&e, 0.0).unwrap(), 0.0);
        assert_eq!(
            eval_phi(&InitialDataExpr::constant(5.0), 123.0).unwrap(),
            5.0
        );
    }

    #[test]
    fn loglog_hits_peak() {
        let (alpha, beta) = (-0.4, 0.8);
        let e = InitialDataExpr::LogLogSine {
            amplitude: (beta - alpha) / 2.0,
            offset: (beta + alpha) / 2.0,
        };
        let tau = (PI / 2.0).exp().exp() - 2.0;
        assert!((eval_phi(&e, tau).unwrap() - beta).abs() < 1e-12);
    }

    #[test]
    fn eval_rejects_bad_radius() {
        let e = InitialDataExpr::constant(1.0);
        assert!(matches!(eval_phi(&e, f64::INFINITY), Err(Error::Range(_))));
        assert!(matches!(eval_phi(&e, -1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn trapezoid_shape() {
        let t = trap();
        assert!(t.period_integral().abs() < 1e-12);
        let (p_hi, p_lo) = t.plateaus();
        assert!(p_hi >= 0.0 && p_lo >= 0.0);
        let (ymax, ymin) = t.extremizers();
        assert_eq!(t.eval(ymax), 2.0);
        assert_eq!(t.eval(ymin), -1.0);
        for y in [0.1, 1.3, 2.9, 4.4, 6.0] {
            assert!((t.eval(y) - t.eval(y + 5.0 * TAU)).abs() < 1e-9);
        }
    }

    #[test]
    fn trapezoid_rejects_negative_plateau() {
        assert!(Trapezoid::new(100.0, -1.0, DEFAULT_RAMP_WIDTH).is_err());
        let t = Trapezoid::fitted(100.0, -1.0).unwrap();
        assert!(t.ramp_width < DEFAULT_RAMP_WIDTH);
        assert!(t.period_integral().abs() < 1e-10);
    }

    #[test]
    fn closed_h_pairs() {
        let e = InitialDataExpr::log_sine_preimage(1.0, 2.0, 0.0, 2);
        assert_eq!(
            closed_h(&e, 2),
            Some(InitialDataExpr::log_sine(1.0, 2.0, 0.0))
        );
        assert_eq!(closed_h(&e, 3), None);
        assert_eq!(
            closed_h(&InitialDataExpr::constant(3.0), 4),
            Some(InitialDataExpr::constant(3.0))
        );
        let g = PeriodicProfile::TrigPoly {
            constant: 0.2,
            cos: vec![0.5],
            sin: vec![0.0, 0.3],
        };
        let slow = InitialDataExpr::SlowFromPeriodic { g: g.clone(), n: 2 };
        assert_eq!(closed_h(&slow, 2), Some(InitialDataExpr::LogPeriodic { g }));
        assert_eq!(
            closed_h(&InitialDataExpr::PeriodicZeroMean(trap()), 2),
            None
        );
    }

    #[test]
    fn phi_from_h_unsupported() {
        let e = InitialDataExpr::PeriodicZeroMean(trap());
        assert!(matches!(phi_from_h(&e, 1), Err(Error::Unsupported(_))));
    }

    #[test]
    fn bands_of_leaves() {
        let b = analytic_band_phi(&InitialDataExpr::log_sine(2.0, 1.3, 0.5)).unwrap();
        assert!((b.0 + 1.5).abs() < 1e-12 && (b.1 - 2.5).abs() < 1e-12);
        let e = InitialDataExpr::log_sine_preimage(1.0, 1.0, 0.0, 2);
        let b = analytic_band_phi(&e).unwrap();
        let r = (1.0f64 + 0.25).sqrt();
        assert!((b.0 + r).abs() < 1e-10 && (b.1 - r).abs() < 1e-10, "{b:?}");
    }

    #[test]
    fn band_rejects_two_periodic_terms() {
        let e = InitialDataExpr::sum(vec![
            InitialDataExpr::PeriodicZeroMean(trap()),
            InitialDataExpr::PeriodicZeroMean(trap()),
        ]);
        assert!(matches!(analytic_band_phi(&e), Err(Error::Unsupported(_))));
    }

    #[test]
    fn power_sums() {
        for p in 0..8u32 {
            for k in [1.0, 5.0, 17.0] {
                let direct: f64 = (0..k as u32).map(|i| (i as f64).powi(p as i32)).sum();
                assert!(
                    (power_sum(p, k) - direct).abs() < 1e-9 * direct.max(1.0),
                    "p={p} k={k}"
                );
            }
        }
    }

    #[test]
    fn double_exp_centers() {
        let law = CenterLaw::DoubleExp {
            parity: Parity::Peak,
        };
        let c0 = law.center(0).unwrap();
        assert!((c0 - ((PI / 2.0).exp().exp() - 2.0)).abs() < 1e-9);
        assert!(law.center(1).is_none());
        assert!(law.inner_exponent(5).unwrap() > law.inner_exponent(4).unwrap());
        let trough = CenterLaw::DoubleExp {
            parity: Parity::Trough,
        };
        assert!(trough.center(0).unwrap() > 1e48);
    }

    #[test]
    fn json_schema_checked() {
        let e = InitialDataExpr::sum(vec![
            InitialDataExpr::log_sine(1.0, 2.0, 0.0),
            InitialDataExpr::PeriodicZeroMean(trap()),
        ]);
        let text = e.to_json().unwrap();
        assert_eq!(InitialDataExpr::from_json(&text).unwrap(), e);
        let bad = text.replace("idexpr/1", "idexpr/9");
        assert!(InitialDataExpr::from_json(&bad).is_err());
    }
}
