//! Constructions of initial data with prescribed oscillation limits, their
//! certificates, and the asymptotic envelope of `u(0, t)`.

use std::f64::consts::{E as EULER, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{
    analytic_band_phi, flatten, phi_from_h, refine, CenterLaw, InitialDataExpr, Parity,
    PeriodicProfile, Trapezoid, EXPR_SCHEMA,
};
use crate::moments::{kernel_moments, solve_m, KernelFlavor, DEFAULT_ROOT_TOL};
use crate::quadrature::QuadratureSpec;

/// Relative slack allowed in `p + q = α + β` and in the `r + s = α + β` split.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Half width of the bumps in the bump-train constructions.
pub const BUMP_HALF_WIDTH: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum TargetKind {
    /// Limits of the ball average `(p, q)` and of `u(0, t)` `(α, β)`.
    AverageQuad {
        p: f64,
        alpha: f64,
        beta: f64,
        q: f64,
    },
    /// Limits of the data `(r, s)` and of `u(0, t)` `(α, β)`.
    DataQuad {
        r: f64,
        alpha: f64,
        beta: f64,
        s: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrescriptionTarget {
    #[serde(flatten)]
    pub kind: TargetKind,
    pub n: u32,
}

/// Which construction produced a certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    Constant,
    /// Log-sine ball average whose preimage is the data.
    AverageLogSine,
    /// Log-sine data with `r + s = α + β`.
    DataLogSine,
    /// Log-sine data plus a zero-mean periodic wave, `r + s > α + β`.
    LogSinePlusPeriodic,
    /// Periodic wave with mean `α = β`.
    PeriodicPlateau,
    /// `sin(log log τ)` data, `r = α < β = s`.
    LogLogSine,
    /// Baseline `α` with upward bumps, `r = α = β < s`.
    RisingBumps,
    /// Baseline `s` with downward bumps, `r < α = β = s`.
    FallingBumps,
    /// Log-log sine plus bumps on its peaks, `r = α < β < s`.
    LogLogWithPeakBumps,
    /// Two-mode ball average with `p + q ≠ α + β`.
    TwoModeAverage,
}

/// The data together with the limits it is built to attain.
#[derive(Debug, Clone, PartialEq)]
pub struct PrescriptionCertificate {
    pub target: PrescriptionTarget,
    pub data: InitialDataExpr,
    pub m_used: Option<f64>,
    /// `(liminf φ, limsup φ)`.
    pub expected_phi_band: (f64, f64),
    /// `(liminf H, limsup H)`; `None` when the construction leaves it free.
    pub expected_h_band: Option<(f64, f64)>,
    /// `(liminf u(0,t), limsup u(0,t))`.
    pub expected_u_band: (f64, f64),
    pub construction: Construction,
    /// Built by negating the construction for the reflected target.
    pub reflected: bool,
}

impl PrescriptionCertificate {
    /// The six values `(r, p, α, β, q, s)`, with `p, q` absent when free.
    pub fn chain(&self) -> [Option<f64>; 6] {
        let (r, s) = self.expected_phi_band;
        let (a, b) = self.expected_u_band;
        let (p, q) = match self.expected_h_band {
            Some((p, q)) => (Some(p), Some(q)),
            None => (None, None),
        };
        [Some(r), p, Some(a), Some(b), q, Some(s)]
    }

    /// `r ≤ p ≤ α ≤ β ≤ q ≤ s` over the pinned values, with slack `tol`.
    pub fn chain_holds(&self, tol: f64) -> bool {
        chain_ordered(&self.chain(), tol)
    }

    fn negated(self, target: PrescriptionTarget) -> PrescriptionCertificate {
        let flip = |(lo, hi): (f64, f64)| (-hi, -lo);
        PrescriptionCertificate {
            target,
            data: self.data.negated(),
            m_used: self.m_used,
            expected_phi_band: flip(self.expected_phi_band),
            expected_h_band: self.expected_h_band.map(flip),
            expected_u_band: flip(self.expected_u_band),
            construction: self.construction,
            reflected: !self.reflected,
        }
    }
}

pub(crate) fn chain_ordered(values: &[Option<f64>], tol: f64) -> bool {
    let pinned: Vec<f64> = values.iter().flatten().copied().collect();
    pinned.windows(2).all(|w| w[0] <= w[1] + tol)
}

/// Schema tag of serialized certificates.
pub const CERT_SCHEMA: &str = "cert/1";

#[derive(Serialize, Deserialize)]
struct ExprDoc {
    schema: String,
    expr: InitialDataExpr,
}

#[derive(Serialize, Deserialize)]
struct CertDocument {
    schema: String,
    target: PrescriptionTarget,
    construction: Construction,
    reflected: bool,
    m_used: Option<f64>,
    expected_phi_band: (f64, f64),
    expected_h_band: Option<(f64, f64)>,
    expected_u_band: (f64, f64),
    data: ExprDoc,
}

impl PrescriptionCertificate {
    pub fn to_json(&self) -> Result<String> {
        let doc = CertDocument {
            schema: CERT_SCHEMA.into(),
            target: self.target,
            construction: self.construction,
            reflected: self.reflected,
            m_used: self.m_used,
            expected_phi_band: self.expected_phi_band,
            expected_h_band: self.expected_h_band,
            expected_u_band: self.expected_u_band,
            data: ExprDoc {
                schema: EXPR_SCHEMA.into(),
                expr: self.data.clone(),
            },
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    pub fn from_json(text: &str) -> Result<PrescriptionCertificate> {
        let doc: CertDocument = serde_json::from_str(text)?;
        if doc.schema != CERT_SCHEMA {
            return Err(Error::Serialization(format!(
                "expected schema {CERT_SCHEMA}, found {}",
                doc.schema
            )));
        }
        if doc.data.schema != EXPR_SCHEMA {
            return Err(Error::Serialization(format!(
                "expected expression schema {EXPR_SCHEMA}, found {}",
                doc.data.schema
            )));
        }
        doc.data.expr.validate()?;
        if doc.target.n == 0 {
            return Err(Error::Domain("dimension must be at least 1".into()));
        }
        Ok(PrescriptionCertificate {
            target: doc.target,
            data: doc.data.expr,
            m_used: doc.m_used,
            expected_phi_band: doc.expected_phi_band,
            expected_h_band: doc.expected_h_band,
            expected_u_band: doc.expected_u_band,
            construction: doc.construction,
            reflected: doc.reflected,
        })
    }
}

fn check_inputs(values: &[f64], n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("dimension must be at least 1".into()));
    }
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::Domain(format!(
            "target values must be finite, got {v}"
        )));
    }
    Ok(())
}

fn nearly_equal(a: f64, b: f64) -> bool {
    (a - b).abs() <= SYMMETRY_TOL * (1.0 + a.abs().max(b.abs()))
}

/// Data whose ball average oscillates in `[p, q]` and whose solution at the
/// origin oscillates in `[α, β]`, for `p < α < β < q` with `p + q = α + β`.
pub fn prescribe_average(
    p: f64,
    alpha: f64,
    beta: f64,
    q: f64,
    n: u32,
    spec: &QuadratureSpec,
) -> Result<PrescriptionCertificate> {
    check_inputs(&[p, alpha, beta, q], n)?;
    if !nearly_equal(p + q, alpha + beta) {
        return Err(Error::Symmetry {
            lhs: p + q,
            rhs: alpha + beta,
        });
    }
    if p == alpha && beta == q {
        return Err(Error::OutOfScope(
            "p = α and β = q: ball average and solution share their limits, which is the \
             earlier equal-limits construction"
                .into(),
        ));
    }
    if !(p < alpha && alpha < beta && beta < q) {
        return Err(Error::Domain(format!(
            "need p < α < β < q, got ({p}, {alpha}, {beta}, {q})"
        )));
    }
    let amplitude = (q - p) / 2.0;
    let offset = (q + p) / 2.0;
    let m = solve_m(
        n,
        (beta - alpha) / (q - p),
        KernelFlavor::AverageKernel,
        spec,
        DEFAULT_ROOT_TOL,
    )?;
    let data = InitialDataExpr::log_sine_preimage(amplitude, m, offset, n);
    Ok(PrescriptionCertificate {
        target: PrescriptionTarget {
            kind: TargetKind::AverageQuad { p, alpha, beta, q },
            n,
        },
        expected_phi_band: analytic_band_phi(&data)?,
        data,
        m_used: Some(m),
        expected_h_band: Some((p, q)),
        expected_u_band: (alpha, beta),
        construction: Construction::AverageLogSine,
        reflected: false,
    })
}

/// Data oscillating in `[r, s]` whose solution at the origin oscillates in
/// `[α, β]`, for any `r ≤ α ≤ β ≤ s`.
pub fn prescribe_data(
    r: f64,
    alpha: f64,
    beta: f64,
    s: f64,
    n: u32,
    spec: &QuadratureSpec,
) -> Result<PrescriptionCertificate> {
    check_inputs(&[r, alpha, beta, s], n)?;
    if !(r <= alpha && alpha <= beta && beta <= s) {
        return Err(Error::Domain(format!(
            "need r ≤ α ≤ β ≤ s, got ({r}, {alpha}, {beta}, {s})"
        )));
    }
    let target = PrescriptionTarget {
        kind: TargetKind::DataQuad { r, alpha, beta, s },
        n,
    };
    let cert = |data: InitialDataExpr,
                h: (f64, f64),
                construction: Construction|
     -> Result<PrescriptionCertificate> {
        Ok(PrescriptionCertificate {
            target,
            expected_phi_band: analytic_band_phi(&data)?,
            data,
            m_used: None,
            expected_h_band: Some(h),
            expected_u_band: (alpha, beta),
            construction,
            reflected: false,
        })
    };

    let (lo_eq, mid_eq, hi_eq) = (r == alpha, alpha == beta, beta == s);
    match (lo_eq, mid_eq, hi_eq) {
        (true, true, true) => cert(
            InitialDataExpr::constant(alpha),
            (alpha, alpha),
            Construction::Constant,
        ),
        (false, true, false) => {
            let wave = Trapezoid::fitted(s - alpha, r - alpha)?;
            let data = InitialDataExpr::sum(vec![
                InitialDataExpr::constant(alpha),
                InitialDataExpr::PeriodicZeroMean(wave),
            ]);
            cert(data, (alpha, alpha), Construction::PeriodicPlateau)
        }
        (true, false, true) => cert(
            log_log_sine(alpha, beta),
            (alpha, beta),
            Construction::LogLogSine,
        ),
        (true, true, false) => cert(
            InitialDataExpr::BumpTrain {
                height: s - alpha,
                half_width: BUMP_HALF_WIDTH,
                baseline: alpha,
                centers: CenterLaw::Geometric { base: EULER },
            },
            (alpha, alpha),
            Construction::RisingBumps,
        ),
        (false, true, true) => cert(
            InitialDataExpr::BumpTrain {
                height: r - s,
                half_width: BUMP_HALF_WIDTH,
                baseline: s,
                centers: CenterLaw::Geometric { base: EULER },
            },
            (alpha, alpha),
            Construction::FallingBumps,
        ),
        (true, false, false) => {
            let data = InitialDataExpr::sum(vec![
                log_log_sine(alpha, beta),
                InitialDataExpr::BumpTrain {
                    height: s - beta,
                    half_width: BUMP_HALF_WIDTH,
                    baseline: 0.0,
                    centers: CenterLaw::DoubleExp {
                        parity: Parity::Peak,
                    },
                },
            ]);
            cert(data, (alpha, beta), Construction::LogLogWithPeakBumps)
        }
        (false, false, true) => {
            // mirror of the previous case
            Ok(prescribe_data(-s, -beta, -alpha, -r, n, spec)?.negated(target))
        }
        (false, false, false) => {
            let (lhs, rhs) = (r + s, alpha + beta);
            if nearly_equal(lhs, rhs) {
                log_sine_data(r, alpha, beta, s, target, spec)
            } else if lhs > rhs {
                split_with_periodic(r, alpha, beta, s, target, spec)
            } else {
                Ok(prescribe_data(-s, -beta, -alpha, -r, n, spec)?.negated(target))
            }
        }
    }
}

fn log_log_sine(alpha: f64, beta: f64) -> InitialDataExpr {
    InitialDataExpr::LogLogSine {
        amplitude: (beta - alpha) / 2.0,
        offset: (beta + alpha) / 2.0,
    }
}

/// Ball-average band of `a·sin(m log(τ+1)) + c`: the average damps the
/// amplitude by `n/|n + im|`.
fn log_sine_h_band(amplitude: f64, m: f64, offset: f64, n: u32) -> (f64, f64) {
    let damped = amplitude / (1.0 + (m / n as f64).powi(2)).sqrt();
    (offset - damped, offset + damped)
}

fn log_sine_data(
    r: f64,
    alpha: f64,
    beta: f64,
    s: f64,
    target: PrescriptionTarget,
    spec: &QuadratureSpec,
) -> Result<PrescriptionCertificate> {
    let n = target.n;
    let amplitude = (s - r) / 2.0;
    let offset = (s + r) / 2.0;
    let m = solve_m(
        n,
        (beta - alpha) / (s - r),
        KernelFlavor::DataKernel,
        spec,
        DEFAULT_ROOT_TOL,
    )?;
    let data = InitialDataExpr::log_sine(amplitude, m, offset);
    Ok(PrescriptionCertificate {
        target,
        expected_phi_band: analytic_band_phi(&data)?,
        data,
        m_used: Some(m),
        expected_h_band: Some(log_sine_h_band(amplitude, m, offset, n)),
        expected_u_band: (alpha, beta),
        construction: Construction::DataLogSine,
        reflected: false,
    })
}

/// The split `λ = α + β − r = ε + δ` used when `r + s > α + β`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodicSplit {
    pub epsilon: f64,
    pub delta: f64,
}

impl PeriodicSplit {
    pub fn new(r: f64, alpha: f64, beta: f64) -> PeriodicSplit {
        let lambda = alpha + beta - r;
        let epsilon = (alpha - r).min(lambda - beta) / 2.0;
        PeriodicSplit {
            epsilon,
            delta: lambda - epsilon,
        }
    }
}

fn split_with_periodic(
    r: f64,
    alpha: f64,
    beta: f64,
    s: f64,
    target: PrescriptionTarget,
    spec: &QuadratureSpec,
) -> Result<PrescriptionCertificate> {
    let PeriodicSplit { epsilon, delta } = PeriodicSplit::new(r, alpha, beta);
    let slow = log_sine_data(r + epsilon, alpha, beta, delta, target, spec)?;
    let wave = Trapezoid::fitted(s - delta, -epsilon)?;
    let data = InitialDataExpr::sum(vec![slow.data, InitialDataExpr::PeriodicZeroMean(wave)]);
    Ok(PrescriptionCertificate {
        target,
        expected_phi_band: analytic_band_phi(&data)?,
        data,
        m_used: slow.m_used,
        // the periodic part averages out
        expected_h_band: slow.expected_h_band,
        expected_u_band: (alpha, beta),
        construction: Construction::LogSinePlusPeriodic,
        reflected: false,
    })
}

/// The two-mode example `H = sin(log(τ+1)) + sin(2 log(τ+1))`, `n = 1`,
/// whose bands break `p + q = α + β`.
pub fn two_mode_example(spec: &QuadratureSpec) -> Result<PrescriptionCertificate> {
    let n = 1;
    let h = InitialDataExpr::sum(vec![
        InitialDataExpr::log_sine(1.0, 1.0, 0.0),
        InitialDataExpr::log_sine(1.0, 2.0, 0.0),
    ]);
    let data = phi_from_h(&h, n)?;
    let h_band = analytic_band_phi(&h)?;
    let envelope = Envelope::build(&data, n, spec)?;
    let u_band = envelope.extrema()?;
    Ok(PrescriptionCertificate {
        target: PrescriptionTarget {
            kind: TargetKind::AverageQuad {
                p: h_band.0,
                alpha: u_band.0,
                beta: u_band.1,
                q: h_band.1,
            },
            n,
        },
        expected_phi_band: analytic_band_phi(&data)?,
        data,
        m_used: Some(1.0),
        expected_h_band: Some(h_band),
        expected_u_band: u_band,
        construction: Construction::TwoModeAverage,
        reflected: false,
    })
}

/// Sampling variable of an envelope.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EnvelopeClock {
    /// Periodic in `x = log √(4t)` with this base frequency.
    LogTime(f64),
    /// Periodic in `log log √(4t)` with period 2π.
    LogLogTime,
    /// Constant envelope.
    Flat,
}

/// `cos_coef·cos(m x) + sin_coef·sin(m x)` in `x = log √(4t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeMode {
    pub m: f64,
    pub cos_coef: f64,
    pub sin_coef: f64,
}

/// Precomputed long-time profile of `u(0, t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Envelope {
    pub modes: Vec<EnvelopeMode>,
    /// `(amplitude, offset)` of a log-log sine part.
    pub log_log: Option<(f64, f64)>,
    pub offset: f64,
    pub clock: EnvelopeClock,
}

impl Envelope {
    /// Envelope of `u(0, t)` for data `expr` in dimension `n`.
    ///
    /// Log-sine data use the data-kernel moments; terms whose ball average is
    /// log-periodic in dimension `n` use the average-kernel moments of that
    /// average. Periodic waves and bumps contribute nothing beyond their
    /// baseline.
    pub fn build(expr: &InitialDataExpr, n: u32, spec: &QuadratureSpec) -> Result<Envelope> {
        let mut leaves = Vec::new();
        flatten(expr, 1.0, &mut leaves);
        let mut env = Envelope {
            modes: Vec::new(),
            log_log: None,
            offset: 0.0,
            clock: EnvelopeClock::Flat,
        };
        let mut has_bumps = false;
        let mut has_other = false;
        for &(sign, leaf) in &leaves {
            match leaf {
                InitialDataExpr::BumpTrain { baseline, .. } => {
                    has_bumps = true;
                    env.offset += sign * baseline;
                }
                _ => has_other = true,
            }
            match leaf {
                InitialDataExpr::Constant { c } => env.offset += sign * c,
                InitialDataExpr::LogSine {
                    amplitude,
                    m,
                    offset,
                } => {
                    env.offset += sign * offset;
                    env.add_sine(sign * amplitude, 0.0, *m, n, KernelFlavor::DataKernel, spec)?;
                }
                InitialDataExpr::LogSineAvgPreimage {
                    amplitude,
                    m,
                    offset,
                    n: dim,
                } => {
                    env.offset += sign * offset;
                    if *dim == n {
                        env.add_sine(
                            sign * amplitude,
                            0.0,
                            *m,
                            n,
                            KernelFlavor::AverageKernel,
                            spec,
                        )?;
                    } else {
                        let cos_amp = amplitude * m / *dim as f64;
                        env.add_sine(
                            sign * amplitude,
                            sign * cos_amp,
                            *m,
                            n,
                            KernelFlavor::DataKernel,
                            spec,
                        )?;
                    }
                }
                InitialDataExpr::LogPeriodic { g } => {
                    env.add_profile(sign, g, n, KernelFlavor::DataKernel, spec)?;
                }
                InitialDataExpr::SlowFromPeriodic { g, n: dim } => {
                    if *dim != n {
                        return Err(Error::Unsupported(format!(
                            "envelope of a slow periodic term built for n = {dim} in dimension {n}"
                        )));
                    }
                    env.add_profile(sign, g, n, KernelFlavor::AverageKernel, spec)?;
                }
                InitialDataExpr::LogLogSine { amplitude, offset } => {
                    if env.log_log.is_some() {
                        return Err(Error::Unsupported("more than one log-log sine".into()));
                    }
                    env.log_log = Some((sign * amplitude, sign * offset));
                }
                _ => {}
            }
        }
        if has_bumps && !has_other {
            return Err(Error::Unsupported(
                "the envelope of bump-only data is not known in closed form".into(),
            ));
        }
        if env.log_log.is_some() && !env.modes.is_empty() {
            return Err(Error::Unsupported(
                "log-log and log-periodic parts cannot share one clock".into(),
            ));
        }
        env.clock = if env.log_log.is_some() {
            EnvelopeClock::LogLogTime
        } else if env.modes.is_empty() {
            EnvelopeClock::Flat
        } else {
            let freqs: Vec<f64> = env.modes.iter().map(|m| m.m).collect();
            EnvelopeClock::LogTime(base_frequency(&freqs)?)
        };
        Ok(env)
    }

    /// Adds `a·sin(m ℓ) + b·cos(m ℓ)` where `ℓ` is the log radius.
    fn add_sine(
        &mut self,
        sin_amp: f64,
        cos_amp: f64,
        m: f64,
        n: u32,
        flavor: KernelFlavor,
        spec: &QuadratureSpec,
    ) -> Result<()> {
        let mp = kernel_moments(n, m, flavor, spec)?;
        let (a, b) = (mp.a_value, mp.b_value);
        // sin(mx + mℓ) → A sin(mx) + B cos(mx); cos(mx + mℓ) → A cos(mx) − B sin(mx)
        self.modes.push(EnvelopeMode {
            m,
            sin_coef: sin_amp * a - cos_amp * b,
            cos_coef: sin_amp * b + cos_amp * a,
        });
        Ok(())
    }

    fn add_profile(
        &mut self,
        sign: f64,
        g: &PeriodicProfile,
        n: u32,
        flavor: KernelFlavor,
        spec: &QuadratureSpec,
    ) -> Result<()> {
        match g {
            PeriodicProfile::TrigPoly { constant, cos, sin } => {
                self.offset += sign * constant;
                let harmonics = cos.len().max(sin.len());
                for k in 0..harmonics {
                    let a_k = cos.get(k).copied().unwrap_or(0.0);
                    let b_k = sin.get(k).copied().unwrap_or(0.0);
                    if a_k != 0.0 || b_k != 0.0 {
                        self.add_sine(sign * b_k, sign * a_k, (k + 1) as f64, n, flavor, spec)?;
                    }
                }
                Ok(())
            }
            PeriodicProfile::Trapezoid(_) => Err(Error::Unsupported(
                "envelope of a trapezoidal log-periodic profile".into(),
            )),
        }
    }

    /// Envelope value at time `t`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::Domain(format!("time must be > 0, got {t}")));
        }
        let x = log_sqrt_4t(t);
        if let Some((a, c)) = self.log_log {
            if x <= 0.0 {
                return Err(Error::Domain(format!(
                    "log-log envelope needs 4t > 1, got t = {t}"
                )));
            }
            return Ok(self.offset + a * x.ln().sin() + c);
        }
        Ok(self.eval_log_time(x))
    }

    /// Log-periodic part at `x = log √(4t)`.
    pub fn eval_log_time(&self, x: f64) -> f64 {
        self.offset
            + self
                .modes
                .iter()
                .map(|md| md.cos_coef * (md.m * x).cos() + md.sin_coef * (md.m * x).sin())
                .sum::<f64>()
    }

    /// Exact `(min, max)` of the envelope over one period.
    pub fn extrema(&self) -> Result<(f64, f64)> {
        match self.clock {
            EnvelopeClock::Flat => Ok((self.offset, self.offset)),
            EnvelopeClock::LogLogTime => {
                let (a, c) = self.log_log.unwrap_or((0.0, 0.0));
                Ok((self.offset + c - a.abs(), self.offset + c + a.abs()))
            }
            EnvelopeClock::LogTime(base) => {
                let period = TAU / base;
                let top = self.modes.iter().map(|m| m.m).fold(base, f64::max);
                let samples = ((top / base) * 256.0).ceil().max(512.0) as usize;
                let h = period / samples as f64;
                let mut lo = (0.0, f64::INFINITY);
                let mut hi = (0.0, f64::NEG_INFINITY);
                for i in 0..samples {
                    let x = h * i as f64;
                    let v = self.eval_log_time(x);
                    if v < lo.1 {
                        lo = (x, v);
                    }
                    if v > hi.1 {
                        hi = (x, v);
                    }
                }
                let lo = refine(|x| self.eval_log_time(x), lo, h, false);
                let hi = refine(|x| self.eval_log_time(x), hi, h, true);
                Ok((lo.1, hi.1))
            }
        }
    }
}

/// `log √(4t)`.
pub fn log_sqrt_4t(t: f64) -> f64 {
    0.5 * (4.0 * t).ln()
}

fn base_frequency(freqs: &[f64]) -> Result<f64> {
    let first = freqs[0];
    for q in 1..=64u32 {
        let base = first / q as f64;
        if freqs.iter().all(|&f| {
            let r = f / base;
            (r - r.round()).abs() < 1e-9 * r.max(1.0) && r.round() >= 1.0
        }) {
            return Ok(base);
        }
    }
    Err(Error::Unsupported(format!(
        "envelope frequencies {freqs:?} have no common period"
    )))
}

/// Asymptotic envelope of `u(0, t)` for the certificate's data.
pub fn envelope_u(cert: &PrescriptionCertificate, t: f64, spec: &QuadratureSpec) -> Result<f64> {
    Envelope::build(&cert.data, cert.target.n, spec)?.eval(t)
}
