//! Radial initial data for the heat equation with prescribed oscillation.
//!
//! For bounded radial data `φ(|x|)` on `ℝⁿ` the library builds data whose
//! value, ball average `H` and solution at the origin `u(0, t)` oscillate
//! between chosen limits, and checks the limits numerically.
//!
//! ```
//! use heat_oscillation::{prescribe_average, u_origin, QuadratureSpec};
//!
//! let spec = QuadratureSpec::default();
//! let cert = prescribe_average(-1.0, -0.3, 0.3, 1.0, 2, &spec)?;
//! let u = u_origin(&cert.data, 2, 1e6, &spec)?;
//! assert!(u.abs() <= 0.31);
//! # Ok::<(), heat_oscillation::Error>(())
//! ```
//!
//! The guide in `book/` walks through each layer.

// `!(x > 0.0)` is the NaN-rejecting form on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod error;
pub mod expr;
pub mod moments;
pub mod prescribe;
pub mod probe;
pub mod quadrature;
pub mod special;

pub use error::{Error, Result};
pub use expr::{
    analytic_band_phi, closed_h, eval_phi, numeric_h, phi_from_h, CenterLaw, InitialDataExpr,
    Parity, PeriodicProfile, Trapezoid,
};
pub use moments::{
    kernel_moments, kernel_moments_shifted, moment_norm, solve_m, unit_ball_volume, KernelFlavor,
    MomentPair,
};
pub use prescribe::{
    envelope_u, prescribe_average, prescribe_data, two_mode_example, Construction, Envelope,
    PrescriptionCertificate, PrescriptionTarget, TargetKind,
};
pub use probe::{
    band_estimate, u_offcenter_1d, u_origin, u_origin_from_h, verify_certificate,
    verify_certificate_with, BandClock, BandOptions, OscillationBand, VerificationReport,
    VerifyOptions,
};
pub use quadrature::{IntegralResult, IntegrandHints, QuadratureSpec};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/quadrature.md")]
    mod quadrature {}
    #[doc = include_str!("../../../book/src/moments.md")]
    mod moments {}
    #[doc = include_str!("../../../book/src/initial-data.md")]
    mod initial_data {}
    #[doc = include_str!("../../../book/src/prescriptions.md")]
    mod prescriptions {}
    #[doc = include_str!("../../../book/src/probing.md")]
    mod probing {}
}
