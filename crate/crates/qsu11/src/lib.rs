//! Numerical q-analysis for extended quantum SU(1,1).
//!
//! The crate is layered bottom-up:
//!
//! - [`qcalculus`]: q-Pochhammer symbols, the theta-product shift law and
//!   `₂φ₁` series with rigorous truncation bounds and analytic continuation.
//! - [`su11`]: the index set `I_q`, spectral parameters and the explicit
//!   spherical and coamenability matrix coefficients.
//! - [`limitlab`]: limit sweeps, the cancellation-stable ratio near `λ = q`,
//!   uniformity and approximate-identity gaps.
//! - [`smoother`]: Gaussian averages of spherical coefficients along contours.
//! - [`grids`]: the fixed parameter grids used by the checks.
//!
//! ```
//! use qsu11::{spherical_az, IqPoint, QBase, SeriesControl, SpectralParam};
//!
//! let base = QBase::new(0.5).unwrap();
//! let z = SpectralParam::real(1.0, &base).unwrap();
//! let a = spherical_az(&base, &z, IqPoint::positive(-4), &SeriesControl::default()).unwrap();
//! assert_eq!(a.value.re, 1.0);
//! ```

pub mod error;
pub mod grids;
pub mod limitlab;
pub mod qcalculus;
pub mod smoother;
pub mod su11;

pub use error::{Error, Result};
pub use qcalculus::{
    continued_terms, nearest_power, phi21, phi21_continued, phi21_direct, phi21_heine, qpoch,
    qpoch_infinite, qpoch_ratio, qpoch_signed, theta_pair, ContinuedTerms, QBase, ResidualMode,
    SeriesControl, SeriesEval, ThetaPair, POLE_GUARD,
};
pub use limitlab::{
    approx_identity_gap, lemma_b1_naive, lemma_b1_ratio, limit_sweep, uniform_sup_gap,
    ApproxIdentityGap, B1Order, Monotone, SweepFamily, SweepParam, SweepReport, SweepRow, Symbol,
    Verdict,
};
pub use smoother::{
    default_half_span, gaussian_smooth, path_independence, ContourPath, Integrand, PathKind,
    QuadratureSpec, Smoothed,
};
pub use su11::{
    averaged_coamen, coamen_coeff, spherical_az, structural_maps, CoeffForm, IqPoint, Sign,
    SpectralParam, SphericalCase, StructuralMaps,
};

pub type C64 = num_complex::Complex64;
