//! Exact abelianization of rank-2 λ-connections on a formal disc.
//!
//! Everything is computed over the rationals in truncated series rings; a
//! result never claims coefficients beyond the window it actually knows.

pub mod abelianize;
pub mod error;
pub mod gauge;
pub mod matrix;
pub mod oracle;
pub mod rational;
pub mod series;
pub mod spectral;
pub mod wasow;

pub use abelianize::{
    find_integral_lattice, forward_abelianize, normalize_scalar, pushforward_scalar,
    roundtrip_check, scalar_gauge_equivalent, LatticeResult, PushforwardResult, RoundtripReport,
    ScalarConnection,
};
pub use error::{Error, ErrorKind, NormalizeFailure, Result};
pub use gauge::{GaugeMatrix, MatrixConnection, ScalarGauge};
pub use matrix::Mat2;
pub use rational::Rational;
pub use series::{BiSeries, Chart, Laurent, Truncation};
pub use spectral::{CoverChart, CurveClass, SpectralCurve};
pub use wasow::{DiagonalizationResult, Sheets};
