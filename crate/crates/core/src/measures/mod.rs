//! Spectral densities and the orthogonality measures they induce.
//!
//! Under the linear dispersion `ω = g·x` a spectral density `J(ω)` induces
//! the weight `w(x) = g·J(g·x)/π`, so that `∫w dx = η₀/π`.

mod density;
mod integrate;
mod measure;
mod tabulated;

pub use density::{GapSegment, PointMass, PowerLaw, SpectralDensity};
pub(crate) use density::{log_mode_count, log_star_scales};
pub use integrate::adaptive_integral;
pub use measure::{Advisory, Component, Measure, MeasureKind, Support, Weight};
pub use tabulated::TabulatedDensity;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeasureError {
    #[error("non-integrable density: {0}")]
    NonIntegrable(String),
    #[error("negative density value {value} at omega = {omega}")]
    NegativeDensity { omega: f64, value: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("cannot read tabulated density: {0}")]
    Table(String),
    #[error("operation not available for this measure: {0}")]
    Unsupported(String),
}

/// Builds the orthogonality measure induced by `j`.
///
/// The dispersion constant is `g = ω_c` for the named families and the
/// largest support energy otherwise.
pub fn induced_measure(j: &SpectralDensity) -> Result<Measure, MeasureError> {
    Measure::induced(j)
}

/// Total integrated density `η₀ = ∫J(ω)dω`.
pub fn eta0(j: &SpectralDensity) -> Result<f64, MeasureError> {
    j.eta0()
}

/// Splits a gapped density into one density per contiguous segment,
/// ordered by support. Any other density comes back as a singleton.
pub fn split_gapped(j: &SpectralDensity) -> Vec<SpectralDensity> {
    j.split_gapped()
}
