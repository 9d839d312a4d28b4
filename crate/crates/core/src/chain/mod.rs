//! Chain Hamiltonian parameters from recurrence coefficients.
//!
//! A measure with monic recurrence `(α_k, β_k)` and dispersion `ω = g·x`
//! maps onto the chain
//!
//! ```text
//! H = H_loc + c₀ Â (b₀ + b₀†) + Σₙ ωₙ bₙ†bₙ + Σₙ tₙ (bₙ₊₁†bₙ + h.c.)
//! ```
//!
//! with `c₀ = √β₀`, `ωₙ = g·αₙ` and `tₙ = g·√βₙ₊₁`. A chain of `L` sites
//! carries `L` frequencies and `L − 1` hoppings.

mod bulla;
mod export;
mod families;
mod star;

pub use bulla::{bulla_recursion_check, hahn_transform_block, littleq_transform_block};
pub use export::{to_csv, to_json};
pub use families::{
    hahn_chain, hahn_recurrence, hahn_signed, jacobi_chain, jacobi_recurrence, laguerre_chain,
    laguerre_recurrence, littleq_chain, littleq_max_length, littleq_signed, HahnSigned, LittleQSigned,
};
pub use star::{star_model, DiscretisedStarModel, Statistics};

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::orthopoly::{Engine, OrthoError, RecurrenceCoefficients};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChainError {
    #[error("delta must be > 1, got {0}")]
    DeltaOutOfRange(f64),
    #[error("site index {requested} beyond the {modes} available modes")]
    IndexBeyondModes { requested: usize, modes: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Ortho(#[from] OrthoError),
}

/// Closed-form families with explicit chain coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// Power law with hard cutoff (shifted Jacobi).
    Jacobi,
    /// Power law with exponential cutoff (associated Laguerre).
    Laguerre,
    /// Logarithmic discretisation (little-q Jacobi).
    LittleQJacobi,
    /// Linear discretisation (Hahn).
    Hahn,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Jacobi => "jacobi",
            Family::Laguerre => "laguerre",
            Family::LittleQJacobi => "little_q_jacobi",
            Family::Hahn => "hahn",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    ClosedForm(Family),
    Engine(Engine),
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::ClosedForm(fam) => write!(f, "closed_form:{}", fam.name()),
            Source::Engine(e) => f.write_str(e.name()),
        }
    }
}

/// Sign convention relating the published hoppings to the analytic ones.
///
/// `Alternating` means the natural polynomial basis gives `tₙ < 0`; the
/// reported magnitudes follow from the site gauge `bₙ → (−1)ⁿ bₙ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Gauge {
    Identity,
    Alternating,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainParameters {
    pub c0: f64,
    pub omega: Vec<f64>,
    /// `t[n]` couples sites `n` and `n + 1`; always positive.
    pub t: Vec<f64>,
    /// Dispersion constant.
    pub g: f64,
    pub source: Source,
    /// `(ω_∞, t_∞)` for Szegő-class measures.
    pub asymptote: Option<(f64, f64)>,
    pub gauge: Gauge,
    /// Relative error estimate per site.
    pub est_error: Vec<f64>,
    pub quad_points: Option<usize>,
    pub notes: Vec<String>,
}

impl ChainParameters {
    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }

    /// Hoppings in the sign convention of the underlying polynomial basis.
    pub fn signed_hopping(&self) -> Vec<f64> {
        match self.gauge {
            Gauge::Identity => self.t.clone(),
            Gauge::Alternating => self.t.iter().map(|t| -t).collect(),
        }
    }

    /// The first `n` sites.
    pub fn truncated(&self, n: usize) -> Self {
        let n = n.min(self.len());
        let mut out = self.clone();
        out.omega.truncate(n);
        out.t.truncate(n.saturating_sub(1));
        out.est_error.truncate(n);
        out
    }

    pub fn with_asymptote(mut self, omega_inf: f64, t_inf: f64) -> Self {
        self.asymptote = Some((omega_inf, t_inf));
        self
    }

    /// Recurrence coefficients reproducing this chain.
    pub fn to_recurrence(&self) -> RecurrenceCoefficients {
        let g = self.g;
        let alpha = self.omega.iter().map(|w| w / g).collect();
        let mut beta = vec![self.c0 * self.c0];
        beta.extend(self.t.iter().map(|t| (t / g) * (t / g)));
        let engine = match self.source {
            Source::ClosedForm(_) => Engine::ClosedForm,
            Source::Engine(e) => e,
        };
        RecurrenceCoefficients {
            alpha,
            beta,
            engine,
            est_error: self.est_error.clone(),
            quad_points: self.quad_points,
        }
    }
}

/// Assembles the chain of `rc.n_terms()` sites.
pub fn chain_from_coefficients(rc: &RecurrenceCoefficients, g: f64) -> Result<ChainParameters, ChainError> {
    if !(g > 0.0 && g.is_finite()) {
        return Err(ChainError::InvalidArgument(format!("g must be > 0, got {g}")));
    }
    rc.validate()?;
    let source = match rc.engine {
        Engine::ClosedForm => Source::ClosedForm(Family::Jacobi),
        e => Source::Engine(e),
    };
    Ok(ChainParameters {
        c0: rc.beta[0].sqrt(),
        omega: rc.alpha.iter().map(|a| g * a).collect(),
        t: rc.beta[1..].iter().map(|b| g * b.sqrt()).collect(),
        g,
        source,
        asymptote: None,
        gauge: Gauge::Identity,
        est_error: rc.est_error.clone(),
        quad_points: rc.quad_points,
        notes: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::Measure;
    use crate::orthopoly::stieltjes_with;

    #[test]
    fn legendre_gives_flat_frequencies() {
        let rc = jacobi_recurrence(0.1, 0.0, 2.0, 30);
        let cp = chain_from_coefficients(&rc, 2.0).unwrap();
        for w in &cp.omega {
            assert!((w - 1.0).abs() < 1e-15);
        }
        assert_eq!(cp.t.len(), 29);
    }

    #[test]
    fn single_pair_is_one_site() {
        let rc = RecurrenceCoefficients::new(vec![0.3], vec![2.0], Engine::LanczosRkpw);
        let cp = chain_from_coefficients(&rc, 1.5).unwrap();
        assert_eq!(cp.omega.len(), 1);
        assert!((cp.omega[0] - 0.45).abs() < 1e-16);
        assert!(cp.t.is_empty());
        assert_eq!(cp.c0, 2f64.sqrt());
    }

    #[test]
    fn ohmic_first_site_against_stieltjes() {
        let m = Measure::power_law(0.2, 1.0, 0.0, 1.0).unwrap();
        let rc = stieltjes_with(&m, 2, &Default::default()).unwrap();
        let cp = chain_from_coefficients(&rc, 1.0).unwrap();
        assert!((cp.omega[0] - 2.0 / 3.0).abs() < 1e-14);
        assert!((cp.t[0] - 2f64.sqrt() / 6.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_scale() {
        let rc = RecurrenceCoefficients::new(vec![0.3], vec![2.0], Engine::LanczosRkpw);
        assert!(chain_from_coefficients(&rc, 0.0).is_err());
        let bad = RecurrenceCoefficients::new(vec![0.3, 0.1], vec![2.0, -1.0], Engine::LanczosRkpw);
        assert!(matches!(chain_from_coefficients(&bad, 1.0), Err(ChainError::Ortho(_))));
    }

    #[test]
    fn recurrence_round_trip() {
        let cp = jacobi_chain(0.1, 0.5, 3.0, 12).unwrap();
        let back = chain_from_coefficients(&cp.to_recurrence(), 3.0).unwrap();
        for (a, b) in cp.omega.iter().zip(&back.omega) {
            assert!((a - b).abs() <= 1e-15 * a.abs());
        }
        for (a, b) in cp.t.iter().zip(&back.t) {
            assert!((a - b).abs() <= 2e-15 * a.abs());
        }
    }
}
