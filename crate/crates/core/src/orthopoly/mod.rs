//! Monic three-term recurrence coefficients
//! `π_{k+1}(x) = (x − α_k)π_k(x) − β_k π_{k−1}(x)` of a measure.
//!
//! `β₀` is stored as the total mass `μ₀`, so that `√β₀ = ‖π₀‖`.

mod discretise;
mod format;
mod gauss;
mod lanczos;
mod legendre;
mod moments;
mod stieltjes;
mod transform;

pub use discretise::{discretise, discretise_component};
pub use format::{parse_text, to_json, to_text};
pub use gauss::{gauss_rule, tridiagonal_eigen};
pub use lanczos::{lanczos_measure, lanczos_rkpw};
pub use legendre::{gauss_legendre, GlRule};
pub use moments::{gram_schmidt_generic, moment_gram_schmidt, GsBreakdown, GsScalar};
pub use stieltjes::{stieltjes_discretised, stieltjes_rule, stieltjes_with, DiscretisationOptions};
pub use transform::{affine_transform, from_orthonormal, to_orthonormal, Interval, Orthonormal};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::measures::MeasureError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    ClosedForm,
    StieltjesDiscretised,
    LanczosRkpw,
    MomentGramSchmidt,
}

impl Engine {
    pub fn name(&self) -> &'static str {
        match self {
            Engine::ClosedForm => "closed_form",
            Engine::StieltjesDiscretised => "stieltjes_discretised",
            Engine::LanczosRkpw => "lanczos_rkpw",
            Engine::MomentGramSchmidt => "moment_gram_schmidt",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        [Engine::ClosedForm, Engine::StieltjesDiscretised, Engine::LanczosRkpw, Engine::MomentGramSchmidt]
            .into_iter()
            .find(|e| e.name() == s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceCoefficients {
    pub alpha: Vec<f64>,
    /// `beta[0]` is the total mass.
    pub beta: Vec<f64>,
    pub engine: Engine,
    /// Per-coefficient relative error estimate (max over `α_k`, `β_k`).
    pub est_error: Vec<f64>,
    /// Size of the quadrature rule the coefficients came from, if any.
    pub quad_points: Option<usize>,
}

impl RecurrenceCoefficients {
    /// Coefficients with a roundoff-level error estimate.
    pub fn new(alpha: Vec<f64>, beta: Vec<f64>, engine: Engine) -> Self {
        let est_error = (0..alpha.len()).map(roundoff).collect();
        Self { alpha, beta, engine, est_error, quad_points: None }
    }

    pub fn n_terms(&self) -> usize {
        self.alpha.len()
    }

    pub fn mass(&self) -> f64 {
        self.beta[0]
    }

    /// The first `n` coefficient pairs.
    pub fn truncated(&self, n: usize) -> Self {
        let n = n.min(self.n_terms());
        Self {
            alpha: self.alpha[..n].to_vec(),
            beta: self.beta[..n].to_vec(),
            engine: self.engine,
            est_error: self.est_error[..n].to_vec(),
            quad_points: self.quad_points,
        }
    }

    pub fn max_est_error(&self) -> f64 {
        self.est_error.iter().copied().fold(0.0, f64::max)
    }

    /// Checks lengths, finiteness and `β_k > 0`.
    pub fn validate(&self) -> Result<(), OrthoError> {
        if self.alpha.is_empty() || self.alpha.len() != self.beta.len() || self.est_error.len() != self.alpha.len() {
            return Err(OrthoError::InvalidArgument(format!(
                "inconsistent lengths: alpha {}, beta {}, est_error {}",
                self.alpha.len(),
                self.beta.len(),
                self.est_error.len()
            )));
        }
        for (k, (&a, &b)) in self.alpha.iter().zip(&self.beta).enumerate() {
            if !a.is_finite() || !(b > 0.0 && b.is_finite()) {
                return Err(OrthoError::MeasureDegenerate {
                    index: k,
                    detail: format!("alpha = {a}, beta = {b}"),
                });
            }
        }
        Ok(())
    }
}

/// Roundoff floor used for error estimates of stable engines.
pub(crate) fn roundoff(k: usize) -> f64 {
    8.0 * f64::EPSILON * (k as f64 + 1.0)
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OrthoError {
    #[error("no convergence: relative change {change:.3e} still above tolerance at {points} quadrature points")]
    NoConvergence { points: usize, change: f64 },
    #[error("measure degenerate at index {index}: {detail}")]
    MeasureDegenerate { index: usize, detail: String },
    #[error("working precision exhausted at index {index} (beta <= 0)")]
    PrecisionExhausted { index: usize, partial: Box<RecurrenceCoefficients> },
    #[error("affine transform requires bounded intervals")]
    UnboundedSupport,
    #[error("tridiagonal eigensolver did not converge at index {0}")]
    EigenFailure(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Measure(#[from] MeasureError),
}

/// Node/weight pairs with strictly increasing nodes and positive weights.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    /// Sorts, drops non-positive weights and merges nodes closer than
    /// `1e−14` of the node span.
    pub fn from_pairs(mut pairs: Vec<(f64, f64)>) -> Self {
        pairs.retain(|p| p.1 > 0.0);
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let span = match (pairs.first(), pairs.last()) {
            (Some(a), Some(b)) => b.0 - a.0,
            _ => 0.0,
        };
        let tol = 1e-14 * span;
        let mut nodes: Vec<f64> = Vec::with_capacity(pairs.len());
        let mut weights: Vec<f64> = Vec::with_capacity(pairs.len());
        for (x, w) in pairs {
            match nodes.last_mut() {
                Some(last) if x - *last <= tol => {
                    let wl = weights.last_mut().unwrap();
                    *last = (*last * *wl + x * w) / (*wl + w);
                    *wl += w;
                }
                _ => {
                    nodes.push(x);
                    weights.push(w);
                }
            }
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn mass(&self) -> f64 {
        crate::numfmt::ksum(self.weights.iter().copied())
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }
}
