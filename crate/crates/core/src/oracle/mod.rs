//! Independent extended-precision references: exact rational recurrences,
//! explicit discrete orthogonal polynomials, brute-force orthogonality sums
//! and double-exponential quadrature.
//!
//! Nothing here shares code with the double-precision engines it checks,
//! apart from the [`Measure`] description itself.

pub mod exact;
pub mod fixture;
pub mod hp;
pub mod quad;
pub mod special;
pub mod sums;

pub use exact::{gram_schmidt_exact, power_law_moments, ExactCoefficients, ExactRational};
pub use quad::{exp_sinh, highprec_quadrature, tanh_sinh, Endpoints};
pub use sums::{discrete_orthogonality_sum, hahn_gram, littleq_gram, littleq_terms, DiscreteFamily};

use thiserror::Error;

use crate::measures::{Measure, MeasureError, MeasureKind, Weight};
use hp::HpFloat;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("moment matrix singular at index {index}")]
    MomentMatrixSingular { index: usize },
    #[error("need {needed} moments, got {got}")]
    NotEnoughMoments { needed: usize, got: usize },
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("orthogonality sum not converged after {terms} terms (relative tail bound {tail_bound:.3e})")]
    TailNotConverged { terms: usize, tail_bound: f64 },
    #[error("degree {degree} exceeds the family's maximum {max}")]
    DegreeOutOfRange { degree: usize, max: usize },
    #[error("integrand grows towards an endpoint that was not declared singular")]
    SingularityUndeclared,
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl From<OracleError> for MeasureError {
    fn from(e: OracleError) -> Self {
        MeasureError::Unsupported(e.to_string())
    }
}

impl From<OracleError> for crate::orthopoly::OrthoError {
    fn from(e: OracleError) -> Self {
        crate::orthopoly::OrthoError::Measure(e.into())
    }
}

/// `Γ(s + r + 1)` in extended precision for integer or half-integer `s`.
fn gamma_hp(arg: f64, bits: usize) -> Option<HpFloat> {
    // arg = s + r + 1 > 0
    let two = 2.0 * arg;
    if arg.fract() == 0.0 {
        let mut acc = hp::from_i64(1, bits);
        for j in 2..arg as i64 {
            acc *= hp::from_i64(j, bits);
        }
        Some(acc)
    } else if two.fract() == 0.0 {
        // Γ(k + 1/2) = (1/2)(3/2)⋯(k − 1/2) √π
        let k = (arg - 0.5) as i64;
        let mut acc = hp::pi(bits).sqrt();
        for j in 0..k {
            acc = acc * hp::from_i64(2 * j + 1, bits) / hp::from_i64(2, bits);
        }
        Some(acc)
    } else {
        None
    }
}

/// Moments `μ_0 … μ_{count−1}` of `m` at `digits` decimal digits, from
/// closed forms (power laws, integer or half-integer exponential moments)
/// or exact sums (point masses).
pub fn moments_hp(m: &Measure, count: usize, digits: usize) -> Result<Vec<HpFloat>, OracleError> {
    let bits = hp::bits_for_digits(digits);
    let mut out = vec![hp::from_i64(0, bits); count];
    match m.kind() {
        MeasureKind::Discrete { nodes, weights } => {
            for (x, w) in nodes.iter().zip(weights) {
                let xh = hp::from_f64(*x, bits);
                let mut term = hp::from_f64(*w, bits);
                for mu in out.iter_mut() {
                    *mu += term.clone();
                    term *= xh.clone();
                }
            }
        }
        MeasureKind::Continuous(comps) => {
            for c in comps {
                for (r, mu) in out.iter_mut().enumerate() {
                    let v = match c.weight {
                        Weight::PowerLaw { scale, s } if c.hi.is_finite() => {
                            let p = s + r as f64 + 1.0;
                            let ph = hp::from_f64(p, bits);
                            let pw = |x: f64| {
                                if x == 0.0 {
                                    hp::from_i64(0, bits)
                                } else {
                                    (ph.clone() * hp::from_f64(x, bits).ln()).exp()
                                }
                            };
                            hp::from_f64(scale, bits) * (pw(c.hi) - pw(c.lo)) / ph
                        }
                        Weight::PowerLawExp { scale, s, rate } if c.lo == 0.0 && c.hi.is_infinite() => {
                            let p = s + r as f64 + 1.0;
                            let g = gamma_hp(p, bits).ok_or_else(|| {
                                OracleError::Unsupported(format!("Gamma({p}) in extended precision"))
                            })?;
                            let ln_rate = hp::from_f64(rate, bits).ln();
                            hp::from_f64(scale, bits) * g / (hp::from_f64(p, bits) * ln_rate).exp()
                        }
                        _ => {
                            return Err(OracleError::Unsupported(
                                "extended-precision moments need a closed-form weight".into(),
                            ))
                        }
                    };
                    *mu += v;
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_law_moments_hp() {
        let m = Measure::power_law(2.0, 0.5, 0.0, 1.0).unwrap();
        let mu = moments_hp(&m, 3, 50).unwrap();
        assert!((hp::to_f64(&mu[2]) - 2.0 / 3.5).abs() < 1e-16);
    }

    #[test]
    fn half_integer_gamma() {
        let m = Measure::power_law_exp(1.0, 0.5).unwrap();
        let mu = moments_hp(&m, 2, 50).unwrap();
        // Γ(3/2) = √π/2, Γ(5/2) = 3√π/4
        let sp = std::f64::consts::PI.sqrt();
        assert!((hp::to_f64(&mu[0]) - sp / 2.0).abs() < 1e-15);
        assert!((hp::to_f64(&mu[1]) - 0.75 * sp).abs() < 1e-15);
        assert!(moments_hp(&Measure::power_law_exp(1.0, 0.3).unwrap(), 2, 50).is_err());
    }
}
