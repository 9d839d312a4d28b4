//! Recurrence coefficients from raw moments by Gram–Schmidt.
//!
//! The Hankel moment matrix is exponentially ill-conditioned, so in double
//! precision this loses all significant digits after a few dozen terms.
//! With enough working precision it is an exact reference.

use std::ops::{Add, Div, Mul, Sub};

use super::{roundoff, Engine, OrthoError, RecurrenceCoefficients};
use crate::measures::Measure;
use crate::oracle::hp::{self, HpFloat};

/// Arithmetic needed by the Gram–Schmidt recursion.
pub trait GsScalar:
    Clone + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self>
{
    /// Zero at the working precision of `self`.
    fn zero_like(&self) -> Self;
    fn is_positive(&self) -> bool;
    fn to_f64(&self) -> f64;
}

impl GsScalar for f64 {
    fn zero_like(&self) -> Self {
        0.0
    }
    fn is_positive(&self) -> bool {
        *self > 0.0 && self.is_finite()
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl GsScalar for HpFloat {
    fn zero_like(&self) -> Self {
        HpFloat::ZERO.with_precision(self.precision()).value()
    }
    fn is_positive(&self) -> bool {
        hp::is_positive(self)
    }
    fn to_f64(&self) -> f64 {
        hp::to_f64(self)
    }
}

/// `Σ_i Σ_j p_i q_j μ_{i+j+shift}`
fn inner<T: GsScalar>(p: &[T], q: &[T], mu: &[T], shift: usize) -> T {
    let mut acc = mu[0].zero_like();
    for (i, pi) in p.iter().enumerate() {
        let mut row = mu[0].zero_like();
        for (j, qj) in q.iter().enumerate() {
            row = row + qj.clone() * mu[i + j + shift].clone();
        }
        acc = acc + pi.clone() * row;
    }
    acc
}

/// Breakdown index with the `(α, β)` computed before it.
pub type GsBreakdown<T> = (usize, Vec<T>, Vec<T>);

/// Gram–Schmidt on monomials against the moment functional.
///
/// Needs `μ_0 … μ_{2n−1}`. Returns `(α, β)` as working-precision values, or
/// the index at which a norm stopped being positive together with the
/// coefficients computed so far.
pub fn gram_schmidt_generic<T: GsScalar>(mu: &[T], n: usize) -> Result<(Vec<T>, Vec<T>), GsBreakdown<T>> {
    assert!(mu.len() >= 2 * n, "need 2n moments");
    let zero = mu[0].zero_like();
    let one = mu[0].clone() / mu[0].clone();
    let mut polys: Vec<Vec<T>> = Vec::with_capacity(n);
    let mut norms: Vec<T> = Vec::with_capacity(n);
    let mut alpha = Vec::with_capacity(n);
    let mut beta = Vec::with_capacity(n);
    for k in 0..n {
        let mut p = vec![zero.clone(); k + 1];
        p[k] = one.clone();
        for (j, pj) in polys.iter().enumerate() {
            // ⟨x^k, π_j⟩ / ⟨π_j, π_j⟩
            let mut proj = zero.clone();
            for (i, c) in pj.iter().enumerate() {
                proj = proj + c.clone() * mu[i + k].clone();
            }
            let coef = proj / norms[j].clone();
            for (i, c) in pj.iter().enumerate() {
                p[i] = p[i].clone() - coef.clone() * c.clone();
            }
        }
        let norm = inner(&p, &p, mu, 0);
        if !norm.is_positive() {
            return Err((k, alpha, beta));
        }
        alpha.push(inner(&p, &p, mu, 1) / norm.clone());
        beta.push(if k == 0 { mu[0].clone() } else { norm.clone() / norms[k - 1].clone() });
        polys.push(p);
        norms.push(norm);
    }
    Ok((alpha, beta))
}

/// Gram–Schmidt coefficients of `m` at `precision_digits` decimal digits.
///
/// Up to 17 digits the moments and arithmetic are `f64`; above that the
/// moments come from the extended-precision oracle.
pub fn moment_gram_schmidt(m: &Measure, n: usize, precision_digits: usize) -> Result<RecurrenceCoefficients, OrthoError> {
    if n == 0 {
        return Err(OrthoError::InvalidArgument("n must be at least 1".into()));
    }
    // Hankel conditioning on a unit interval grows like (1+√2)^{4k}
    let growth = |k: usize| (1.0 + 2f64.sqrt()).powi(4 * k as i32);
    let (result, unit) = if precision_digits <= 17 {
        let mu = m.moments(2 * n);
        (gram_schmidt_generic(&mu, n), f64::EPSILON)
    } else {
        let mu = crate::oracle::moments_hp(m, 2 * n, precision_digits)?;
        let r = gram_schmidt_generic(&mu, n);
        let f = |v: Vec<HpFloat>| v.iter().map(hp::to_f64).collect::<Vec<f64>>();
        (
            r.map(|(a, b)| (f(a), f(b))).map_err(|(k, a, b)| (k, f(a), f(b))),
            10f64.powi(-(precision_digits as i32)),
        )
    };
    let est = |len: usize| (0..len).map(|k| (unit * growth(k)).max(roundoff(k))).collect::<Vec<f64>>();
    match result {
        Ok((alpha, beta)) => Ok(RecurrenceCoefficients {
            est_error: est(alpha.len()),
            alpha,
            beta,
            engine: Engine::MomentGramSchmidt,
            quad_points: None,
        }),
        Err((index, mut alpha, beta)) => {
            alpha.truncate(beta.len());
            let partial = RecurrenceCoefficients {
                est_error: est(alpha.len()),
                alpha,
                beta,
                engine: Engine::MomentGramSchmidt,
                quad_points: None,
            };
            Err(OrthoError::PrecisionExhausted { index, partial: Box::new(partial) })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_pair_is_moment_ratio() {
        let m = Measure::power_law(3.0, 2.0, 0.0, 1.0).unwrap();
        let rc = moment_gram_schmidt(&m, 1, 16).unwrap();
        assert!((rc.alpha[0] - 0.75).abs() < 1e-15);
        assert!((rc.beta[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn double_precision_is_fine_for_small_n() {
        let m = Measure::power_law(1.0, 0.0, 0.0, 1.0).unwrap();
        let rc = moment_gram_schmidt(&m, 4, 16).unwrap();
        assert!((rc.beta[1] - 1.0 / 12.0).abs() < 1e-12);
        assert!((rc.alpha[3] - 0.5).abs() < 1e-10);
    }

    #[test]
    fn extended_precision_linear_weight() {
        // w = x on [0,1], closed form α_n = (1 + 1/((2n+1)(2n+3)))/2
        let m = Measure::power_law(1.0, 1.0, 0.0, 1.0).unwrap();
        let rc = moment_gram_schmidt(&m, 10, 100).unwrap();
        for k in 0..10 {
            let nf = k as f64;
            let a = 0.5 * (1.0 + 1.0 / ((2.0 * nf + 1.0) * (2.0 * nf + 3.0)));
            assert!((rc.alpha[k] - a).abs() < 1e-15);
        }
    }
}
