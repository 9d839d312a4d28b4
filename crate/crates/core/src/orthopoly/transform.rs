//! Monic ↔ orthonormal conversion and affine changes of support.

use super::{Engine, OrthoError, RecurrenceCoefficients};

/// Recurrence `p_{k+1} = (C_k x − A_k) p_k − B_k p_{k−1}` of the
/// orthonormal polynomials `p_k = π_k / ‖π_k‖`.
#[derive(Debug, Clone, PartialEq)]
pub struct Orthonormal {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
}

/// `A_k = α_k/√β_{k+1}`, `B_k = √(β_k/β_{k+1})`, `C_k = 1/√β_{k+1}` for
/// every `k` with `β_{k+1}` available.
pub fn to_orthonormal(rc: &RecurrenceCoefficients) -> Result<Orthonormal, OrthoError> {
    rc.validate()?;
    let n = rc.n_terms().saturating_sub(1);
    let mut out = Orthonormal { a: Vec::with_capacity(n), b: Vec::with_capacity(n), c: Vec::with_capacity(n) };
    for k in 0..n {
        let s = rc.beta[k + 1].sqrt();
        out.a.push(rc.alpha[k] / s);
        out.b.push((rc.beta[k] / rc.beta[k + 1]).sqrt());
        out.c.push(1.0 / s);
    }
    Ok(out)
}

/// Inverse of [`to_orthonormal`]: `α_k = A_k/C_k`, `β_{k+1} = 1/C_k²`.
/// `beta0` supplies the mass, which the orthonormal form does not carry.
pub fn from_orthonormal(on: &Orthonormal, beta0: f64, engine: Engine) -> RecurrenceCoefficients {
    let alpha = on.a.iter().zip(&on.c).map(|(a, c)| a / c).collect();
    let mut beta = vec![beta0];
    beta.extend(on.c.iter().map(|c| 1.0 / (c * c)));
    beta.truncate(on.a.len());
    RecurrenceCoefficients::new(alpha, beta, engine)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite() && self.lo < self.hi
    }
}

/// Coefficients of the weight transported by the increasing affine map
/// `from → to`, `y = m·x + c`: `α' = mα + c`, `β'_k = m²β_k` for `k ≥ 1`
/// and `β'_0 = m·β_0`.
pub fn affine_transform(rc: &RecurrenceCoefficients, from: Interval, to: Interval) -> Result<RecurrenceCoefficients, OrthoError> {
    if !from.is_bounded() || !to.is_bounded() {
        return Err(OrthoError::UnboundedSupport);
    }
    let m = (to.hi - to.lo) / (from.hi - from.lo);
    let c = to.lo - m * from.lo;
    let alpha = rc.alpha.iter().map(|a| m * a + c).collect();
    let beta = rc
        .beta
        .iter()
        .enumerate()
        .map(|(k, b)| if k == 0 { m * b } else { m * m * b })
        .collect();
    Ok(RecurrenceCoefficients { alpha, beta, ..rc.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn legendre(n: usize) -> RecurrenceCoefficients {
        // on [−1,1]: β_0 = 2, β_k = k²/(4k²−1)
        let alpha = vec![0.0; n];
        let beta = (0..n)
            .map(|k| if k == 0 { 2.0 } else { (k * k) as f64 / (4.0 * (k * k) as f64 - 1.0) })
            .collect();
        RecurrenceCoefficients::new(alpha, beta, Engine::ClosedForm)
    }

    #[test]
    fn chebyshev_limit_values() {
        let rc = RecurrenceCoefficients::new(vec![0.0; 6], vec![0.25; 6], Engine::ClosedForm);
        let on = to_orthonormal(&rc).unwrap();
        for k in 0..5 {
            assert_eq!((on.a[k], on.b[k], on.c[k]), (0.0, 1.0, 2.0));
        }
    }

    #[test]
    fn shifted_uniform_first_c() {
        // uniform on [0,1]: β_1 = 1/12, so C_0 = √12 = 2√3
        let rc = RecurrenceCoefficients::new(vec![0.5, 0.5], vec![1.0, 1.0 / 12.0], Engine::ClosedForm);
        let on = to_orthonormal(&rc).unwrap();
        assert!((on.c[0] - 2.0 * 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn legendre_to_unit_interval() {
        let rc = legendre(8);
        let id = affine_transform(&rc, Interval::new(-1.0, 1.0), Interval::new(-1.0, 1.0)).unwrap();
        assert_eq!(id, rc);
        let u = affine_transform(&rc, Interval::new(-1.0, 1.0), Interval::new(0.0, 1.0)).unwrap();
        assert!(u.alpha.iter().all(|&a| a == 0.5));
        assert_eq!(u.beta[0], 1.0);
        assert!((u.beta[1] - 1.0 / 12.0).abs() < 1e-16);
    }

    #[test]
    fn unbounded_rejected() {
        let r = affine_transform(&legendre(3), Interval::new(0.0, f64::INFINITY), Interval::new(0.0, 1.0));
        assert_eq!(r, Err(OrthoError::UnboundedSupport));
    }

    proptest! {
        #[test]
        fn affine_round_trip(a in -5.0f64..5.0, w in 0.1f64..10.0) {
            let rc = legendre(20);
            let unit = affine_transform(&rc, Interval::new(-1.0, 1.0), Interval::new(0.0, 1.0)).unwrap();
            let there = affine_transform(&unit, Interval::new(0.0, 1.0), Interval::new(a, a + w)).unwrap();
            let back = affine_transform(&there, Interval::new(a, a + w), Interval::new(0.0, 1.0)).unwrap();
            for k in 0..20 {
                prop_assert!((back.alpha[k] - unit.alpha[k]).abs() < 1e-14);
                prop_assert!((back.beta[k] / unit.beta[k] - 1.0).abs() < 1e-14);
            }
        }

        #[test]
        fn orthonormal_identities(betas in proptest::collection::vec(0.01f64..4.0, 2..30),
                                  shift in -3.0f64..3.0) {
            let n = betas.len();
            let alpha: Vec<f64> = (0..n).map(|k| shift + 0.1 * k as f64).collect();
            let rc = RecurrenceCoefficients::new(alpha, betas, Engine::ClosedForm);
            let on = to_orthonormal(&rc).unwrap();
            for k in 0..n - 1 {
                let lhs = on.b[k] * on.b[k];
                let rhs = rc.beta[k] * on.c[k] * on.c[k];
                prop_assert!((lhs - rhs).abs() <= 1e-14 * lhs.abs());
            }
            let back = from_orthonormal(&on, rc.beta[0], Engine::ClosedForm);
            for k in 0..n - 1 {
                prop_assert!((back.alpha[k] - rc.alpha[k]).abs() <= 1e-14 * rc.alpha[k].abs().max(1.0));
                prop_assert!((back.beta[k] / rc.beta[k] - 1.0).abs() <= 1e-14);
            }
        }
    }
}
