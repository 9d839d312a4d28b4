//! Exact rational arithmetic and the exact recurrence of a moment sequence.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::hp::{self, HpFloat};
use super::OracleError;

/// Arbitrary-size rational in canonical form (reduced, positive denominator).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactRational(BigRational);

impl ExactRational {
    pub fn new(numerator: i64, denominator: i64) -> Result<Self, OracleError> {
        if denominator == 0 {
            return Err(OracleError::ZeroDenominator);
        }
        Ok(Self(BigRational::new(BigInt::from(numerator), BigInt::from(denominator))))
    }

    pub fn from_integer(n: i64) -> Self {
        Self(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn one() -> Self {
        Self(BigRational::one())
    }

    pub fn numerator(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denominator(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Correctly rounded at `bits` of binary precision.
    pub fn to_hp(&self, bits: usize) -> HpFloat {
        let n = hp::parse(&self.numerator().to_string(), bits + 64).expect("integer literal");
        let d = hp::parse(&self.denominator().to_string(), bits + 64).expect("integer literal");
        (n / d).with_precision(bits).value()
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr for ExactRational {
            type Output = ExactRational;
            fn $m(self, rhs: Self) -> Self {
                ExactRational(self.0.$m(rhs.0))
            }
        }
        impl<'a> $tr<&'a ExactRational> for &'a ExactRational {
            type Output = ExactRational;
            fn $m(self, rhs: &'a ExactRational) -> ExactRational {
                ExactRational((&self.0).$m(&rhs.0))
            }
        }
    };
}
binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for ExactRational {
    type Output = ExactRational;
    fn neg(self) -> Self {
        ExactRational(-self.0)
    }
}

/// Exact monic recurrence coefficients; `beta[0]` is `μ₀`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactCoefficients {
    pub alpha: Vec<ExactRational>,
    pub beta: Vec<ExactRational>,
}

impl ExactCoefficients {
    pub fn alpha_f64(&self) -> Vec<f64> {
        self.alpha.iter().map(ExactRational::to_f64).collect()
    }

    pub fn beta_f64(&self) -> Vec<f64> {
        self.beta.iter().map(ExactRational::to_f64).collect()
    }
}

/// Moment functional applied to `p(x)·q(x)·x^shift`.
fn functional(p: &[ExactRational], q: &[ExactRational], mu: &[ExactRational], shift: usize) -> ExactRational {
    let mut acc = ExactRational::zero();
    for (i, a) in p.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in q.iter().enumerate() {
            acc = acc + &(a * b) * &mu[i + j + shift];
        }
    }
    acc
}

/// Orthogonalises the monomials against the moment functional in exact
/// arithmetic, building each new polynomial from the previous two.
///
/// Needs moments `μ_0 … μ_{2n−1}`.
pub fn gram_schmidt_exact(moments: &[ExactRational], n: usize) -> Result<ExactCoefficients, OracleError> {
    if moments.len() < 2 * n {
        return Err(OracleError::NotEnoughMoments { needed: 2 * n, got: moments.len() });
    }
    let mut alpha = Vec::with_capacity(n);
    let mut beta = Vec::with_capacity(n);
    let mut prev: Vec<ExactRational> = Vec::new();
    let mut cur = vec![ExactRational::one()];
    let mut prev_norm = ExactRational::one();
    for k in 0..n {
        let norm = functional(&cur, &cur, moments, 0);
        if !norm.is_positive() {
            return Err(OracleError::MomentMatrixSingular { index: k });
        }
        let a = &functional(&cur, &cur, moments, 1) / &norm;
        let b = if k == 0 { moments[0].clone() } else { &norm / &prev_norm };
        // π_{k+1} = (x − α_k) π_k − β_k π_{k−1}
        let mut next = vec![ExactRational::zero(); k + 2];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] = &next[i + 1] + c;
            next[i] = &next[i] - &(&a * c);
        }
        if k > 0 {
            for (i, c) in prev.iter().enumerate() {
                next[i] = &next[i] - &(&b * c);
            }
        }
        alpha.push(a);
        beta.push(b);
        prev = std::mem::replace(&mut cur, next);
        prev_norm = norm;
    }
    Ok(ExactCoefficients { alpha, beta })
}

/// Moments `1/(s+r+1)`, `r < count`, of `x^s` on `[0,1]` for integer `s`.
pub fn power_law_moments(s: u32, count: usize) -> Vec<ExactRational> {
    (0..count)
        .map(|r| ExactRational::new(1, s as i64 + r as i64 + 1).expect("nonzero"))
        .collect()
}
