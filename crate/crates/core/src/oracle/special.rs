//! Explicit hypergeometric forms of the little-q Jacobi and Hahn
//! polynomials, evaluated in extended precision.

use super::hp::{self, HpFloat};

/// `(a; q)_k = (1−a)(1−aq)⋯(1−aq^{k−1})`
pub fn q_pochhammer(a: &HpFloat, q: &HpFloat, k: usize) -> HpFloat {
    let one = hp::from_i64(1, a.precision().max(q.precision()));
    let mut acc = one.clone();
    let mut term = a.clone();
    for _ in 0..k {
        acc *= one.clone() - term.clone();
        term *= q.clone();
    }
    acc
}

/// Rising factorial `(a)_k = a(a+1)⋯(a+k−1)`.
pub fn pochhammer(a: &HpFloat, k: usize) -> HpFloat {
    let bits = a.precision();
    let mut acc = hp::from_i64(1, bits);
    for j in 0..k {
        acc *= a.clone() + hp::from_i64(j as i64, bits);
    }
    acc
}

/// Working precision for little-q sums: the explicit series cancels about
/// `n²/2 · log₂Δ` bits at degree `n`.
pub fn littleq_bits(digits: usize, max_degree: usize, delta: f64) -> usize {
    hp::bits_for_digits(digits) + max_degree * max_degree * delta.log2().ceil() as usize / 2 + 64
}

/// Little-q Jacobi family `p_n(x; q^s, 1 | q)` with `q = 1/Δ`.
#[derive(Debug, Clone)]
pub struct LittleQ {
    pub q: HpFloat,
    /// `a = q^s`
    pub a: HpFloat,
    pub bits: usize,
}

impl LittleQ {
    pub fn new(delta: f64, s: f64, bits: usize) -> Self {
        let q = hp::from_i64(1, bits) / hp::from_f64(delta, bits);
        let a = (hp::from_f64(s, bits) * q.ln()).exp();
        Self { q, a, bits }
    }

    /// `q^m`
    pub fn node(&self, m: usize) -> HpFloat {
        self.q.powi(m.into()).with_precision(self.bits).value()
    }

    /// Orthogonality weight `(aq)^m` at the node `q^m`.
    pub fn weight(&self, m: usize) -> HpFloat {
        (self.a.clone() * self.q.clone()).powi(m.into()).with_precision(self.bits).value()
    }

    /// Power-series coefficients of `p_n` from
    /// `₂φ₁(q^{−n}, a q^{n+1}; a q; q; q x)`.
    pub fn coefficients(&self, n: usize) -> Vec<HpFloat> {
        let one = hp::from_i64(1, self.bits);
        let q = &self.q;
        let qinv_n = one.clone() / q.powi(n.into());
        let ab = self.a.clone() * q.powi((n + 1).into());
        let aq = self.a.clone() * q.clone();
        let mut out = Vec::with_capacity(n + 1);
        let mut c = one.clone();
        let mut u = qinv_n;
        let mut v = ab;
        let mut w = aq;
        let mut z = q.clone();
        for k in 0..=n {
            if k > 0 {
                c = c * (one.clone() - u.clone()) * (one.clone() - v.clone()) * q.clone()
                    / ((one.clone() - w.clone()) * (one.clone() - z.clone()));
                u *= q.clone();
                v *= q.clone();
                w *= q.clone();
                z *= q.clone();
            }
            out.push(c.clone());
        }
        out
    }

    /// `p_n(x)` by Horner's rule on [`coefficients`](Self::coefficients).
    pub fn eval(coeffs: &[HpFloat], x: &HpFloat) -> HpFloat {
        let mut acc = coeffs.last().unwrap().clone();
        for c in coeffs.iter().rev().skip(1) {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    /// Closed-form squared norm
    /// `q^{n(1+s)} (q;q)_n² / ((q^{s+1};q)_n² (1 − q^{2n+1+s}))`.
    pub fn norm_sq_closed(&self, n: usize) -> HpFloat {
        let one = hp::from_i64(1, self.bits);
        let aq = self.a.clone() * self.q.clone();
        let qq = q_pochhammer(&self.q, &self.q, n);
        let aqq = q_pochhammer(&aq, &self.q, n);
        let tail = one - aq.clone() * self.q.powi((2 * n).into());
        aq.powi(n.into()) * qq.clone() * qq / (aqq.clone() * aqq * tail)
    }
}

/// Hahn polynomial `Q_k(x; α, β, N) = ₃F₂(−k, k+α+β+1, −x; α+1, −N; 1)`.
pub fn hahn_q(k: usize, x: usize, alpha: &HpFloat, beta: &HpFloat, n: usize) -> HpFloat {
    let bits = alpha.precision();
    let one = hp::from_i64(1, bits);
    let ab1 = alpha.clone() + beta.clone() + one.clone();
    let mut term = one.clone();
    let mut sum = one.clone();
    for j in 0..k.min(x) {
        let jf = hp::from_i64(j as i64, bits);
        // ratio of consecutive terms
        let num = (jf.clone() - hp::from_i64(k as i64, bits))
            * (hp::from_i64(k as i64, bits) + ab1.clone() + jf.clone())
            * (jf.clone() - hp::from_i64(x as i64, bits));
        let den = (alpha.clone() + one.clone() + jf.clone())
            * (jf.clone() - hp::from_i64(n as i64, bits))
            * (jf + one.clone());
        term = term * num / den;
        sum += term.clone();
    }
    sum
}

/// Hahn weight `C(α+x, x)·C(β+N−x, N−x)`.
pub fn hahn_weight(x: usize, alpha: &HpFloat, beta: &HpFloat, n: usize) -> HpFloat {
    let bits = alpha.precision();
    let mut w = hp::from_i64(1, bits);
    for j in 1..=x {
        w = w * (alpha.clone() + hp::from_i64(j as i64, bits)) / hp::from_i64(j as i64, bits);
    }
    for j in 1..=(n - x) {
        w = w * (beta.clone() + hp::from_i64(j as i64, bits)) / hp::from_i64(j as i64, bits);
    }
    w
}

/// The displayed normalisation
/// `(−1)^k (k+α+β+1)_{N+1} (β+1)_k k! / ((2k+α+β+1)(α+1)_k (−N)_k N!)`.
pub fn hahn_displayed_norm(k: usize, alpha: &HpFloat, beta: &HpFloat, n: usize) -> HpFloat {
    let bits = alpha.precision();
    let one = hp::from_i64(1, bits);
    let kf = hp::from_i64(k as i64, bits);
    let fact = |m: usize| pochhammer(&one, m);
    let num = pochhammer(&(kf.clone() + alpha.clone() + beta.clone() + one.clone()), n + 1)
        * pochhammer(&(beta.clone() + one.clone()), k)
        * fact(k);
    let den = (hp::from_i64(2 * k as i64, bits) + alpha.clone() + beta.clone() + one.clone())
        * pochhammer(&(alpha.clone() + one.clone()), k)
        * pochhammer(&hp::from_i64(-(n as i64), bits), k)
        * fact(n);
    let v = num / den;
    if k % 2 == 1 {
        -v
    } else {
        v
    }
}
