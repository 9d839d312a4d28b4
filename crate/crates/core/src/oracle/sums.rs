//! Brute-force discrete orthogonality sums.

use super::hp::{self, HpFloat};
use super::special::{hahn_q, hahn_weight, littleq_bits, LittleQ};
use super::OracleError;

/// Discrete families with known orthogonality measures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DiscreteFamily {
    /// Weight `Δ^{−m(1+s)}` on the nodes `Δ^{−m}`, `m = 0, 1, …`
    LittleQ { delta: f64, s: f64 },
    /// Weight `C(s+x, x)` on `x = 0..=n`.
    Hahn { n: usize, s: f64 },
}

/// Relative size of the neglected little-q tail that is accepted.
const TAIL_TOL: f64 = 1e-40;

/// `Σ weight(x)·p_k(x)·p_l(x)` over the first `terms` support points, at
/// `digits` decimal digits.
///
/// The little-q tail is bounded by the geometric weight tail times the
/// polynomial values at the cut (both tend to 1 as `x → 0`); a bound
/// above `1e−40` of the sum's scale is `TailNotConverged`. The Hahn sum is
/// finite and needs `terms ≥ n + 1`.
pub fn discrete_orthogonality_sum(
    family: DiscreteFamily,
    k: usize,
    l: usize,
    terms: usize,
    digits: usize,
) -> Result<HpFloat, OracleError> {
    match family {
        DiscreteFamily::LittleQ { delta, s } => {
            let bits = littleq_bits(digits, k.max(l), delta);
            let lq = LittleQ::new(delta, s, bits);
            let (ck, cl) = (lq.coefficients(k), lq.coefficients(l));
            let mut sum = hp::from_i64(0, bits);
            let mut dk = hp::from_i64(0, bits);
            let mut dl = hp::from_i64(0, bits);
            for m in 0..terms {
                let x = lq.node(m);
                let w = lq.weight(m);
                let (pk, pl) = (LittleQ::eval(&ck, &x), LittleQ::eval(&cl, &x));
                sum += w.clone() * pk.clone() * pl.clone();
                dk += w.clone() * pk.clone() * pk;
                dl += w * pl.clone() * pl;
            }
            let x = lq.node(terms);
            let pk = hp::to_f64(&LittleQ::eval(&ck, &x)).abs();
            let pl = hp::to_f64(&LittleQ::eval(&cl, &x)).abs();
            let r = 1.0 / delta.powf(1.0 + s);
            let tail = 2.0 * pk.max(1.0) * pl.max(1.0) * (terms as f64 * (1.0 + s) * -delta.ln()).exp() / (1.0 - r);
            let scale = (hp::to_f64(&dk) * hp::to_f64(&dl)).sqrt();
            if !(tail <= TAIL_TOL * scale) {
                return Err(OracleError::TailNotConverged { terms, tail_bound: tail / scale });
            }
            Ok(sum)
        }
        DiscreteFamily::Hahn { n, s } => {
            if terms < n + 1 {
                return Err(OracleError::TailNotConverged { terms, tail_bound: f64::INFINITY });
            }
            if k > n || l > n {
                return Err(OracleError::DegreeOutOfRange { degree: k.max(l), max: n });
            }
            let bits = hp::bits_for_digits(digits);
            let al = hp::from_f64(s, bits);
            let be = hp::from_i64(0, bits);
            let mut sum = hp::from_i64(0, bits);
            for x in 0..=n {
                sum += hahn_weight(x, &al, &be, n) * hahn_q(k, x, &al, &be, n) * hahn_q(l, x, &al, &be, n);
            }
            Ok(sum)
        }
    }
}

/// Smallest little-q term count whose tail is safely negligible for degree
/// up to `max_degree`.
pub fn littleq_terms(delta: f64, s: f64, max_degree: usize) -> usize {
    // weights fall by Δ^{−(1+s)} per node; polynomials settle after ~max_degree nodes
    let per = (1.0 + s) * delta.log10();
    (45.0 / per).ceil() as usize + 2 * max_degree + 10
}

/// Full Gram matrix `G_{kl} = Σ w p_k p_l`, `k, l ≤ max_degree`, of the
/// little-q family over `terms` nodes (no tail check).
pub fn littleq_gram(delta: f64, s: f64, max_degree: usize, terms: usize, digits: usize) -> Vec<Vec<HpFloat>> {
    let bits = littleq_bits(digits, max_degree, delta);
    let lq = LittleQ::new(delta, s, bits);
    let coeffs: Vec<Vec<HpFloat>> = (0..=max_degree).map(|k| lq.coefficients(k)).collect();
    let zero = hp::from_i64(0, bits);
    let mut g = vec![vec![zero; max_degree + 1]; max_degree + 1];
    for m in 0..terms {
        let x = lq.node(m);
        let w = lq.weight(m);
        let p: Vec<HpFloat> = coeffs.iter().map(|c| LittleQ::eval(c, &x)).collect();
        for k in 0..=max_degree {
            let wk = w.clone() * p[k].clone();
            for l in 0..=k {
                g[k][l] += wk.clone() * p[l].clone();
            }
        }
    }
    for k in 0..=max_degree {
        for l in 0..k {
            g[l][k] = g[k][l].clone();
        }
    }
    g
}

/// Full Gram matrix of the Hahn family with `(α, β) = (s, 0)` on `0..=n`.
pub fn hahn_gram(n: usize, s: f64, digits: usize) -> Vec<Vec<HpFloat>> {
    let bits = hp::bits_for_digits(digits);
    let al = hp::from_f64(s, bits);
    let be = hp::from_i64(0, bits);
    let zero = hp::from_i64(0, bits);
    let mut g = vec![vec![zero; n + 1]; n + 1];
    for x in 0..=n {
        let w = hahn_weight(x, &al, &be, n);
        let q: Vec<HpFloat> = (0..=n).map(|k| hahn_q(k, x, &al, &be, n)).collect();
        for k in 0..=n {
            let wk = w.clone() * q[k].clone();
            for l in 0..=k {
                g[k][l] += wk.clone() * q[l].clone();
            }
        }
    }
    for k in 0..=n {
        for l in 0..k {
            g[l][k] = g[k][l].clone();
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn littleq_zeroth_norm() {
        // 1/(1 − 2^{−2}) = 4/3
        let fam = DiscreteFamily::LittleQ { delta: 2.0, s: 1.0 };
        let v = discrete_orthogonality_sum(fam, 0, 0, littleq_terms(2.0, 1.0, 0), 60).unwrap();
        assert!((hp::to_f64(&v) - 4.0 / 3.0).abs() < 1e-16);
    }

    #[test]
    fn littleq_short_sum_rejected() {
        let fam = DiscreteFamily::LittleQ { delta: 1.5, s: 0.0 };
        assert!(matches!(
            discrete_orthogonality_sum(fam, 1, 1, 20, 60),
            Err(OracleError::TailNotConverged { .. })
        ));
    }

    #[test]
    fn hahn_offdiagonal_vanishes() {
        let fam = DiscreteFamily::Hahn { n: 8, s: 1.0 };
        let v = discrete_orthogonality_sum(fam, 2, 5, 9, 60).unwrap();
        let d2 = hp::to_f64(&discrete_orthogonality_sum(fam, 2, 2, 9, 60).unwrap());
        let d5 = hp::to_f64(&discrete_orthogonality_sum(fam, 5, 5, 9, 60).unwrap());
        assert!(hp::to_f64(&v).abs() < 1e-25 * (d2 * d5).sqrt());
    }
}
