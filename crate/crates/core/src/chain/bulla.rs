//! Star-to-chain transforms of the discretised baths and the recursion
//! they satisfy.

use super::ChainError;
use crate::oracle::hp::{self, HpFloat};
use crate::oracle::special::{hahn_q, hahn_weight, littleq_bits, LittleQ};

/// Largest residual of `ζₙUₘₙ = ωₘUₘₙ + tₘUₘ₊₁ₙ + tₘ₋₁Uₘ₋₁ₙ` over the block.
///
/// `u[m][n]` couples chain site `m` to star mode `n`. The last row is
/// checked only when the chain ends there, i.e. when `t` has no entry
/// for it. Hoppings are used as given, sign included.
pub fn bulla_recursion_check(u: &[Vec<f64>], zeta: &[f64], omega: &[f64], t: &[f64]) -> Result<f64, ChainError> {
    let rows = u.len();
    if rows == 0 {
        return Err(ChainError::DimensionMismatch("empty transform block".into()));
    }
    let cols = zeta.len();
    if let Some(m) = u.iter().position(|r| r.len() != cols) {
        return Err(ChainError::DimensionMismatch(format!(
            "row {m} has {} columns, zeta has {cols}",
            u[m].len()
        )));
    }
    if omega.len() < rows || t.len() + 1 < rows {
        return Err(ChainError::DimensionMismatch(format!(
            "{rows} rows need {rows} frequencies and {} hoppings, got {} and {}",
            rows - 1,
            omega.len(),
            t.len()
        )));
    }
    let mut worst: f64 = 0.0;
    for m in 0..rows {
        let has_next = m < t.len();
        if has_next && m + 1 >= rows {
            continue;
        }
        for n in 0..cols {
            let mut r = zeta[n] * u[m][n] - omega[m] * u[m][n];
            if has_next {
                r -= t[m] * u[m + 1][n];
            }
            if m > 0 {
                r -= t[m - 1] * u[m - 1][n];
            }
            worst = worst.max(r.abs());
        }
    }
    Ok(worst)
}

/// Orthonormal little-q transform `Uₘₖ = pₘ(qᵏ)·√wₖ / Nₘ`, `q = 1/Δ`,
/// `wₖ = q^{k(1+s)}`, for `rows` chain sites and `cols` star modes.
///
/// Built from the explicit series in extended precision.
pub fn littleq_transform_block(delta: f64, s: f64, rows: usize, cols: usize) -> Result<Vec<Vec<f64>>, ChainError> {
    if !(delta > 1.0 && delta.is_finite()) {
        return Err(ChainError::DeltaOutOfRange(delta));
    }
    let bits = littleq_bits(30, rows, delta);
    let lq = LittleQ::new(delta, s, bits);
    let nodes: Vec<HpFloat> = (0..cols).map(|k| lq.node(k)).collect();
    let roots: Vec<HpFloat> = (0..cols).map(|k| lq.weight(k).sqrt()).collect();
    Ok((0..rows)
        .map(|m| {
            let coeffs = lq.coefficients(m);
            let norm = lq.norm_sq_closed(m).sqrt();
            (0..cols)
                .map(|k| hp::to_f64(&(LittleQ::eval(&coeffs, &nodes[k]) * roots[k].clone() / norm.clone())))
                .collect()
        })
        .collect())
}

/// Orthonormal Hahn transform `Uₘₖ = Qₘ(k)·√wₖ / ρₘ` with
/// `(α_H, β_H) = (s, 0)` on `k = 0..=big_n`.
///
/// `ρₘ²` is the orthogonality sum itself.
pub fn hahn_transform_block(s: f64, big_n: usize, rows: usize) -> Result<Vec<Vec<f64>>, ChainError> {
    if rows > big_n + 1 {
        return Err(ChainError::IndexBeyondModes { requested: rows, modes: big_n + 1 });
    }
    let bits = hp::bits_for_digits(40);
    let al = hp::from_f64(s, bits);
    let be = hp::from_i64(0, bits);
    let w: Vec<HpFloat> = (0..=big_n).map(|k| hahn_weight(k, &al, &be, big_n)).collect();
    Ok((0..rows)
        .map(|m| {
            let q: Vec<HpFloat> = (0..=big_n).map(|k| hahn_q(m, k, &al, &be, big_n)).collect();
            let mut rho_sq = hp::from_i64(0, bits);
            for k in 0..=big_n {
                rho_sq += w[k].clone() * q[k].clone() * q[k].clone();
            }
            let rho = rho_sq.sqrt();
            (0..=big_n)
                .map(|k| hp::to_f64(&(q[k].clone() * w[k].sqrt() / rho.clone())))
                .collect()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{hahn_signed, littleq_signed};
    use crate::measures::{PowerLaw, SpectralDensity};
    use rand::{Rng, SeedableRng};

    fn log_zetas(s: f64, delta: f64, cols: usize) -> Vec<f64> {
        let j = SpectralDensity::LogDiscretised { law: PowerLaw::new(0.1, s, 1.0).unwrap(), delta };
        j.star_modes().unwrap().into_iter().take(cols).map(|m| m.0).collect()
    }

    #[test]
    fn littleq_satisfies_recursion() {
        for &delta in &[1.5, 2.0, 3.0] {
            for &s in &[0.0, 1.0] {
                // one extra site so that row 12 is checked as interior
                let q = littleq_signed(0.1, s, 1.0, delta, 14).unwrap();
                let cols = 40;
                let u = littleq_transform_block(delta, s, 13, cols).unwrap();
                let res = bulla_recursion_check(&u, &log_zetas(s, delta, cols), &q.omega, &q.t).unwrap();
                assert!(res < 1e-10 * q.zeta_s, "delta {delta} s {s}: {res}");
            }
        }
    }

    #[test]
    fn littleq_rows_orthonormal() {
        let (delta, s) = (2.0, 1.0);
        let cols = 120;
        let u = littleq_transform_block(delta, s, 12, cols).unwrap();
        for a in 0..12 {
            for b in 0..12 {
                let dot: f64 = (0..cols).map(|k| u[a][k] * u[b][k]).sum();
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((dot - want).abs() < 1e-10, "{a} {b} {dot}");
            }
        }
    }

    #[test]
    fn magnitude_convention_fails_recursion() {
        let (delta, s) = (2.0, 1.0);
        let q = littleq_signed(0.1, s, 1.0, delta, 14).unwrap();
        let u = littleq_transform_block(delta, s, 13, 40).unwrap();
        let abs_t: Vec<f64> = q.t.iter().map(|t| t.abs()).collect();
        let res = bulla_recursion_check(&u, &log_zetas(s, delta, 40), &q.omega, &abs_t).unwrap();
        assert!(res > 1e-3 * q.zeta_s);
    }

    #[test]
    fn random_orthogonal_block_fails() {
        let (delta, s) = (2.0, 1.0);
        let q = littleq_signed(0.1, s, 1.0, delta, 13).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let cols = 12;
        // Gram–Schmidt on random rows
        let mut u: Vec<Vec<f64>> = Vec::new();
        for _ in 0..12 {
            let mut v: Vec<f64> = (0..cols).map(|_| rng.gen_range(-1.0..1.0)).collect();
            for r in &u {
                let d: f64 = v.iter().zip(r).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(r).for_each(|(a, b)| *a -= d * b);
            }
            let n = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            v.iter_mut().for_each(|a| *a /= n);
            u.push(v);
        }
        let res = bulla_recursion_check(&u, &log_zetas(s, delta, cols), &q.omega, &q.t).unwrap();
        assert!(res > 1e-2 * q.zeta_s);
    }

    #[test]
    fn one_by_one_block() {
        let u = vec![vec![0.8]];
        let res = bulla_recursion_check(&u, &[0.5], &[0.2], &[]).unwrap();
        assert!((res - 0.8 * 0.3).abs() < 1e-16);
        // with a hopping the single row cannot be checked
        assert_eq!(bulla_recursion_check(&u, &[0.5], &[0.2], &[0.1]).unwrap(), 0.0);
    }

    #[test]
    fn dimension_mismatch() {
        let u = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        assert!(bulla_recursion_check(&u, &[0.1], &[0.0, 0.0], &[0.1]).is_err());
        assert!(bulla_recursion_check(&u, &[0.1, 0.2], &[0.0], &[0.1]).is_err());
        assert!(bulla_recursion_check(&u, &[0.1, 0.2], &[0.0, 0.0], &[]).is_err());
        assert!(bulla_recursion_check(&[], &[], &[], &[]).is_err());
    }

    #[test]
    fn hahn_satisfies_recursion_and_orthogonality() {
        for &s in &[0.0, 1.0, 2.0] {
            let big_n = 12;
            let h = hahn_signed(s, 1.0, big_n, big_n + 1).unwrap();
            let u = hahn_transform_block(s, big_n, big_n + 1).unwrap();
            let zeta: Vec<f64> = (0..=big_n).map(|k| k as f64 / (big_n as f64 + 1.0)).collect();
            let res = bulla_recursion_check(&u, &zeta, &h.omega, &h.t).unwrap();
            assert!(res < 1e-12, "s {s}: {res}");
            for a in 0..=big_n {
                for b in 0..=big_n {
                    let dot: f64 = (0..=big_n).map(|k| u[a][k] * u[b][k]).sum();
                    let want = if a == b { 1.0 } else { 0.0 };
                    assert!((dot - want).abs() < 1e-12);
                }
            }
        }
    }
}
