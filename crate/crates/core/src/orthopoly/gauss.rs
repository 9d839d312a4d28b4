//! Gauss quadrature from recurrence coefficients (Golub–Welsch).

use super::{OrthoError, QuadratureRule, RecurrenceCoefficients};

/// Eigenvalues (ascending) and first eigenvector components of the
/// symmetric tridiagonal matrix with diagonal `d` and off-diagonal `e`
/// (`e.len() == d.len() − 1`). Implicit QL with Wilkinson-type shifts.
pub fn tridiagonal_eigen(d: &[f64], e: &[f64]) -> Result<(Vec<f64>, Vec<f64>), OrthoError> {
    let n = d.len();
    assert_eq!(e.len() + 1, n.max(1), "off-diagonal length");
    let mut d = d.to_vec();
    let mut e: Vec<f64> = e.iter().copied().chain(std::iter::once(0.0)).collect();
    let mut z = vec![0.0; n];
    if n == 0 {
        return Ok((d, z));
    }
    z[0] = 1.0;
    let eps = f64::EPSILON;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                if e[m].abs() <= eps * (d[m].abs() + d[m + 1].abs()) {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            if iter == 60 {
                return Err(OrthoError::EigenFailure(l));
            }
            iter += 1;
            let mut p = d[l];
            let mut g = (d[l + 1] - p) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - p + e[l] / (g + r.copysign(g));
            let (mut s, mut c) = (1.0, 1.0);
            p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| d[i].total_cmp(&d[j]));
    Ok((idx.iter().map(|&i| d[i]).collect(), idx.iter().map(|&i| z[i]).collect()))
}

/// `n`-point Gauss rule of the measure described by `rc`.
pub fn gauss_rule(rc: &RecurrenceCoefficients, n: usize) -> Result<QuadratureRule, OrthoError> {
    if n == 0 || n > rc.n_terms() {
        return Err(OrthoError::InvalidArgument(format!(
            "need 1 <= n <= {} for this coefficient set, got {n}",
            rc.n_terms()
        )));
    }
    rc.truncated(n).validate()?;
    let off: Vec<f64> = rc.beta[1..n].iter().map(|b| b.sqrt()).collect();
    let (nodes, z) = tridiagonal_eigen(&rc.alpha[..n], &off)?;
    let weights = z.iter().map(|v| rc.beta[0] * v * v).collect();
    Ok(QuadratureRule { nodes, weights })
}
