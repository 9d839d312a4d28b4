//! RKPW Lanczos: orthogonal reduction of the node/weight diagonal to
//! tridiagonal (Jacobi) form, adding one node at a time with Givens-type
//! updates (Gragg–Harrod, after Rutishauser, Kahan and Pal–Walker).

use super::discretise::discretise;
use super::stieltjes::{refine, DiscretisationOptions};
use super::{Engine, OrthoError, QuadratureRule, RecurrenceCoefficients};
use crate::measures::Measure;

fn rkpw(rule: &QuadratureRule, n: usize) -> Result<(Vec<f64>, Vec<f64>), OrthoError> {
    if n == 0 {
        return Err(OrthoError::InvalidArgument("n must be at least 1".into()));
    }
    let m = rule.len();
    if m < n {
        return Err(OrthoError::MeasureDegenerate {
            index: m,
            detail: format!("a {m}-point measure supports only {m} orthogonal polynomials"),
        });
    }
    // heaviest nodes first keeps the updates well conditioned
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| {
        rule.weights[j].total_cmp(&rule.weights[i]).then(rule.nodes[i].total_cmp(&rule.nodes[j]))
    });
    let x: Vec<f64> = order.iter().map(|&i| rule.nodes[i]).collect();
    let w: Vec<f64> = order.iter().map(|&i| rule.weights[i]).collect();

    // only the leading n rows are needed; later rows never feed back upwards
    let rows = n;
    let mut p0: Vec<f64> = x[..rows].to_vec();
    let mut p1 = vec![0.0; rows];
    p1[0] = w[0];
    for k in 1..m {
        let mut pn = w[k];
        let mut gam = 1.0;
        let mut sig = 0.0;
        let mut t = 0.0;
        let xlam = x[k];
        for j in 0..(k + 1).min(rows) {
            let rho = p1[j] + pn;
            let tmp = gam * rho;
            let tsig = sig;
            if rho <= 0.0 {
                gam = 1.0;
                sig = 0.0;
            } else {
                gam = p1[j] / rho;
                sig = pn / rho;
            }
            let tk = sig * (p0[j] - xlam) - gam * t;
            p0[j] -= tk - t;
            t = tk;
            pn = if sig <= 0.0 { tsig * p1[j] } else { t * t / sig };
            p1[j] = tmp;
        }
    }
    for (k, &b) in p1.iter().enumerate() {
        if !(b > 0.0 && b.is_finite()) {
            return Err(OrthoError::MeasureDegenerate { index: k, detail: format!("beta = {b}") });
        }
    }
    Ok((p0, p1))
}

/// Recurrence coefficients of the discrete measure `rule`, `n ≤ rule.len()`.
pub fn lanczos_rkpw(rule: &QuadratureRule, n: usize) -> Result<RecurrenceCoefficients, OrthoError> {
    let (alpha, beta) = rkpw(rule, n)?;
    let mut rc = RecurrenceCoefficients::new(alpha, beta, Engine::LanczosRkpw);
    rc.quad_points = Some(rule.len());
    Ok(rc)
}

/// RKPW on a refined discretisation of `m` (exact rule for discrete `m`).
pub fn lanczos_measure(m: &Measure, n: usize, opts: &DiscretisationOptions) -> Result<RecurrenceCoefficients, OrthoError> {
    if m.is_discrete() {
        return lanczos_rkpw(&discretise(m, 0, 0), n);
    }
    refine(m, n, opts, Engine::LanczosRkpw, rkpw)
}

#[cfg(test)]
mod tests {
    use super::super::stieltjes::stieltjes_rule;
    use super::*;
    use crate::orthopoly::affine_transform;
    use crate::orthopoly::Interval;

    #[test]
    fn single_node() {
        let rule = QuadratureRule::from_pairs(vec![(0.3, 2.5)]);
        let rc = lanczos_rkpw(&rule, 1).unwrap();
        assert_eq!(rc.alpha, vec![0.3]);
        assert_eq!(rc.beta, vec![2.5]);
    }

    #[test]
    fn agrees_with_stieltjes_on_a_random_rule() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let pairs: Vec<(f64, f64)> = (0..400).map(|_| (rng.gen::<f64>(), rng.gen::<f64>() + 0.01)).collect();
        let rule = QuadratureRule::from_pairs(pairs);
        let a = lanczos_rkpw(&rule, 30).unwrap();
        let (alpha, beta) = stieltjes_rule(&rule, 30).unwrap();
        for k in 0..30 {
            assert!((a.alpha[k] - alpha[k]).abs() < 1e-12);
            assert!((a.beta[k] / beta[k] - 1.0).abs() < 1e-11);
        }
    }

    #[test]
    fn too_few_nodes() {
        let rule = QuadratureRule::from_pairs(vec![(0.1, 1.0), (0.2, 1.0)]);
        assert!(matches!(lanczos_rkpw(&rule, 3), Err(OrthoError::MeasureDegenerate { .. })));
    }

    #[test]
    fn chebyshev_weight() {
        // 1/√(1−x²) on [−1,1] mapped to [0,1]; coefficients mapped back
        let m = Measure::custom(|x: f64| 1.0 / (x * (1.0 - x)).sqrt(), 0.0, 1.0).unwrap();
        let rc = lanczos_measure(&m, 12, &DiscretisationOptions::default()).unwrap();
        let back = affine_transform(&rc, Interval::new(0.0, 1.0), Interval::new(-1.0, 1.0)).unwrap();
        assert!((back.beta[1] - 0.5).abs() < 1e-13);
        for k in 2..12 {
            assert!((back.beta[k] - 0.25).abs() < 1e-13);
        }
        for k in 0..12 {
            assert!(back.alpha[k].abs() < 1e-13);
        }
    }
}
