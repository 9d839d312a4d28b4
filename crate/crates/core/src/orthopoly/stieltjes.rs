//! Discretised Stieltjes procedure with quadrature refinement.

use super::discretise::discretise;
use super::{roundoff, Engine, OrthoError, QuadratureRule, RecurrenceCoefficients};
use crate::measures::Measure;
use crate::numfmt::ksum;

/// Refinement controls for the discretised engines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscretisationOptions {
    /// Required maximal relative change between successive refinements.
    pub tol: f64,
    /// Initial resolution; raised to at least `max(4n, 64)`.
    pub start_points: usize,
    /// Refinement stops with `NoConvergence` once a rule would exceed this.
    pub max_points: usize,
}

impl Default for DiscretisationOptions {
    fn default() -> Self {
        Self { tol: 1e-12, start_points: 0, max_points: max_points_from_env() }
    }
}

/// `CHAINMAP_QUAD_MAX`, or `2^20` when unset or unparsable.
pub fn max_points_from_env() -> usize {
    std::env::var("CHAINMAP_QUAD_MAX")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&v| v >= 2)
        .unwrap_or(1 << 20)
}

/// Stieltjes on a fixed rule. Returns `(α, β)` with `β₀` the rule mass.
pub fn stieltjes_rule(rule: &QuadratureRule, n: usize) -> Result<(Vec<f64>, Vec<f64>), OrthoError> {
    if n == 0 {
        return Err(OrthoError::InvalidArgument("n must be at least 1".into()));
    }
    if rule.len() < n {
        return Err(OrthoError::MeasureDegenerate {
            index: rule.len(),
            detail: format!("a {}-point measure supports only {} orthogonal polynomials", rule.len(), rule.len()),
        });
    }
    let x = &rule.nodes;
    let mass = rule.mass();
    // orthonormal values of π_k on the nodes, scaled by √w
    let mut u: Vec<f64> = rule.weights.iter().map(|w| (w / mass).sqrt()).collect();
    let mut u_prev = vec![0.0; u.len()];
    let mut v = vec![0.0; u.len()];
    let mut alpha = Vec::with_capacity(n);
    let mut beta = vec![mass];
    for k in 0..n {
        let a = ksum(x.iter().zip(&u).map(|(x, u)| x * u * u));
        alpha.push(a);
        if k + 1 == n {
            break;
        }
        let sb = if k == 0 { 0.0 } else { beta[k].sqrt() };
        for i in 0..u.len() {
            v[i] = (x[i] - a) * u[i] - sb * u_prev[i];
        }
        let b = ksum(v.iter().map(|v| v * v));
        if !(b > 0.0 && b.is_finite()) {
            return Err(OrthoError::MeasureDegenerate { index: k + 1, detail: format!("beta = {b}") });
        }
        beta.push(b);
        let inv = 1.0 / b.sqrt();
        std::mem::swap(&mut u_prev, &mut u);
        for i in 0..v.len() {
            u[i] = v[i] * inv;
        }
    }
    Ok((alpha, beta))
}

/// `stieltjes_with` starting at `quad_points` resolution.
pub fn stieltjes_discretised(m: &Measure, n: usize, quad_points: usize) -> Result<RecurrenceCoefficients, OrthoError> {
    let opts = DiscretisationOptions { start_points: quad_points, ..Default::default() };
    stieltjes_with(m, n, &opts)
}

pub fn stieltjes_with(m: &Measure, n: usize, opts: &DiscretisationOptions) -> Result<RecurrenceCoefficients, OrthoError> {
    refine(m, n, opts, Engine::StieltjesDiscretised, stieltjes_rule)
}

/// Runs `engine` on successively doubled discretisations of `m` until two
/// consecutive coefficient sets agree to `opts.tol`.
pub(crate) fn refine<F>(
    m: &Measure,
    n: usize,
    opts: &DiscretisationOptions,
    engine: Engine,
    run: F,
) -> Result<RecurrenceCoefficients, OrthoError>
where
    F: Fn(&QuadratureRule, usize) -> Result<(Vec<f64>, Vec<f64>), OrthoError>,
{
    if n == 0 {
        return Err(OrthoError::InvalidArgument("n must be at least 1".into()));
    }
    if let Some(count) = m.point_count() {
        let rule = discretise(m, 0, 0);
        if n > count {
            return Err(OrthoError::MeasureDegenerate {
                index: count,
                detail: format!("a {count}-point measure supports only {count} orthogonal polynomials, {n} requested"),
            });
        }
        let (alpha, beta) = run(&rule, n)?;
        let mut rc = RecurrenceCoefficients::new(alpha, beta, engine);
        rc.quad_points = Some(count);
        return Ok(rc);
    }
    let degree = 2 * n + 1;
    let mut res = opts.start_points.max(4 * n).max(64);
    let mut rule = discretise(m, res, degree);
    let mut prev = run(&rule, n)?;
    let mut last_change = f64::INFINITY;
    loop {
        res *= 2;
        let next_rule = discretise(m, res, degree);
        if next_rule.len() > opts.max_points {
            return Err(OrthoError::NoConvergence { points: rule.len(), change: last_change });
        }
        rule = next_rule;
        let cur = run(&rule, n)?;
        let changes = relative_changes(&prev, &cur);
        let change = changes.iter().copied().fold(0.0, f64::max);
        if change < opts.tol {
            let est_error = changes.iter().enumerate().map(|(k, &c)| c.max(roundoff(k))).collect();
            return Ok(RecurrenceCoefficients {
                alpha: cur.0,
                beta: cur.1,
                engine,
                est_error,
                quad_points: Some(rule.len()),
            });
        }
        last_change = change;
        prev = cur;
    }
}

/// Per-index relative change, `α_k` measured against the Jacobi-row scale
/// `max(|α_k|, √β_k, √β_{k+1})`.
pub(crate) fn relative_changes(a: &(Vec<f64>, Vec<f64>), b: &(Vec<f64>, Vec<f64>)) -> Vec<f64> {
    let n = a.0.len();
    (0..n)
        .map(|k| {
            let mut scale = b.0[k].abs();
            if k > 0 {
                scale = scale.max(b.1[k].sqrt());
            }
            if k + 1 < n {
                scale = scale.max(b.1[k + 1].sqrt());
            }
            let da = if scale > 0.0 { (a.0[k] - b.0[k]).abs() / scale } else { (a.0[k] - b.0[k]).abs() };
            let db = (a.1[k] - b.1[k]).abs() / b.1[k].abs();
            da.max(db)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_weight_first_pair() {
        let m = Measure::power_law(1.0, 0.0, 0.0, 1.0).unwrap();
        let rc = stieltjes_discretised(&m, 1, 2).unwrap();
        assert!((rc.alpha[0] - 0.5).abs() < 1e-15);
        assert!((rc.beta[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn linear_weight_matches_jacobi_closed_form() {
        // w = x on [0,1]: α_n = (1 + 1/((2n+1)(2n+3)))/2
        let m = Measure::power_law(1.0, 1.0, 0.0, 1.0).unwrap();
        let rc = stieltjes_discretised(&m, 4, 8).unwrap();
        for n in 0..4 {
            let nf = n as f64;
            let a = 0.5 * (1.0 + 1.0 / ((2.0 * nf + 1.0) * (2.0 * nf + 3.0)));
            assert!((rc.alpha[n] - a).abs() < 1e-12);
        }
        assert!((rc.beta[1] - 1.0 / 18.0).abs() < 1e-12);
    }

    #[test]
    fn point_masses_exact_then_degenerate() {
        let pts = vec![(0.1, 1.0), (0.4, 2.0), (0.9, 0.5)];
        let m = Measure::discrete(pts, 1.0).unwrap();
        let rc = stieltjes_discretised(&m, 3, 0).unwrap();
        assert!((rc.beta[0] - 3.5).abs() < 1e-15);
        assert!((rc.alpha[0] - (0.1 + 0.8 + 0.45) / 3.5).abs() < 1e-15);
        assert!(matches!(stieltjes_discretised(&m, 4, 0), Err(OrthoError::MeasureDegenerate { .. })));
    }

    #[test]
    fn quadrature_cap_reports_no_convergence() {
        let m = Measure::power_law(1.0, 0.3, 0.0, 1.0).unwrap();
        let opts = DiscretisationOptions { tol: 1e-30, start_points: 0, max_points: 4000 };
        assert!(matches!(stieltjes_with(&m, 5, &opts), Err(OrthoError::NoConvergence { .. })));
    }
}
