//! Discretisation of continuous measures into quadrature rules.
//!
//! Bounded components use `x = lo + (hi−lo)·sin²(θ/2)`, which absorbs
//! square-root endpoint behaviour, with composite Gauss–Legendre panels in
//! `θ`. Panels grade geometrically towards endpoints flagged as singular.
//! Half-line components use `x = lo + y²` with panels in `y`, extended until
//! the tail of `w(x)(1+x)^d` is below `1e−30` of the accumulated integral.

use std::f64::consts::PI;

use super::legendre::gauss_legendre;
use super::QuadratureRule;
use crate::measures::{Component, Measure, MeasureKind, Weight};

const GRADING_RATIO: f64 = 0.15;
const GRADING_LEVELS: usize = 20;
const BASE_POINTS: usize = 8;
const MAX_THETA_PANEL: f64 = PI / 8.0;
const TAIL_RATIO_LN: f64 = 69.077_552_789_821_37; // ln(1e30)

/// Discretises `m` for polynomial integrands up to degree `degree`.
///
/// `resolution` is roughly the number of nodes per component; doubling it
/// refines every panel.
pub fn discretise(m: &Measure, resolution: usize, degree: usize) -> QuadratureRule {
    match m.kind() {
        MeasureKind::Discrete { nodes, weights } => QuadratureRule {
            nodes: nodes.clone(),
            weights: weights.clone(),
        },
        MeasureKind::Continuous(comps) => {
            let mut pairs = Vec::new();
            for c in comps {
                pairs.extend(discretise_component(c, resolution, degree));
            }
            QuadratureRule::from_pairs(pairs)
        }
    }
}

/// Node/weight pairs for one component; zero weights are dropped.
pub fn discretise_component(c: &Component, resolution: usize, degree: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    if c.hi.is_finite() {
        bounded(c, resolution, &mut out);
    } else {
        half_line(c, resolution, degree, &mut out);
    }
    out.retain(|p| p.1 > 0.0 && p.1.is_finite());
    out
}

fn push_panel<F: FnMut(f64, f64)>(lo: f64, hi: f64, points: usize, mut f: F) {
    let gl = gauss_legendre(points);
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    for (z, w) in gl.nodes.iter().zip(&gl.weights) {
        f(mid + half * z, w * half);
    }
}

fn bounded(c: &Component, resolution: usize, out: &mut Vec<(f64, f64)>) {
    let (lo, hi) = (c.lo, c.hi);
    let span = hi - lo;
    let theta_of = |x: f64| 2.0 * ((x - lo) / span).clamp(0.0, 1.0).sqrt().asin();
    let mut cuts = vec![0.0];
    cuts.extend(c.breakpoints.iter().filter(|&&x| x > lo && x < hi).map(|&x| theta_of(x)));
    cuts.push(PI);
    cuts.dedup();

    let mut panels: Vec<(f64, f64, usize)> = Vec::new();
    let per = |width: f64| BASE_POINTS + (resolution as f64 * width / PI).ceil() as usize;
    let graded = BASE_POINTS + resolution.div_ceil(64);
    let last = cuts.len() - 2;
    for (i, win) in cuts.windows(2).enumerate() {
        let (a, b) = (win[0], win[1]);
        let pieces = ((b - a) / MAX_THETA_PANEL).ceil().max(1.0) as usize;
        let h = (b - a) / pieces as f64;
        for p in 0..pieces {
            let (pa, pb) = (a + p as f64 * h, if p + 1 == pieces { b } else { a + (p + 1) as f64 * h });
            let grade_lo = c.singular_lo && i == 0 && p == 0;
            let grade_hi = c.singular_hi && i == last && p + 1 == pieces;
            if grade_lo || grade_hi {
                let width = pb - pa;
                let mut edges: Vec<f64> = (0..=GRADING_LEVELS).map(|k| width * GRADING_RATIO.powi(k as i32)).collect();
                edges.push(0.0);
                for e in edges.windows(2) {
                    let (u, v) = (e[1], e[0]);
                    if grade_lo {
                        panels.push((pa + u, pa + v, graded));
                    } else {
                        panels.push((pb - v, pb - u, graded));
                    }
                }
            } else {
                panels.push((pa, pb, per(pb - pa)));
            }
        }
    }
    for (a, b, pts) in panels {
        push_panel(a, b, pts, |theta, w| {
            let (s2, c2) = ((0.5 * theta).sin().powi(2), (0.5 * theta).cos().powi(2));
            let x = if theta <= 0.5 * PI { lo + span * s2 } else { hi - span * c2 };
            let jac = 0.5 * span * theta.sin();
            out.push((x, w * jac * c.weight.eval(x)));
        });
    }
}

fn half_line(c: &Component, resolution: usize, degree: usize, out: &mut Vec<(f64, f64)>) {
    let lo = c.lo;
    let rate = match c.weight {
        Weight::PowerLawExp { rate, .. } => rate,
        _ => 1.0,
    };
    let h = 0.5 / rate.sqrt();
    let y_guess = ((degree as f64 + 40.0) / rate).sqrt();
    let pts = BASE_POINTS + (resolution as f64 * h / y_guess).ceil() as usize;
    let graded = BASE_POINTS + resolution.div_ceil(64);
    let d = degree as f64;

    let emit = |a: f64, b: f64, n: usize, out: &mut Vec<(f64, f64)>| -> f64 {
        // returns ln of the panel's envelope integral
        let mut terms: Vec<f64> = Vec::with_capacity(n);
        push_panel(a, b, n, |y, w| {
            let x = lo + y * y;
            let jac = 2.0 * y;
            out.push((x, w * jac * c.weight.eval(x)));
            let ln_env = c.weight.ln_eval(x) + d * (1.0 + x).ln() + jac.ln() + w.ln();
            terms.push(ln_env);
        });
        log_sum_exp(&terms)
    };

    let mut ln_total = f64::NEG_INFINITY;
    if c.singular_lo {
        let mut edges: Vec<f64> = (0..=GRADING_LEVELS).map(|k| h * GRADING_RATIO.powi(k as i32)).collect();
        edges.push(0.0);
        for e in edges.windows(2) {
            let v = emit(e[1], e[0], graded, out);
            ln_total = log_sum_exp(&[ln_total, v]);
        }
    } else {
        let v = emit(0.0, h, pts, out);
        ln_total = log_sum_exp(&[ln_total, v]);
    }
    let mut prev = f64::INFINITY;
    let mut k = 1;
    loop {
        let (a, b) = (k as f64 * h, (k + 1) as f64 * h);
        let v = emit(a, b, pts, out);
        ln_total = log_sum_exp(&[ln_total, v]);
        let negligible = v < ln_total - TAIL_RATIO_LN || v == f64::NEG_INFINITY;
        if (negligible && v < prev) || lo + b * b > 1e8 {
            break;
        }
        prev = v;
        k += 1;
    }
}

fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().filter(|x| !x.is_nan()).fold(f64::NEG_INFINITY, f64::max);
    if m.is_infinite() {
        return m;
    }
    m + xs.iter().filter(|x| !x.is_nan()).map(|x| (x - m).exp()).sum::<f64>().ln()
}
