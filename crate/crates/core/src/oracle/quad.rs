//! Extended-precision double-exponential quadrature.

use super::hp::{self, HpFloat};
use super::OracleError;
use crate::measures::{Measure, MeasureKind, Weight};

/// Which endpoints of the interval the integrand may blow up at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Endpoints {
    #[default]
    Regular,
    Singular,
}

const MAX_LEVEL: usize = 14;

fn half_pi(bits: usize) -> HpFloat {
    hp::pi(bits) / hp::from_i64(2, bits)
}

/// `∫_lo^hi f(x) dx` for finite `lo < hi` by tanh-sinh.
///
/// `f` receives `(x, d)` with `d` the distance to the nearer endpoint,
/// carried separately so that endpoint behaviour is resolved without
/// cancellation. Growth towards an endpoint larger than `1e6` times the
/// interior maximum is `SingularityUndeclared` unless `endpoints` is
/// `Singular`.
pub fn tanh_sinh<F>(f: F, lo: f64, hi: f64, digits: usize, endpoints: Endpoints) -> Result<HpFloat, OracleError>
where
    F: Fn(&HpFloat, &HpFloat) -> HpFloat,
{
    let work_digits = if endpoints == Endpoints::Singular { 2 * digits + 20 } else { digits + 20 };
    let bits = hp::bits_for_digits(work_digits);
    let a = hp::from_f64(lo, bits);
    let b = hp::from_f64(hi, bits);
    let span = b.clone() - a.clone();
    let two = hp::from_i64(2, bits);
    let one = hp::from_i64(1, bits);
    let hpi = half_pi(bits);
    // beyond t_max the endpoint distance 2e^{−2u}, u = (π/2)sinh t, is below
    // 10^{−2·work_digits}, leaving room for integrands growing like d^{−1/2}
    let t_max = (2.0 * work_digits as f64 * std::f64::consts::LN_10 / std::f64::consts::PI).asinh();

    let eval = |t: f64| -> (HpFloat, f64, f64) {
        let th = hp::from_f64(t, bits);
        let u = hpi.clone() * th.sinh();
        let cu = u.cosh();
        let w = hpi.clone() * th.cosh() / (cu.clone() * cu);
        // distance from the nearer endpoint: span / (1 + e^{2|u|})
        let e2 = (two.clone() * u.clone()).exp();
        let (d, xa) = if t >= 0.0 {
            let d = span.clone() / (one.clone() + e2);
            (d.clone(), b.clone() - d)
        } else {
            let d = span.clone() / (one.clone() + one.clone() / e2);
            (d.clone(), a.clone() + d)
        };
        let fx = f(&xa, &d);
        let contrib = w * span.clone() / two.clone() * fx.clone();
        let mag = hp::to_f64(&fx).abs();
        (contrib, mag, t)
    };

    let mut h = 1.0;
    let (mut sum, centre, _) = eval(0.0);
    let mut interior_max: f64 = centre;
    let mut edge_max: f64 = 0.0;
    let mut k = 1;
    while k as f64 * h <= t_max {
        for t in [k as f64 * h, -(k as f64) * h] {
            let (c, mag, _) = eval(t);
            sum += c;
            if t.abs() <= 1.0 {
                interior_max = interior_max.max(mag);
            } else if t.abs() > t_max - 1.0 {
                edge_max = edge_max.max(mag);
            }
        }
        k += 1;
    }
    let mut prev = sum.clone() * hp::from_f64(h, bits);
    for level in 1..=MAX_LEVEL {
        h *= 0.5;
        let mut k = 1;
        while k as f64 * h <= t_max {
            for t in [k as f64 * h, -(k as f64) * h] {
                let (c, mag, _) = eval(t);
                sum += c;
                if t.abs() > t_max - 1.0 {
                    edge_max = edge_max.max(mag);
                }
            }
            k += 2;
        }
        if endpoints == Endpoints::Regular && edge_max > 1e6 * interior_max.max(1e-300) {
            return Err(OracleError::SingularityUndeclared);
        }
        let cur = sum.clone() * hp::from_f64(h, bits);
        let diff = hp::to_f64(&(cur.clone() - prev.clone())).abs();
        let scale = hp::to_f64(&cur).abs().max(1e-300);
        if level >= 3 && diff <= scale * 10f64.powi(-(digits as i32) - 2) {
            return Ok(cur);
        }
        prev = cur;
    }
    Ok(prev)
}

/// `∫_lo^∞ f(x) dx` by exp-sinh; `f` must decay at infinity.
pub fn exp_sinh<F>(f: F, lo: f64, digits: usize) -> Result<HpFloat, OracleError>
where
    F: Fn(&HpFloat) -> HpFloat,
{
    let work_digits = digits + 20;
    let bits = hp::bits_for_digits(work_digits);
    let a = hp::from_f64(lo, bits);
    let hpi = half_pi(bits);
    let tiny = 10f64.powi(-(work_digits as i32));
    let eval = |t: f64| -> HpFloat {
        let th = hp::from_f64(t, bits);
        let e = (hpi.clone() * th.sinh()).exp();
        let w = hpi.clone() * th.cosh() * e.clone();
        w * f(&(a.clone() + e))
    };
    let mut h = 0.5;
    let collect = |h: f64, start: usize, step: usize| -> HpFloat {
        let mut acc = hp::from_i64(0, bits);
        for dir in [1.0, -1.0] {
            let mut k = start;
            let mut small_run = 0;
            loop {
                let t = dir * k as f64 * h;
                if t == 0.0 && dir < 0.0 {
                    k += step;
                    continue;
                }
                let c = eval(t);
                let m = hp::to_f64(&c).abs();
                acc += c;
                let running = hp::to_f64(&acc).abs().max(1e-300);
                if m < tiny * running {
                    small_run += 1;
                } else {
                    small_run = 0;
                }
                if small_run >= 3 || t.abs() > 8.0 {
                    break;
                }
                k += step;
            }
        }
        acc
    };
    let mut sum = collect(h, 0, 1);
    let mut prev = sum.clone() * hp::from_f64(h, bits);
    for level in 1..=MAX_LEVEL {
        h *= 0.5;
        sum += collect(h, 1, 2);
        let cur = sum.clone() * hp::from_f64(h, bits);
        let diff = hp::to_f64(&(cur.clone() - prev.clone())).abs();
        let scale = hp::to_f64(&cur).abs().max(1e-300);
        if level >= 3 && diff <= scale * 10f64.powi(-(digits as i32) - 2) {
            return Ok(cur);
        }
        prev = cur;
    }
    Ok(prev)
}

/// Extended-precision weight of a closed-form component.
fn weight_hp(w: &Weight, x: &HpFloat, bits: usize) -> Result<HpFloat, OracleError> {
    let pow = |s: f64| {
        if s == 0.0 {
            hp::from_i64(1, bits)
        } else if s.fract() == 0.0 {
            x.powi((s as i64).into())
        } else {
            (hp::from_f64(s, bits) * x.ln()).exp()
        }
    };
    match *w {
        Weight::PowerLaw { scale, s } => Ok(hp::from_f64(scale, bits) * pow(s)),
        Weight::PowerLawExp { scale, s, rate } => {
            Ok(hp::from_f64(scale, bits) * pow(s) * (-(hp::from_f64(rate, bits) * x.clone())).exp())
        }
        _ => Err(OracleError::Unsupported("extended-precision weight needs a closed-form component".into())),
    }
}

/// `∫ f dμ` to `digits` digits. Continuous components must have closed-form
/// weights; discrete measures are summed exactly. Non-analytic weight
/// endpoints count as declared singularities.
pub fn highprec_quadrature<F>(m: &Measure, f: F, digits: usize, endpoints: Endpoints) -> Result<HpFloat, OracleError>
where
    F: Fn(&HpFloat) -> HpFloat,
{
    let bits = hp::bits_for_digits(digits + 20);
    match m.kind() {
        MeasureKind::Discrete { nodes, weights } => {
            let mut acc = hp::from_i64(0, bits);
            for (x, w) in nodes.iter().zip(weights) {
                acc += hp::from_f64(*w, bits) * f(&hp::from_f64(*x, bits));
            }
            Ok(acc)
        }
        MeasureKind::Continuous(comps) => {
            let mut acc = hp::from_i64(0, bits);
            for c in comps {
                let v = if c.hi.is_finite() {
                    let ends = if c.singular_lo || c.singular_hi { Endpoints::Singular } else { endpoints };
                    let wb = hp::bits_for_digits(if ends == Endpoints::Singular { 2 * digits + 20 } else { digits + 20 });
                    // evaluate the weight at x; any failure is reported after integration
                    let err = std::cell::Cell::new(None);
                    let r = tanh_sinh(
                        |x, _| match weight_hp(&c.weight, x, wb) {
                            Ok(w) => w * f(x),
                            Err(e) => {
                                err.set(Some(e));
                                hp::from_i64(0, wb)
                            }
                        },
                        c.lo,
                        c.hi,
                        digits,
                        ends,
                    )?;
                    if let Some(e) = err.take() {
                        return Err(e);
                    }
                    r
                } else {
                    weight_hp(&c.weight, &hp::from_i64(1, bits), bits)?;
                    let wb = hp::bits_for_digits(digits + 20);
                    exp_sinh(|x| weight_hp(&c.weight, x, wb).expect("checked") * f(x), c.lo, digits)?
                };
                acc += v;
            }
            Ok(acc)
        }
    }
}
