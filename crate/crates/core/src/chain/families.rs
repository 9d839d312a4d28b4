//! Closed-form chains of the four classical families.

use super::{ChainError, ChainParameters, Family, Gauge, Source};
use crate::measures::PowerLaw;
use crate::numfmt::ksum;
use crate::orthopoly::{Engine, RecurrenceCoefficients};

fn closed_chain(rc: RecurrenceCoefficients, g: f64, family: Family, gauge: Gauge) -> ChainParameters {
    ChainParameters {
        c0: rc.beta[0].sqrt(),
        omega: rc.alpha.iter().map(|a| g * a).collect(),
        t: rc.beta[1..].iter().map(|b| g * b.sqrt()).collect(),
        g,
        source: Source::ClosedForm(family),
        asymptote: None,
        gauge,
        est_error: rc.est_error,
        quad_points: None,
        notes: Vec::new(),
    }
}

fn check_len(n: usize) -> Result<(), ChainError> {
    if n == 0 {
        return Err(ChainError::InvalidArgument("chain length must be at least 1".into()));
    }
    Ok(())
}

/// Monic recurrence of `w(x) = 2αω_c² x^s` on `[0, 1]`, `n` terms.
pub fn jacobi_recurrence(alpha: f64, s: f64, omega_c: f64, n: usize) -> RecurrenceCoefficients {
    let a = (0..n)
        .map(|k| {
            let k = k as f64;
            // s = 0, k = 0 is 0/0 with limit 0
            let dev = if s == 0.0 { 0.0 } else { s * s / ((s + 2.0 * k) * (2.0 + s + 2.0 * k)) };
            0.5 * (1.0 + dev)
        })
        .collect();
    let mut b = vec![2.0 * alpha * omega_c * omega_c / (s + 1.0)];
    for k in 0..n.saturating_sub(1) {
        let k = k as f64;
        let r = (1.0 + k) * (1.0 + s + k) / ((s + 2.0 + 2.0 * k) * (3.0 + s + 2.0 * k));
        b.push(r * r * (3.0 + s + 2.0 * k) / (1.0 + s + 2.0 * k));
    }
    RecurrenceCoefficients::new(a, b, Engine::ClosedForm)
}

/// Chain of the hard-cutoff power law, `n` sites.
pub fn jacobi_chain(alpha: f64, s: f64, omega_c: f64, n: usize) -> Result<ChainParameters, ChainError> {
    PowerLaw::new(alpha, s, omega_c).map_err(|e| ChainError::InvalidArgument(e.to_string()))?;
    check_len(n)?;
    let rc = jacobi_recurrence(alpha, s, omega_c, n);
    Ok(closed_chain(rc, omega_c, Family::Jacobi, Gauge::Identity).with_asymptote(omega_c / 2.0, omega_c / 4.0))
}

/// Monic recurrence of `w(x) = 2αω_c² x^s e^{−x}` on `[0, ∞)`, `n` terms.
pub fn laguerre_recurrence(alpha: f64, s: f64, omega_c: f64, n: usize) -> RecurrenceCoefficients {
    let a = (0..n).map(|k| 2.0 * k as f64 + 1.0 + s).collect();
    let mut b = vec![2.0 * alpha * omega_c * omega_c * libm::tgamma(s + 1.0)];
    b.extend((1..n).map(|k| k as f64 * (k as f64 + s)));
    RecurrenceCoefficients::new(a, b, Engine::ClosedForm)
}

/// Chain of the exponential-cutoff power law, `n` sites.
pub fn laguerre_chain(alpha: f64, s: f64, omega_c: f64, n: usize) -> Result<ChainParameters, ChainError> {
    PowerLaw::new(alpha, s, omega_c).map_err(|e| ChainError::InvalidArgument(e.to_string()))?;
    check_len(n)?;
    let rc = laguerre_recurrence(alpha, s, omega_c, n);
    Ok(closed_chain(rc, omega_c, Family::Laguerre, Gauge::Identity))
}

/// Little-q Jacobi quantities in the sign convention of the polynomial
/// basis `p_n(q^k)` with `p_n(0) = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct LittleQSigned {
    pub zeta_s: f64,
    pub gamma_s_sq: f64,
    pub a: Vec<f64>,
    pub c: Vec<f64>,
    /// `N_{n+1}/N_n`
    pub norm_ratio: Vec<f64>,
    pub omega: Vec<f64>,
    /// `tₙ = −ζ_s (N_{n+1}/N_n) Aₙ`
    pub t: Vec<f64>,
}

/// Sites supported by the log-discretised bath before the mode weights
/// fall below `1e−300`.
pub fn littleq_max_length(s: f64, delta: f64) -> usize {
    crate::measures::log_mode_count(s, delta)
}

pub fn littleq_signed(alpha: f64, s: f64, omega_c: f64, delta: f64, n: usize) -> Result<LittleQSigned, ChainError> {
    if !(delta > 1.0 && delta.is_finite()) {
        return Err(ChainError::DeltaOutOfRange(delta));
    }
    let law = PowerLaw::new(alpha, s, omega_c).map_err(|e| ChainError::InvalidArgument(e.to_string()))?;
    check_len(n)?;
    let ln_d = delta.ln();
    let q_pow = |p: f64| (-p * ln_d).exp();
    // 1 − q^p
    let om = |p: f64| -(-p * ln_d).exp_m1();
    let (zeta_s, gamma_s_sq) = crate::measures::log_star_scales(&law, delta);
    let a: Vec<f64> = (0..n)
        .map(|j| {
            let j = j as f64;
            let u = om(j + 1.0 + s);
            q_pow(j) * u * u / (om(2.0 * j + 1.0 + s) * om(2.0 * j + 2.0 + s))
        })
        .collect();
    let c: Vec<f64> = (0..n)
        .map(|j| {
            if j == 0 {
                return 0.0;
            }
            let j = j as f64;
            let u = om(j);
            q_pow(j + s) * u * u / (om(2.0 * j + s) * om(2.0 * j + 1.0 + s))
        })
        .collect();
    let norm_ratio: Vec<f64> = (0..n.saturating_sub(1))
        .map(|j| {
            let j = j as f64;
            q_pow(0.5 * (1.0 + s)) * om(j + 1.0) / om(j + 1.0 + s)
                * (om(2.0 * j + 1.0 + s) / om(2.0 * j + 3.0 + s)).sqrt()
        })
        .collect();
    let omega = a.iter().zip(&c).map(|(a, c)| zeta_s * (a + c)).collect();
    let t = norm_ratio.iter().zip(&a).map(|(r, a)| -zeta_s * r * a).collect();
    Ok(LittleQSigned { zeta_s, gamma_s_sq, a, c, norm_ratio, omega, t })
}

/// Chain of the log-discretised power law.
///
/// The length is capped at [`littleq_max_length`]; a capped chain says so
/// in `notes`.
pub fn littleq_chain(alpha: f64, s: f64, omega_c: f64, delta: f64, n: usize) -> Result<ChainParameters, ChainError> {
    if !(delta > 1.0 && delta.is_finite()) {
        return Err(ChainError::DeltaOutOfRange(delta));
    }
    let cap = littleq_max_length(s, delta);
    let len = n.min(cap);
    let sq = littleq_signed(alpha, s, omega_c, delta, len)?;
    let mut notes = Vec::new();
    if len < n {
        notes.push(format!("chain capped at {len} sites (mode weights below 1e-300 beyond), {n} requested"));
    }
    Ok(ChainParameters {
        c0: omega_c * (2.0 * alpha / (1.0 + s)).sqrt(),
        omega: sq.omega,
        t: sq.t.iter().map(|t| t.abs()).collect(),
        g: omega_c,
        source: Source::ClosedForm(Family::LittleQJacobi),
        asymptote: None,
        gauge: Gauge::Alternating,
        est_error: (0..len).map(crate::orthopoly::roundoff).collect(),
        quad_points: None,
        notes,
    })
}

/// Hahn quantities with `(α_H, β_H) = (s, 0)` on `{0, …, N}`.
#[derive(Debug, Clone, PartialEq)]
pub struct HahnSigned {
    pub a: Vec<f64>,
    pub c: Vec<f64>,
    pub omega: Vec<f64>,
    /// `tₙ = −(ω_c/(N+1)) (ρₙ₊₁/ρₙ) Aₙ`
    pub t: Vec<f64>,
}

fn hahn_ac(s: f64, big_n: usize, k: usize) -> (f64, f64) {
    let (kf, nf) = (k as f64, big_n as f64);
    let a = (kf + s + 1.0) * (kf + s + 1.0) * (nf - kf) / ((2.0 * kf + s + 1.0) * (2.0 * kf + s + 2.0));
    let c = if k == 0 {
        0.0
    } else {
        kf * kf * (kf + s + nf + 1.0) / ((2.0 * kf + s) * (2.0 * kf + s + 1.0))
    };
    (a, c)
}

pub fn hahn_signed(s: f64, omega_c: f64, big_n: usize, n: usize) -> Result<HahnSigned, ChainError> {
    if n > big_n + 1 {
        return Err(ChainError::IndexBeyondModes { requested: n, modes: big_n + 1 });
    }
    let scale = omega_c / (big_n as f64 + 1.0);
    let (a, c): (Vec<f64>, Vec<f64>) = (0..n).map(|k| hahn_ac(s, big_n, k)).unzip();
    let omega = a.iter().zip(&c).map(|(a, c)| scale * (a + c)).collect();
    // (ρₙ₊₁/ρₙ)Aₙ = √(Aₙ Cₙ₊₁)
    let t = (0..n.saturating_sub(1)).map(|k| -scale * (a[k] * c[k + 1]).sqrt()).collect();
    Ok(HahnSigned { a, c, omega, t })
}

fn hahn_mass(alpha: f64, s: f64, omega_c: f64, big_n: usize) -> f64 {
    let np1 = big_n as f64 + 1.0;
    let pref = 2.0 * alpha * omega_c * omega_c / np1.powf(s + 1.0);
    let mut binom = 1.0;
    let terms = (0..=big_n).map(|k| {
        if k > 0 {
            binom *= (s + k as f64) / k as f64;
        }
        pref * binom
    });
    ksum(terms.collect::<Vec<_>>())
}

/// Monic recurrence of the linearly discretised measure in `x = ω/ω_c`.
pub fn hahn_recurrence(
    alpha: f64,
    s: f64,
    omega_c: f64,
    big_n: usize,
    n: usize,
) -> Result<RecurrenceCoefficients, ChainError> {
    let h = hahn_signed(s, 1.0, big_n, n)?;
    let mut beta = vec![hahn_mass(alpha, s, omega_c, big_n)];
    beta.extend(h.t.iter().map(|t| t * t));
    Ok(RecurrenceCoefficients::new(h.omega, beta, Engine::ClosedForm))
}

/// Chain of the linearly discretised power law with modes `0..=big_n`,
/// `n ≤ big_n + 1` sites.
pub fn hahn_chain(alpha: f64, s: f64, omega_c: f64, big_n: usize, n: usize) -> Result<ChainParameters, ChainError> {
    PowerLaw::new(alpha, s, omega_c).map_err(|e| ChainError::InvalidArgument(e.to_string()))?;
    check_len(n)?;
    if big_n < 1 {
        return Err(ChainError::InvalidArgument("need at least two modes".into()));
    }
    let h = hahn_signed(s, omega_c, big_n, n)?;
    Ok(ChainParameters {
        c0: hahn_mass(alpha, s, omega_c, big_n).sqrt(),
        omega: h.omega,
        t: h.t.iter().map(|t| t.abs()).collect(),
        g: omega_c,
        source: Source::ClosedForm(Family::Hahn),
        asymptote: None,
        gauge: Gauge::Alternating,
        est_error: (0..n).map(crate::orthopoly::roundoff).collect(),
        quad_points: None,
        notes: Vec::new(),
    })
}
