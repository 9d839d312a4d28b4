//! Generation of the derived-values fixture consumed by the test suite.
//!
//! Every value is recomputed from scratch by the oracle; the output is
//! deterministic, so regenerating must reproduce the committed file byte
//! for byte.

use serde_json::{json, Map, Value};

use super::exact::{gram_schmidt_exact, power_law_moments};
use super::hp::{self, HpFloat};
use super::quad::{exp_sinh, tanh_sinh, Endpoints};
use super::special::{hahn_displayed_norm, LittleQ};
use super::sums::{hahn_gram, littleq_gram, littleq_terms};
use super::OracleError;
use crate::measures::Measure;
use crate::orthopoly::gram_schmidt_generic;

/// Significant digits written for extended-precision values.
pub const FIXTURE_DIGITS: usize = 40;
const WORK_DIGITS: usize = 100;

pub const CASES: [&str; 5] = ["gram_schmidt_exact", "littleq_norms", "hahn_norms", "quadrature", "jacobi_half"];

fn sci(x: &HpFloat) -> Value {
    Value::String(hp::to_sci(x, FIXTURE_DIGITS))
}

/// Exact recurrence coefficients of `x^s` on `[0,1]`, `s = 0..=3`, `n = 12`.
fn gram_schmidt_case() -> Result<Value, OracleError> {
    let mut out = Map::new();
    for s in 0..=3u32 {
        let c = gram_schmidt_exact(&power_law_moments(s, 24), 12)?;
        out.insert(
            format!("s{s}"),
            json!({
                "alpha": c.alpha.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                "beta": c.beta.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            }),
        );
    }
    Ok(Value::Object(out))
}

fn max_offdiag_ratio(g: &[Vec<HpFloat>]) -> f64 {
    let mut worst: f64 = 0.0;
    for k in 0..g.len() {
        for l in 0..k {
            let d = (hp::to_f64(&g[k][k]) * hp::to_f64(&g[l][l])).sqrt();
            worst = worst.max(hp::to_f64(&g[k][l]).abs() / d);
        }
    }
    worst
}

/// Brute-force little-q norms `N_k²` next to the closed form, `k ≤ 15`.
fn littleq_case() -> Result<Value, OracleError> {
    let mut rows = Vec::new();
    for &delta in &[1.5, 2.0, 3.0] {
        for &s in &[0.0, 0.5, 1.0, 2.0] {
            let kmax = 15;
            let terms = littleq_terms(delta, s, kmax);
            let g = littleq_gram(delta, s, kmax, terms, WORK_DIGITS);
            let lq = LittleQ::new(delta, s, super::special::littleq_bits(WORK_DIGITS, kmax, delta));
            let brute: Vec<Value> = (0..=kmax).map(|k| sci(&g[k][k])).collect();
            let closed: Vec<Value> = (0..=kmax).map(|k| sci(&lq.norm_sq_closed(k))).collect();
            let worst_rel = (0..=kmax)
                .map(|k| {
                    let c = lq.norm_sq_closed(k);
                    hp::to_f64(&((g[k][k].clone() - c.clone()) / c)).abs()
                })
                .fold(0.0, f64::max);
            rows.push(json!({
                "delta": delta,
                "s": s,
                "terms": terms,
                "brute_norm_sq": brute,
                "closed_norm_sq": closed,
                "max_rel_diff": format!("{:.3e}", worst_rel),
                "max_offdiag_ratio": format!("{:.3e}", max_offdiag_ratio(&g)),
            }));
        }
    }
    Ok(Value::Array(rows))
}

/// Brute-force Hahn norms against the displayed normalisation formula.
fn hahn_case() -> Result<Value, OracleError> {
    let mut rows = Vec::new();
    for &n in &[5usize, 10, 20] {
        for &s in &[0.0, 0.5, 1.0, 2.0] {
            let g = hahn_gram(n, s, WORK_DIGITS);
            let bits = hp::bits_for_digits(WORK_DIGITS);
            let (al, be) = (hp::from_f64(s, bits), hp::from_i64(0, bits));
            let brute: Vec<Value> = (0..=n).map(|k| sci(&g[k][k])).collect();
            let displayed: Vec<HpFloat> = (0..=n).map(|k| hahn_displayed_norm(k, &al, &be, n)).collect();
            let ratio_sq = (0..=n)
                .map(|k| hp::to_f64(&((g[k][k].clone() - displayed[k].clone()) / displayed[k].clone())).abs())
                .fold(0.0, f64::max);
            rows.push(json!({
                "n": n,
                "s": s,
                "brute_norm_sq": brute,
                "displayed": displayed.iter().map(sci).collect::<Vec<_>>(),
                "max_rel_diff_as_rho_sq": format!("{:.3e}", ratio_sq),
                "max_offdiag_ratio": format!("{:.3e}", max_offdiag_ratio(&g)),
            }));
        }
    }
    Ok(Value::Array(rows))
}

fn quadrature_case() -> Result<Value, OracleError> {
    let bits = hp::bits_for_digits(WORK_DIGITS);
    let cubic = tanh_sinh(|x, _| x.clone() * x.clone() * x.clone(), 0.0, 1.0, 50, Endpoints::Regular)?;
    let gamma3 = exp_sinh(|x| x.clone() * x.clone() * (-x.clone()).exp(), 0.0, 50)?;
    // ∫₀¹ ln(x) dx / √(1 − (2x − 1)²), with √(x(1−x)) written via the
    // endpoint distance to keep full relative accuracy near both ends
    let szego = tanh_sinh(
        |x, d| {
            let one = hp::from_i64(1, x.precision());
            let two = hp::from_i64(2, x.precision());
            x.ln() / (two * (d.clone() * (one - d.clone())).sqrt())
        },
        0.0,
        1.0,
        30,
        Endpoints::Singular,
    )?;
    let exact_szego = -(hp::pi(bits) * hp::from_i64(2, bits).ln());
    Ok(json!({
        "cubic_unit_interval": sci(&cubic),
        "gamma_three": sci(&gamma3),
        "szego_s1": sci(&szego),
        "szego_s1_exact": sci(&exact_szego),
    }))
}

/// Recurrence of `x^{1/2}` on `[0,1]` by Gram–Schmidt at 100 digits.
fn jacobi_half_case() -> Result<Value, OracleError> {
    let m = Measure::power_law(1.0, 0.5, 0.0, 1.0).expect("valid");
    let n = 20;
    let mu = super::moments_hp(&m, 2 * n, WORK_DIGITS)?;
    let (alpha, beta) = gram_schmidt_generic(&mu, n).map_err(|(k, _, _)| OracleError::MomentMatrixSingular { index: k })?;
    Ok(json!({
        "s": 0.5,
        "alpha": alpha.iter().map(sci).collect::<Vec<_>>(),
        "beta": beta.iter().map(sci).collect::<Vec<_>>(),
    }))
}

/// One section of the fixture.
pub fn generate_case(name: &str) -> Result<Value, OracleError> {
    match name {
        "gram_schmidt_exact" => gram_schmidt_case(),
        "littleq_norms" => littleq_case(),
        "hahn_norms" => hahn_case(),
        "quadrature" => quadrature_case(),
        "jacobi_half" => jacobi_half_case(),
        other => Err(OracleError::Unsupported(format!(
            "unknown oracle case '{other}' (known: all, {})",
            CASES.join(", ")
        ))),
    }
}

/// Pretty-printed JSON for `name`, or every case for `"all"`.
pub fn generate(name: &str) -> Result<String, OracleError> {
    let value = if name == "all" {
        let mut all = Map::new();
        for case in CASES {
            all.insert(case.to_string(), generate_case(case)?);
        }
        Value::Object(all)
    } else {
        let mut one = Map::new();
        one.insert(name.to_string(), generate_case(name)?);
        Value::Object(one)
    };
    Ok(serde_json::to_string_pretty(&value).expect("serialisable") + "\n")
}
