//! Text and JSON serialisation of recurrence coefficients.

use serde::Serialize;

use super::{Engine, OrthoError, RecurrenceCoefficients};
use crate::numfmt::{fmt17, ser_vec};

/// Two columns `alpha beta`, one line per index, preceded by a comment
/// naming the engine.
pub fn to_text(rc: &RecurrenceCoefficients) -> String {
    let mut out = format!("# engine={} n={}\n", rc.engine.name(), rc.n_terms());
    for (a, b) in rc.alpha.iter().zip(&rc.beta) {
        out.push_str(&fmt17(*a));
        out.push(' ');
        out.push_str(&fmt17(*b));
        out.push('\n');
    }
    out
}

/// Inverse of [`to_text`]. The error estimate is reset to roundoff level.
pub fn parse_text(text: &str) -> Result<RecurrenceCoefficients, OrthoError> {
    let mut engine = Engine::ClosedForm;
    let mut alpha = Vec::new();
    let mut beta = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if let Some(comment) = line.strip_prefix('#') {
            for tok in comment.split_whitespace() {
                if let Some(name) = tok.strip_prefix("engine=") {
                    engine = Engine::from_name(name)
                        .ok_or_else(|| OrthoError::InvalidArgument(format!("unknown engine {name}")))?;
                }
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split_whitespace().collect();
        let parse = |s: &str| {
            s.parse::<f64>()
                .map_err(|e| OrthoError::InvalidArgument(format!("line {}: {e}", i + 1)))
        };
        if cols.len() != 2 {
            return Err(OrthoError::InvalidArgument(format!("line {}: expected two columns", i + 1)));
        }
        alpha.push(parse(cols[0])?);
        beta.push(parse(cols[1])?);
    }
    Ok(RecurrenceCoefficients::new(alpha, beta, engine))
}

#[derive(Serialize)]
struct JsonForm<'a> {
    engine: &'static str,
    n: usize,
    #[serde(serialize_with = "ser_vec")]
    alpha: &'a [f64],
    #[serde(serialize_with = "ser_vec")]
    beta: &'a [f64],
    #[serde(serialize_with = "ser_vec")]
    est_error: &'a [f64],
}

/// `{engine, n, alpha[], beta[], est_error[]}`
pub fn to_json(rc: &RecurrenceCoefficients) -> String {
    let form = JsonForm {
        engine: rc.engine.name(),
        n: rc.n_terms(),
        alpha: &rc.alpha,
        beta: &rc.beta,
        est_error: &rc.est_error,
    };
    serde_json::to_string_pretty(&form).expect("serialisable") + "\n"
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn json_shape() {
        let rc = RecurrenceCoefficients::new(vec![0.5], vec![1.0], Engine::LanczosRkpw);
        let v: serde_json::Value = serde_json::from_str(&to_json(&rc)).unwrap();
        assert_eq!(v["engine"], "lanczos_rkpw");
        assert_eq!(v["n"], 1);
        assert_eq!(v["alpha"][0].as_f64(), Some(0.5));
    }

    proptest! {
        #[test]
        fn text_round_trip_is_bit_exact(a in proptest::collection::vec(any::<f64>(), 1..20)) {
            prop_assume!(a.iter().all(|x| x.is_finite()));
            let beta: Vec<f64> = a.iter().map(|x| x.abs() + 1e-300).collect();
            let rc = RecurrenceCoefficients::new(a.clone(), beta.clone(), Engine::StieltjesDiscretised);
            let back = parse_text(&to_text(&rc)).unwrap();
            prop_assert_eq!(back.engine, Engine::StieltjesDiscretised);
            for (x, y) in back.alpha.iter().zip(&a) {
                prop_assert_eq!(x.to_bits(), y.to_bits());
            }
            for (x, y) in back.beta.iter().zip(&beta) {
                prop_assert_eq!(x.to_bits(), y.to_bits());
            }
        }

        #[test]
        fn json_round_trip_is_bit_exact(a in proptest::collection::vec(any::<f64>(), 1..20)) {
            prop_assume!(a.iter().all(|x| x.is_finite()));
            let rc = RecurrenceCoefficients::new(a.clone(), a.clone(), Engine::ClosedForm);
            let v: serde_json::Value = serde_json::from_str(&to_json(&rc)).unwrap();
            for (k, x) in a.iter().enumerate() {
                prop_assert_eq!(v["alpha"][k].as_f64().unwrap().to_bits(), x.to_bits());
            }
        }
    }
}
