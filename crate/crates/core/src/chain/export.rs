//! CSV and JSON export of chain parameters.

use serde::Serialize;

use super::{ChainParameters, Gauge};
use crate::numfmt::{fmt17, ser_f64, ser_vec};

/// CSV with a `#` comment block, then `n,omega,t`; the last site has an
/// empty hopping. `extra` lines are appended to the comment block.
pub fn to_csv(cp: &ChainParameters, extra: &[String]) -> String {
    let mut out = format!("# c0={} source={} g={}\n", fmt17(cp.c0), cp.source, fmt17(cp.g));
    if cp.gauge == Gauge::Alternating {
        out.push_str("# gauge=alternating (t reported as magnitudes)\n");
    }
    if let Some((w, t)) = cp.asymptote {
        out.push_str(&format!("# asymptote omega_inf={} t_inf={}\n", fmt17(w), fmt17(t)));
    }
    if let Some(p) = cp.quad_points {
        out.push_str(&format!("# quad_points={p}\n"));
    }
    let worst = cp.est_error.iter().copied().fold(0.0, f64::max);
    out.push_str(&format!("# est_error_max={}\n", fmt17(worst)));
    for note in cp.notes.iter().chain(extra) {
        out.push_str(&format!("# {note}\n"));
    }
    out.push_str("n,omega,t\n");
    for (n, w) in cp.omega.iter().enumerate() {
        let t = cp.t.get(n).map(|&t| fmt17(t)).unwrap_or_default();
        out.push_str(&format!("{n},{},{t}\n", fmt17(*w)));
    }
    out
}

#[derive(Serialize)]
struct JsonChain<'a> {
    #[serde(serialize_with = "ser_f64")]
    c0: &'a f64,
    source: String,
    #[serde(serialize_with = "ser_f64")]
    g: &'a f64,
    gauge: Gauge,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "ser_asym")]
    asymptote: Option<(f64, f64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    quad_points: Option<usize>,
    #[serde(serialize_with = "ser_vec")]
    omega: &'a [f64],
    #[serde(serialize_with = "ser_vec")]
    t: &'a [f64],
    #[serde(serialize_with = "ser_vec")]
    est_error: &'a [f64],
    notes: Vec<String>,
}

fn ser_asym<S: serde::Serializer>(a: &Option<(f64, f64)>, s: S) -> Result<S::Ok, S::Error> {
    let (w, t) = a.expect("skipped when absent");
    ser_vec(&[w, t], s)
}

/// Pretty JSON with the same 17-digit numbers as the CSV.
pub fn to_json(cp: &ChainParameters, extra: &[String]) -> String {
    let doc = JsonChain {
        c0: &cp.c0,
        source: cp.source.to_string(),
        g: &cp.g,
        gauge: cp.gauge,
        asymptote: cp.asymptote,
        quad_points: cp.quad_points,
        omega: &cp.omega,
        t: &cp.t,
        est_error: &cp.est_error,
        notes: cp.notes.iter().chain(extra).cloned().collect(),
    };
    serde_json::to_string_pretty(&doc).expect("serialisable") + "\n"
}
