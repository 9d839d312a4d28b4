//! Engine dispatch and the diagnostics behind the subcommands.

use super::config::EngineChoice;
use super::CliError;
use crate::chain::{
    chain_from_coefficients, hahn_chain, jacobi_chain, laguerre_chain, littleq_chain, littleq_max_length,
    ChainParameters, Gauge, Source,
};
use crate::measures::{Measure, MeasureKind, SpectralDensity, Support};
use crate::orthopoly::{
    gauss_rule, lanczos_measure, moment_gram_schmidt, stieltjes_with, DiscretisationOptions, Engine, OrthoError,
};

/// Closed-form chain of `j`, if it belongs to one of the families.
pub fn closed_form_chain(j: &SpectralDensity, n: usize) -> Option<Result<ChainParameters, CliError>> {
    let r = match j {
        SpectralDensity::PowerLawHardCutoff(l) => jacobi_chain(l.alpha, l.s, l.omega_c, n),
        SpectralDensity::PowerLawExpCutoff(l) => laguerre_chain(l.alpha, l.s, l.omega_c, n),
        SpectralDensity::LogDiscretised { law: l, delta } => {
            let cap = littleq_max_length(l.s, *delta);
            if n > cap {
                return Some(Err(too_long(n, cap)));
            }
            littleq_chain(l.alpha, l.s, l.omega_c, *delta, n)
        }
        SpectralDensity::LinearDiscretised { law: l, n: big_n } => hahn_chain(l.alpha, l.s, l.omega_c, *big_n, n),
        _ => return None,
    };
    Some(r.map_err(CliError::from))
}

fn too_long(n: usize, available: usize) -> CliError {
    CliError::Degenerate(format!(
        "requested chain length {n} exceeds the {available} sites the discrete measure supports"
    ))
}

/// Chain of `n` sites from the requested engine.
pub fn compute_chain(
    j: &SpectralDensity,
    n: usize,
    engine: EngineChoice,
    opts: &DiscretisationOptions,
) -> Result<ChainParameters, CliError> {
    if let EngineChoice::Auto | EngineChoice::ClosedForm = engine {
        if let Some(r) = closed_form_chain(j, n) {
            return r;
        }
        if engine == EngineChoice::ClosedForm {
            return Err(CliError::Config("no closed form for this density; use stieltjes or lanczos".into()));
        }
    }
    let m = Measure::induced(j).map_err(|e| CliError::Config(e.to_string()))?;
    if let Some(count) = m.point_count() {
        if n > count {
            return Err(too_long(n, count));
        }
    }
    let rc = match engine {
        EngineChoice::Stieltjes => stieltjes_with(&m, n, opts)?,
        EngineChoice::GramSchmidt(d) => moment_gram_schmidt(&m, n, d)?,
        _ => lanczos_measure(&m, n, opts)?,
    };
    let mut cp = chain_from_coefficients(&rc, m.g())?;
    if let (Support::Bounded { a, b }, true) = (m.support(), szego_candidate(&m)) {
        cp = cp.with_asymptote(m.g() * (a + b) / 2.0, m.g() * (b - a) / 4.0);
    }
    Ok(cp)
}

/// Continuous, gap-free measure.
pub fn szego_candidate(m: &Measure) -> bool {
    matches!(m.kind(), MeasureKind::Continuous(_)) && m.gaps().is_empty()
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }
}

/// Per-site disagreement between engines.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub engines: Vec<String>,
    /// `(n, max relative disagreement of ωₙ and tₙ against the first engine)`;
    /// `+∞` where an engine produced no value.
    pub rows: Vec<(usize, f64)>,
    pub notes: Vec<String>,
}

impl Comparison {
    pub fn max(&self) -> f64 {
        self.rows.iter().map(|r| r.1).fold(0.0, f64::max)
    }

    /// First site whose disagreement exceeds `threshold`.
    pub fn first_above(&self, threshold: f64) -> Option<usize> {
        self.rows.iter().find(|r| r.1 > threshold).map(|r| r.0)
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("# engines={}\n", self.engines.join(","));
        for n in &self.notes {
            out.push_str(&format!("# {n}\n"));
        }
        out.push_str(&format!("# max={}\n", crate::numfmt::fmt17(self.max())));
        out.push_str("n,max_rel_disagreement\n");
        for (n, d) in &self.rows {
            out.push_str(&format!("{n},{}\n", crate::numfmt::fmt17(*d)));
        }
        out
    }
}

/// Chains from each engine; a Gram–Schmidt run that loses all precision
/// contributes the coefficients it reached.
pub fn compare(
    j: &SpectralDensity,
    n: usize,
    engines: &[EngineChoice],
    opts: &DiscretisationOptions,
) -> Result<Comparison, CliError> {
    if engines.len() < 2 {
        return Err(CliError::Config("compare needs at least two engines".into()));
    }
    let mut chains = Vec::new();
    let mut notes = Vec::new();
    for &e in engines {
        let cp = match compute_chain(j, n, e, opts) {
            Ok(cp) => cp,
            Err(CliError::Engine(OrthoError::PrecisionExhausted { index, partial })) => {
                notes.push(format!("{}: precision exhausted at k = {index}", e.label()));
                let g = Measure::induced(j).map_err(|e| CliError::Config(e.to_string()))?.g();
                if partial.n_terms() == 0 {
                    ChainParameters {
                        c0: f64::NAN,
                        omega: Vec::new(),
                        t: Vec::new(),
                        g,
                        source: Source::Engine(Engine::MomentGramSchmidt),
                        asymptote: None,
                        gauge: Gauge::Identity,
                        est_error: Vec::new(),
                        quad_points: None,
                        notes: Vec::new(),
                    }
                } else {
                    chain_from_coefficients(&partial, g)?
                }
            }
            Err(err) => return Err(err),
        };
        chains.push(cp);
    }
    let reference = &chains[0];
    let rows = (0..n)
        .map(|k| {
            let mut worst: f64 = 0.0;
            for cp in &chains[1..] {
                let d = match (cp.omega.get(k), reference.omega.get(k)) {
                    (Some(a), Some(b)) => rel(*a, *b),
                    _ => f64::INFINITY,
                };
                let dt = match (cp.t.get(k), reference.t.get(k)) {
                    (Some(a), Some(b)) => rel(*a, *b),
                    (None, None) => 0.0,
                    _ => f64::INFINITY,
                };
                worst = worst.max(d).max(dt);
            }
            (k, worst)
        })
        .collect();
    Ok(Comparison { engines: engines.iter().map(|e| e.label()).collect(), rows, notes })
}

/// One line of the invariant suite.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn outcome(name: &str, passed: bool, detail: String) -> CheckOutcome {
    CheckOutcome { name: name.into(), passed, detail }
}

/// Structural invariants of the chain of `j` with `n` sites.
pub fn invariant_suite(
    j: &SpectralDensity,
    n: usize,
    engine: EngineChoice,
    opts: &DiscretisationOptions,
) -> Result<Vec<CheckOutcome>, CliError> {
    let m = Measure::induced(j).map_err(|e| CliError::Config(e.to_string()))?;
    let cp = compute_chain(j, n, engine, opts)?;
    let g = cp.g;
    let mut out = Vec::new();

    let positive = cp.t.iter().all(|&t| t > 0.0 && t.is_finite()) && cp.omega.iter().all(|w| w.is_finite());
    out.push(outcome("positive_hopping", positive, format!("{} hoppings", cp.t.len())));

    if let Support::Bounded { a, b } = m.support() {
        let (lo, hi) = (g * a, g * b);
        let slack = 1e-12 * hi.abs().max(lo.abs());
        let in_range = cp.omega.iter().all(|&w| w >= lo - slack && w <= hi + slack);
        let t_max = cp.t.iter().copied().fold(0.0, f64::max);
        let bound = g * a.abs().max(b.abs());
        out.push(outcome(
            "frequency_bounds",
            in_range,
            format!("omega in [{lo:e}, {hi:e}]"),
        ));
        out.push(outcome("hopping_bound", t_max <= bound * (1.0 + 1e-12), format!("max t {t_max:e} <= {bound:e}")));
    }

    let eta = j.eta0().map_err(|e| CliError::Config(e.to_string()))?;
    let want = eta / std::f64::consts::PI;
    let tol = if matches!(j, SpectralDensity::Tabulated(_) | SpectralDensity::Gapped(_)) { 1e-6 } else { 1e-10 };
    let err = rel(cp.c0 * cp.c0, want);
    out.push(outcome("coupling_mass", err < tol, format!("|c0^2 - eta0/pi| rel {err:.2e}")));

    let k = cp.len().min(20);
    let rule = gauss_rule(&cp.to_recurrence(), k)?;
    let mut worst: f64 = 0.0;
    for r in 0..(2 * k) as u32 {
        let q = crate::numfmt::ksum(rule.iter().map(|(x, w)| w * x.powi(r as i32)));
        let mu = m.moment(r);
        worst = worst.max(rel(q, mu));
    }
    out.push(outcome("gauss_moments", worst < 1e-10, format!("{k}-point rule, moments 0..{} rel {worst:.2e}", 2 * k - 1)));

    if let Some(Ok(closed)) = closed_form_chain(j, n) {
        if engine != EngineChoice::Auto && engine != EngineChoice::ClosedForm {
            let d = cp
                .omega
                .iter()
                .zip(&closed.omega)
                .chain(cp.t.iter().zip(&closed.t))
                .map(|(a, b)| rel(*a, *b))
                .fold(0.0, f64::max);
            out.push(outcome("closed_form_agreement", d < 1e-9, format!("max rel {d:.2e}")));
        }
    }

    if !m.is_discrete() {
        let s = compute_chain(j, n, EngineChoice::Stieltjes, opts)?;
        let l = compute_chain(j, n, EngineChoice::Lanczos, opts)?;
        let d = s
            .omega
            .iter()
            .zip(&l.omega)
            .chain(s.t.iter().zip(&l.t))
            .map(|(a, b)| rel(*a, *b))
            .fold(0.0, f64::max);
        let allowed = 1e-10f64.max(10.0 * (s.est_error.iter().chain(&l.est_error).copied().fold(0.0, f64::max)));
        out.push(outcome("engine_agreement", d < allowed, format!("stieltjes vs lanczos max rel {d:.2e}")));
    }
    Ok(out)
}
