//! Job configuration files.
//!
//! ```toml
//! [density]
//! family = "hard_cutoff"   # exp_cutoff, log_discretised, linear_discretised,
//!                          # tabulated, gapped, point_masses
//! alpha = 0.1
//! s = 1.0
//! omega_c = 1.0
//!
//! [job]
//! chain_length = 50
//! engine = "auto"          # closed_form, stieltjes, lanczos, gram_schmidt[@digits]
//! tolerance = 1e-12
//! output = "ohmic.csv"
//! format = "csv"           # or json
//! ```
//!
//! `log_discretised` needs `delta`, `linear_discretised` needs `n_modes`
//! (modes `0..n_modes−1`), `tabulated` needs `table_path` (relative to the
//! config file), `point_masses` needs `points = [[omega, weight], …]` and
//! `gapped` takes `[[density.segments]]` tables with their own `family`
//! plus `lo`, `hi`.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use super::CliError;
use crate::chain::Statistics;
use crate::measures::{GapSegment, PointMass, PowerLaw, SpectralDensity, TabulatedDensity};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineChoice {
    Auto,
    ClosedForm,
    Stieltjes,
    Lanczos,
    /// Moment Gram–Schmidt at the given number of decimal digits.
    GramSchmidt(usize),
}

impl EngineChoice {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        let (name, digits) = match s.split_once('@') {
            Some((n, d)) => {
                let d = d
                    .parse::<usize>()
                    .map_err(|_| CliError::Config(format!("bad precision in engine '{s}'")))?;
                (n, Some(d))
            }
            None => (s, None),
        };
        let e = match name.replace('-', "_").as_str() {
            "auto" => Self::Auto,
            "closed_form" => Self::ClosedForm,
            "stieltjes" | "stieltjes_discretised" => Self::Stieltjes,
            "lanczos" | "lanczos_rkpw" => Self::Lanczos,
            "gram_schmidt" | "moment_gram_schmidt" => Self::GramSchmidt(digits.unwrap_or(16)),
            _ => {
                return Err(CliError::Config(format!(
                    "unknown engine '{s}' (auto, closed_form, stieltjes, lanczos, gram_schmidt[@digits])"
                )))
            }
        };
        if digits.is_some() && !matches!(e, Self::GramSchmidt(_)) {
            return Err(CliError::Config(format!("only gram_schmidt takes a precision, got '{s}'")));
        }
        Ok(e)
    }

    pub fn label(&self) -> String {
        match self {
            Self::Auto => "auto".into(),
            Self::ClosedForm => "closed_form".into(),
            Self::Stieltjes => "stieltjes".into(),
            Self::Lanczos => "lanczos".into(),
            Self::GramSchmidt(d) => format!("gram_schmidt@{d}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            _ => Err(CliError::Config(format!("unknown format '{s}' (csv, json)"))),
        }
    }

    /// `.json` means JSON, any other extension CSV.
    pub fn from_path(p: &Path) -> Self {
        match p.extension().and_then(|e| e.to_str()) {
            Some("json") => Self::Json,
            _ => Self::Csv,
        }
    }
}

#[derive(Debug, Clone)]
pub struct JobConfig {
    pub density: SpectralDensity,
    pub statistics: Statistics,
    pub chain_length: usize,
    pub engine: EngineChoice,
    pub tolerance: f64,
    pub output: Option<PathBuf>,
    pub format: Format,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    density: RawDensity,
    #[serde(default)]
    job: RawJob,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDensity {
    family: String,
    alpha: Option<f64>,
    s: Option<f64>,
    omega_c: Option<f64>,
    delta: Option<f64>,
    n_modes: Option<usize>,
    table_path: Option<PathBuf>,
    points: Option<Vec<[f64; 2]>>,
    segments: Option<Vec<RawSegment>>,
    statistics: Option<Statistics>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSegment {
    family: String,
    alpha: Option<f64>,
    s: Option<f64>,
    omega_c: Option<f64>,
    table_path: Option<PathBuf>,
    lo: f64,
    hi: f64,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawJob {
    chain_length: Option<usize>,
    engine: Option<String>,
    tolerance: Option<f64>,
    output: Option<PathBuf>,
    format: Option<String>,
}

fn need<T>(v: Option<T>, key: &str, family: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Config(format!("family '{family}' needs '{key}'")))
}

fn law(alpha: Option<f64>, s: Option<f64>, omega_c: Option<f64>, family: &str) -> Result<PowerLaw, CliError> {
    let l = PowerLaw::new(need(alpha, "alpha", family)?, need(s, "s", family)?, need(omega_c, "omega_c", family)?)
        .map_err(|e| CliError::Config(e.to_string()))?;
    Ok(l)
}

fn table(path: Option<PathBuf>, base: &Path, family: &str) -> Result<TabulatedDensity, CliError> {
    let p = need(path, "table_path", family)?;
    let p = if p.is_absolute() { p } else { base.join(p) };
    TabulatedDensity::from_file(&p).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))
}

fn segment(raw: RawSegment, base: &Path) -> Result<GapSegment, CliError> {
    let f = raw.family.as_str();
    let density = match f {
        "hard_cutoff" => SpectralDensity::PowerLawHardCutoff(law(raw.alpha, raw.s, raw.omega_c, f)?),
        "exp_cutoff" => SpectralDensity::PowerLawExpCutoff(law(raw.alpha, raw.s, raw.omega_c, f)?),
        "tabulated" => SpectralDensity::Tabulated(table(raw.table_path, base, f)?),
        _ => return Err(CliError::Config(format!("segment family must be hard_cutoff, exp_cutoff or tabulated, got '{f}'"))),
    };
    Ok(GapSegment { density, lo: raw.lo, hi: raw.hi })
}

fn density(raw: RawDensity, base: &Path) -> Result<SpectralDensity, CliError> {
    let f = raw.family.as_str();
    let j = match f {
        "hard_cutoff" => SpectralDensity::PowerLawHardCutoff(law(raw.alpha, raw.s, raw.omega_c, f)?),
        "exp_cutoff" => SpectralDensity::PowerLawExpCutoff(law(raw.alpha, raw.s, raw.omega_c, f)?),
        "log_discretised" => SpectralDensity::LogDiscretised {
            law: law(raw.alpha, raw.s, raw.omega_c, f)?,
            delta: need(raw.delta, "delta", f)?,
        },
        "linear_discretised" => {
            let modes = need(raw.n_modes, "n_modes", f)?;
            if modes < 2 {
                return Err(CliError::Config("n_modes must be at least 2".into()));
            }
            SpectralDensity::LinearDiscretised { law: law(raw.alpha, raw.s, raw.omega_c, f)?, n: modes - 1 }
        }
        "tabulated" => SpectralDensity::Tabulated(table(raw.table_path, base, f)?),
        "point_masses" => SpectralDensity::PointMasses(
            need(raw.points, "points", f)?
                .into_iter()
                .map(|[omega, weight]| PointMass { omega, weight })
                .collect(),
        ),
        "gapped" => SpectralDensity::Gapped(
            need(raw.segments, "segments", f)?
                .into_iter()
                .map(|s| segment(s, base))
                .collect::<Result<_, _>>()?,
        ),
        _ => return Err(CliError::Config(format!("unknown family '{f}'"))),
    };
    j.validate().map_err(|e| CliError::Config(e.to_string()))?;
    Ok(j)
}

/// Parses and validates a configuration; relative paths resolve against `base`.
pub fn parse_config(text: &str, base: &Path) -> Result<JobConfig, CliError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
    let statistics = raw.density.statistics.unwrap_or_default();
    let density = density(raw.density, base)?;
    let job = raw.job;
    let chain_length = job.chain_length.unwrap_or(50);
    if chain_length < 1 {
        return Err(CliError::Config("chain_length must be at least 1".into()));
    }
    let tolerance = job.tolerance.unwrap_or(1e-12);
    if !(tolerance > 0.0 && tolerance <= 1e-2) {
        return Err(CliError::Config(format!("tolerance must lie in (0, 1e-2], got {tolerance}")));
    }
    let engine = EngineChoice::parse(job.engine.as_deref().unwrap_or("auto"))?;
    let format = match job.format.as_deref() {
        Some(f) => Format::parse(f)?,
        None => job.output.as_deref().map_or(Format::Csv, Format::from_path),
    };
    let output = job.output.map(|p| if p.is_absolute() { p } else { base.join(p) });
    Ok(JobConfig { density, statistics, chain_length, engine, tolerance, output, format })
}

pub fn load_config(path: &Path) -> Result<JobConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    parse_config(&text, &base)
}
