//! Command-line front end.
//!
//! Exit status: 0 success, 1 I/O failure or failed invariant check,
//! 2 configuration error, 3 engine non-convergence, 4 degenerate measure
//! or a chain longer than the measure supports.

mod config;
mod jobs;

pub use config::{load_config, parse_config, EngineChoice, Format, JobConfig};
pub use jobs::{closed_form_chain, compare, compute_chain, invariant_suite, CheckOutcome, Comparison};

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use thiserror::Error;

use crate::asymptotics::{szego_check, tail_against, AsymptoticsError, SzegoReport};
use crate::chain::{star_model, to_csv, to_json, ChainError, ChainParameters};
use crate::measures::{Measure, SpectralDensity, Support};
use crate::numfmt::fmt17;
use crate::oracle::OracleError;
use crate::orthopoly::{DiscretisationOptions, OrthoError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("engine error: {0}")]
    Engine(OrthoError),
    #[error("degenerate: {0}")]
    Degenerate(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("{0} invariant check(s) failed")]
    ChecksFailed(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Engine(OrthoError::NoConvergence { .. }) => 3,
            CliError::Engine(OrthoError::Measure(_)) => 2,
            CliError::Engine(OrthoError::InvalidArgument(_)) => 2,
            CliError::Engine(_) | CliError::Degenerate(_) => 4,
            CliError::Io(_) | CliError::ChecksFailed(_) => 1,
        }
    }
}

impl From<OrthoError> for CliError {
    fn from(e: OrthoError) -> Self {
        CliError::Engine(e)
    }
}

impl From<ChainError> for CliError {
    fn from(e: ChainError) -> Self {
        match e {
            ChainError::Ortho(o) => CliError::Engine(o),
            ChainError::IndexBeyondModes { .. } => CliError::Degenerate(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "chainmap", version, about = "Map system-reservoir spectral densities onto chain Hamiltonians")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute chain parameters and write them as CSV or JSON.
    Map {
        #[arg(long)]
        config: PathBuf,
        /// Chain length (overrides `job.chain_length`).
        #[arg(long)]
        n: Option<usize>,
        /// auto, closed_form, stieltjes, lanczos or gram_schmidt[@digits].
        #[arg(long)]
        engine: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        format: Option<String>,
        /// Also run the Stieltjes engine and record the disagreement.
        #[arg(long)]
        check: bool,
    },
    /// Run the invariant suite on the configured density.
    Check {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        engine: Option<String>,
    },
    /// Emit the discretised star model.
    Star {
        #[arg(long)]
        config: PathBuf,
        /// Mode count for continuous densities (default: chain length).
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the Szegő-class report as JSON.
    Szego {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Regenerate the derived-values fixture.
    Oracle {
        /// all, gram_schmidt_exact, littleq_norms, hahn_norms, quadrature, jacobi_half.
        #[arg(long, default_value = "all")]
        case: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Per-site disagreement between engines.
    Compare {
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated engine list.
        #[arg(long, default_value = "stieltjes,lanczos")]
        engines: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Parses `args` (including the program name), runs, and returns the exit status.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(stdout, "{e}") } else { write!(stderr, "{e}") };
            return code;
        }
    };
    match run(cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "chainmap: {e}");
            e.exit_code()
        }
    }
}

fn options(cfg: &JobConfig) -> DiscretisationOptions {
    DiscretisationOptions { tol: cfg.tolerance, ..Default::default() }
}

/// Writes via a temporary file in the same directory, then renames.
fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().ok_or_else(|| CliError::Io(format!("{} is not a file path", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp", name.to_string_lossy()));
    std::fs::write(&tmp, contents).map_err(|e| CliError::Io(format!("{}: {e}", tmp.display())))?;
    std::fs::rename(&tmp, path).map_err(|e| {
        let _ = std::fs::remove_file(&tmp);
        CliError::Io(format!("{}: {e}", path.display()))
    })
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::String(fmt17(x))
    }
}

fn szego_json(r: &SzegoReport) -> Value {
    json!({
        "in_class": r.in_class,
        "szego_integral": num(r.szego_integral),
        "predicted_tail": { "omega_inf": num(r.predicted_tail.0), "t_inf": num(r.predicted_tail.1) },
        "measured_convergence": r.measured_convergence.iter()
            .map(|(n, dw, dt)| json!([n, num(*dw), num(*dt)]))
            .collect::<Vec<_>>(),
        "notes": r.notes,
    })
}

/// Szegő report of `m`, with the tail of `cp` when in class.
fn szego_value(m: &Measure, cp: Option<&ChainParameters>) -> Value {
    match szego_check(m) {
        Ok(mut r) => {
            if let Some(cp) = cp.filter(|_| r.in_class) {
                match tail_against(cp, r.predicted_tail.0, r.predicted_tail.1) {
                    Ok(d) => {
                        r.measured_convergence = d.rows;
                        if let Some(p) = d.order {
                            r.notes.push(format!("empirical order {p:.3}"));
                        }
                    }
                    Err(e) => r.notes.push(e.to_string()),
                }
            }
            szego_json(&r)
        }
        Err(AsymptoticsError::NotApplicable(why)) => json!({
            "in_class": false,
            "szego_integral": Value::Null,
            "notes": [format!("not applicable: {why}")],
        }),
        Err(e) => json!({ "in_class": false, "notes": [e.to_string()] }),
    }
}

fn provenance(cp: &ChainParameters, engine: EngineChoice, tol: f64) -> Vec<String> {
    let worst = cp.est_error.iter().copied().fold(0.0, f64::max);
    let mut lines = vec![format!("engine_request={} tolerance={}", engine.label(), fmt17(tol))];
    lines.push(format!(
        "provenance: source={} quad_points={} est_error_max={}",
        cp.source,
        cp.quad_points.map(|p| p.to_string()).unwrap_or_else(|| "none".into()),
        fmt17(worst)
    ));
    lines
}

fn render(cp: &ChainParameters, format: Format, extra: &[String]) -> String {
    match format {
        Format::Csv => to_csv(cp, extra),
        Format::Json => to_json(cp, extra),
    }
}

fn run_map(
    mut cfg: JobConfig,
    n: Option<usize>,
    engine: Option<String>,
    out: Option<PathBuf>,
    format: Option<String>,
    check: bool,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    if let Some(n) = n {
        if n == 0 {
            return Err(CliError::Config("chain length must be at least 1".into()));
        }
        cfg.chain_length = n;
    }
    if let Some(e) = engine {
        cfg.engine = EngineChoice::parse(&e)?;
    }
    match (format, &out) {
        (Some(f), _) => cfg.format = Format::parse(&f)?,
        // an explicit --out decides over the configured output
        (None, Some(p)) => cfg.format = Format::from_path(p),
        (None, None) => {}
    }
    let out = out.or(cfg.output.clone());
    let opts = options(&cfg);
    let segments = cfg.density.split_gapped();
    let gapped = matches!(cfg.density, SpectralDensity::Gapped(ref s) if s.len() > 1);

    // everything is computed before anything is written
    let mut files: Vec<(Option<PathBuf>, String)> = Vec::new();
    let mut report_segments = Vec::new();
    for (i, seg) in segments.iter().enumerate() {
        let cp = compute_chain(seg, cfg.chain_length, cfg.engine, &opts)?;
        let mut extra = provenance(&cp, cfg.engine, cfg.tolerance);
        let mut seg_report = json!({
            "segment": i,
            "source": cp.source.to_string(),
            "sites": cp.len(),
            "quad_points": cp.quad_points,
            "est_error_max": num(cp.est_error.iter().copied().fold(0.0, f64::max)),
        });
        if check {
            let s = compute_chain(seg, cfg.chain_length, EngineChoice::Stieltjes, &opts)?;
            let d = cp
                .omega
                .iter()
                .zip(&s.omega)
                .chain(cp.t.iter().zip(&s.t))
                .map(|(a, b)| if a == b { 0.0 } else { (a - b).abs() / b.abs() })
                .fold(0.0, f64::max);
            extra.push(format!("check: stieltjes max_rel_diff={}", fmt17(d)));
            seg_report["check_stieltjes_max_rel_diff"] = num(d);
        }
        let m = Measure::induced(seg).map_err(|e| CliError::Config(e.to_string()))?;
        seg_report["szego"] = szego_value(&m, Some(&cp));
        let path = match (&out, gapped) {
            (Some(p), true) => Some(with_suffix(p, &format!(".seg{i}"))),
            (Some(p), false) => Some(p.clone()),
            (None, _) => None,
        };
        if let Some(p) = &path {
            seg_report["file"] = json!(p.file_name().map(|f| f.to_string_lossy().into_owned()));
        }
        files.push((path, render(&cp, cfg.format, &extra)));
        report_segments.push(seg_report);
    }
    match &out {
        Some(p) => {
            let report = json!({
                "engine_request": cfg.engine.label(),
                "tolerance": num(cfg.tolerance),
                "chain_length": cfg.chain_length,
                "segments": report_segments,
            });
            let report_text = serde_json::to_string_pretty(&report).expect("serialisable") + "\n";
            for (path, text) in &files {
                write_atomic(path.as_ref().expect("set with out"), text)?;
            }
            write_atomic(&with_suffix(p, ".report.json"), &report_text)?;
        }
        None => {
            for (i, (_, text)) in files.iter().enumerate() {
                if gapped {
                    writeln!(stdout, "# segment {i}")?;
                }
                stdout.write_all(text.as_bytes())?;
            }
        }
    }
    Ok(())
}

pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Map { config, n, engine, out, format, check } => {
            let cfg = load_config(&config)?;
            run_map(cfg, n, engine, out, format, check, stdout)
        }
        Command::Check { config, n, engine } => {
            let mut cfg = load_config(&config)?;
            if let Some(e) = engine {
                cfg.engine = EngineChoice::parse(&e)?;
            }
            let n = n.unwrap_or(cfg.chain_length);
            let opts = options(&cfg);
            let mut failed = 0;
            for (i, seg) in cfg.density.split_gapped().iter().enumerate() {
                for c in invariant_suite(seg, n, cfg.engine, &opts)? {
                    let tag = if c.passed { "PASS" } else { "FAIL" };
                    writeln!(stdout, "{tag} seg{i} {}: {}", c.name, c.detail)?;
                    failed += usize::from(!c.passed);
                }
            }
            if failed > 0 {
                return Err(CliError::ChecksFailed(failed));
            }
            Ok(())
        }
        Command::Star { config, n, out } => {
            let cfg = load_config(&config)?;
            let modes = n.unwrap_or(cfg.chain_length);
            let star = star_model(&cfg.density, cfg.statistics, modes, &options(&cfg))?;
            let stats = match cfg.statistics {
                crate::chain::Statistics::Boson => "boson",
                crate::chain::Statistics::Fermion => "fermion",
            };
            let mut text = format!("# statistics={stats} modes={}\n", star.len());
            text.push_str(&format!("# sum_gamma_sq={}\n", fmt17(star.total_coupling())));
            text.push_str("n,zeta,gamma\n");
            for (i, (z, g)) in star.zetas.iter().zip(&star.gammas).enumerate() {
                text.push_str(&format!("{i},{},{}\n", fmt17(*z), fmt17(*g)));
            }
            match out {
                Some(p) => write_atomic(&p, &text),
                None => Ok(stdout.write_all(text.as_bytes())?),
            }
        }
        Command::Szego { config, n } => {
            let cfg = load_config(&config)?;
            let m = Measure::induced(&cfg.density).map_err(|e| CliError::Config(e.to_string()))?;
            let n = n.unwrap_or(cfg.chain_length);
            let cp = if matches!(m.support(), Support::Bounded { .. }) && jobs::szego_candidate(&m) && n >= 10 {
                Some(compute_chain(&cfg.density, n, cfg.engine, &options(&cfg))?)
            } else {
                None
            };
            let v = szego_value(&m, cp.as_ref());
            writeln!(stdout, "{}", serde_json::to_string_pretty(&v).expect("serialisable"))?;
            Ok(())
        }
        Command::Oracle { case, out } => {
            let text = crate::oracle::fixture::generate(&case)?;
            match out {
                Some(p) => write_atomic(&p, &text),
                None => Ok(stdout.write_all(text.as_bytes())?),
            }
        }
        Command::Compare { config, engines, n, out } => {
            let cfg = load_config(&config)?;
            let list = engines.split(',').map(|e| EngineChoice::parse(e.trim())).collect::<Result<Vec<_>, _>>()?;
            let n = n.unwrap_or(cfg.chain_length);
            let cmp = compare(&cfg.density, n, &list, &options(&cfg))?;
            let text = cmp.to_csv();
            match out {
                Some(p) => write_atomic(&p, &text),
                None => Ok(stdout.write_all(text.as_bytes())?),
            }
        }
    }
}
