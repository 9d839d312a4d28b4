use std::f64::consts::PI;

use super::integrate::adaptive_integral;
use super::tabulated::TabulatedDensity;
use super::MeasureError;

/// `J(ω) = 2πα ω_c^{1−s} ω^s`, the standard spin-boson parametrisation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLaw {
    pub alpha: f64,
    pub s: f64,
    pub omega_c: f64,
}

impl PowerLaw {
    pub fn new(alpha: f64, s: f64, omega_c: f64) -> Result<Self, MeasureError> {
        let law = Self { alpha, s, omega_c };
        law.validate()?;
        Ok(law)
    }

    pub fn validate(&self) -> Result<(), MeasureError> {
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(MeasureError::InvalidParameter(format!("alpha must be > 0, got {}", self.alpha)));
        }
        if !(self.s >= 0.0 && self.s.is_finite()) {
            return Err(MeasureError::InvalidParameter(format!("s must be >= 0, got {}", self.s)));
        }
        if !(self.omega_c > 0.0 && self.omega_c.is_finite()) {
            return Err(MeasureError::InvalidParameter(format!(
                "omega_c must be > 0, got {}",
                self.omega_c
            )));
        }
        Ok(())
    }

    fn power(&self, w: f64) -> f64 {
        2.0 * PI * self.alpha * self.omega_c.powf(1.0 - self.s) * w.powf(self.s)
    }
}

/// A piece of a gapped density: `density` restricted to `[lo, hi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GapSegment {
    pub density: SpectralDensity,
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointMass {
    pub omega: f64,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpectralDensity {
    /// Power law on `[0, ω_c]`.
    PowerLawHardCutoff(PowerLaw),
    /// Power law times `e^{−ω/ω_c}` on `[0, ∞)`.
    PowerLawExpCutoff(PowerLaw),
    /// NRG-style logarithmic discretisation with parameter `delta > 1`.
    LogDiscretised { law: PowerLaw, delta: f64 },
    /// Linear discretisation into modes `0..=n` at `ζ_k = ω_c k/(n+1)`.
    LinearDiscretised { law: PowerLaw, n: usize },
    Tabulated(TabulatedDensity),
    Gapped(Vec<GapSegment>),
    PointMasses(Vec<PointMass>),
}

/// Log-discretised modes are dropped once `Δ^{−k(1+s)}` falls below this.
pub(crate) const LOG_WEIGHT_FLOOR: f64 = 1e-300;

impl SpectralDensity {
    pub fn validate(&self) -> Result<(), MeasureError> {
        match self {
            Self::PowerLawHardCutoff(law) | Self::PowerLawExpCutoff(law) => law.validate(),
            Self::LogDiscretised { law, delta } => {
                law.validate()?;
                if !(*delta > 1.0 && delta.is_finite()) {
                    return Err(MeasureError::InvalidParameter(format!("delta must be > 1, got {delta}")));
                }
                Ok(())
            }
            Self::LinearDiscretised { law, n } => {
                law.validate()?;
                if *n < 1 {
                    return Err(MeasureError::InvalidParameter("need at least two modes".into()));
                }
                Ok(())
            }
            Self::Tabulated(_) => Ok(()),
            Self::Gapped(segs) => validate_segments(segs),
            Self::PointMasses(points) => {
                if points.is_empty() {
                    return Err(MeasureError::NonIntegrable("zero total mass (no point masses)".into()));
                }
                for p in points {
                    if !(p.omega >= 0.0 && p.omega.is_finite()) {
                        return Err(MeasureError::InvalidParameter(format!("invalid mode energy {}", p.omega)));
                    }
                    if p.weight < 0.0 {
                        return Err(MeasureError::NegativeDensity { omega: p.omega, value: p.weight });
                    }
                    if !(p.weight > 0.0 && p.weight.is_finite()) {
                        return Err(MeasureError::InvalidParameter(format!(
                            "point-mass weight must be positive, got {}",
                            p.weight
                        )));
                    }
                }
                Ok(())
            }
        }
    }

    pub fn is_discrete(&self) -> bool {
        matches!(
            self,
            Self::LogDiscretised { .. } | Self::LinearDiscretised { .. } | Self::PointMasses(_)
        )
    }

    /// Value of a continuous density at `w`; `None` for discrete kinds.
    pub fn value(&self, w: f64) -> Option<f64> {
        match self {
            Self::PowerLawHardCutoff(law) => {
                Some(if (0.0..=law.omega_c).contains(&w) { law.power(w) } else { 0.0 })
            }
            Self::PowerLawExpCutoff(law) => {
                Some(if w >= 0.0 { law.power(w) * (-w / law.omega_c).exp() } else { 0.0 })
            }
            Self::Tabulated(t) => Some(t.eval(w)),
            Self::Gapped(segs) => Some(
                segs.iter()
                    .find(|g| w >= g.lo && w <= g.hi)
                    .and_then(|g| g.density.value(w))
                    .unwrap_or(0.0),
            ),
            _ => None,
        }
    }

    /// Energy scale `g` of the linear dispersion `ω = g·x`.
    pub fn reference_scale(&self) -> f64 {
        match self {
            Self::PowerLawHardCutoff(law)
            | Self::PowerLawExpCutoff(law)
            | Self::LogDiscretised { law, .. }
            | Self::LinearDiscretised { law, .. } => law.omega_c,
            Self::Tabulated(t) => t.omega_max(),
            Self::Gapped(segs) => segs.iter().map(|g| g.density.reference_scale().max(g.hi)).fold(0.0, f64::max),
            Self::PointMasses(points) => {
                let m = points.iter().map(|p| p.omega).fold(0.0, f64::max);
                if m > 0.0 {
                    m
                } else {
                    1.0
                }
            }
        }
    }

    /// Star modes `(ζ_k, γ_k²)` of a discrete density, in energy units.
    pub fn star_modes(&self) -> Option<Vec<(f64, f64)>> {
        match self {
            Self::LogDiscretised { law, delta } => {
                let (zeta_s, gamma_s_sq) = log_star_scales(law, *delta);
                let count = log_mode_count(law.s, *delta);
                Some(
                    (0..count)
                        .map(|k| {
                            let k = k as f64;
                            let z = zeta_s * (-k * delta.ln()).exp();
                            let g2 = gamma_s_sq * (-k * (1.0 + law.s) * delta.ln()).exp();
                            (z, g2)
                        })
                        .collect(),
                )
            }
            Self::LinearDiscretised { law, n } => {
                let np1 = (*n + 1) as f64;
                let pref = 2.0 * PI * law.alpha * law.omega_c * law.omega_c / np1.powf(law.s + 1.0);
                let mut binom = 1.0;
                let mut out = Vec::with_capacity(*n + 1);
                for k in 0..=*n {
                    if k > 0 {
                        binom *= (law.s + k as f64) / k as f64;
                    }
                    out.push((law.omega_c * k as f64 / np1, pref * binom));
                }
                Some(out)
            }
            Self::PointMasses(points) => Some(points.iter().map(|p| (p.omega, p.weight)).collect()),
            _ => None,
        }
    }

    /// Total integrated density `η₀ = ∫J(ω)dω`.
    pub fn eta0(&self) -> Result<f64, MeasureError> {
        self.validate()?;
        let v = match self {
            Self::PowerLawHardCutoff(law) => 2.0 * PI * law.alpha * law.omega_c * law.omega_c / (law.s + 1.0),
            Self::PowerLawExpCutoff(law) => {
                2.0 * PI * law.alpha * law.omega_c * law.omega_c * libm::tgamma(law.s + 1.0)
            }
            Self::LogDiscretised { .. } | Self::LinearDiscretised { .. } | Self::PointMasses(_) => {
                crate::numfmt::ksum(self.star_modes().unwrap().into_iter().map(|m| m.1))
            }
            Self::Tabulated(t) => tabulated_integral(t),
            Self::Gapped(segs) => {
                let mut total = 0.0;
                for seg in segs {
                    total += segment_eta0(seg)?;
                }
                total
            }
        };
        if !v.is_finite() {
            return Err(MeasureError::NonIntegrable(format!("integrated density is {v}")));
        }
        if v <= 0.0 {
            return Err(MeasureError::NonIntegrable("zero total mass".into()));
        }
        Ok(v)
    }

    pub fn split_gapped(&self) -> Vec<SpectralDensity> {
        match self {
            Self::Gapped(segs) => segs.iter().map(|g| Self::Gapped(vec![g.clone()])).collect(),
            other => vec![other.clone()],
        }
    }

    /// The same density with `J` multiplied by `lambda > 0`.
    pub fn scaled(&self, lambda: f64) -> SpectralDensity {
        let law_scaled = |law: &PowerLaw| PowerLaw { alpha: law.alpha * lambda, ..*law };
        match self {
            Self::PowerLawHardCutoff(law) => Self::PowerLawHardCutoff(law_scaled(law)),
            Self::PowerLawExpCutoff(law) => Self::PowerLawExpCutoff(law_scaled(law)),
            Self::LogDiscretised { law, delta } => Self::LogDiscretised { law: law_scaled(law), delta: *delta },
            Self::LinearDiscretised { law, n } => Self::LinearDiscretised { law: law_scaled(law), n: *n },
            Self::Tabulated(t) => Self::Tabulated(
                TabulatedDensity::new(t.omega().iter().zip(t.values()).map(|(&w, &j)| (w, j * lambda)).collect())
                    .expect("scaling preserves validity"),
            ),
            Self::Gapped(segs) => Self::Gapped(
                segs.iter()
                    .map(|g| GapSegment { density: g.density.scaled(lambda), lo: g.lo, hi: g.hi })
                    .collect(),
            ),
            Self::PointMasses(p) => Self::PointMasses(
                p.iter().map(|m| PointMass { omega: m.omega, weight: m.weight * lambda }).collect(),
            ),
        }
    }
}

/// `(ζ_s, γ_s²)` of the logarithmic discretisation.
pub(crate) fn log_star_scales(law: &PowerLaw, delta: f64) -> (f64, f64) {
    let s = law.s;
    let ln_d = delta.ln();
    // 1 − Δ^{−p} without cancellation
    let one_minus = |p: f64| -(-p * ln_d).exp_m1();
    let zeta_s = (s + 1.0) / (s + 2.0) * one_minus(s + 2.0) / one_minus(s + 1.0) * law.omega_c;
    let gamma_s_sq = 2.0 * PI * law.alpha / (1.0 + s) * law.omega_c * law.omega_c * one_minus(1.0 + s);
    (zeta_s, gamma_s_sq)
}

/// Number of log-discretised modes with `Δ^{−k(1+s)} ≥ 1e−300`.
pub(crate) fn log_mode_count(s: f64, delta: f64) -> usize {
    let per = (1.0 + s) * delta.ln();
    (-LOG_WEIGHT_FLOOR.ln() / per).floor() as usize + 1
}

fn validate_segments(segs: &[GapSegment]) -> Result<(), MeasureError> {
    if segs.is_empty() {
        return Err(MeasureError::NonIntegrable("gapped density with no segments".into()));
    }
    for (i, seg) in segs.iter().enumerate() {
        seg.density.validate()?;
        if !(seg.lo >= 0.0 && seg.lo < seg.hi && seg.hi.is_finite()) {
            return Err(MeasureError::InvalidParameter(format!(
                "segment {i}: need 0 <= lo < hi < inf, got [{}, {}]",
                seg.lo, seg.hi
            )));
        }
        match &seg.density {
            SpectralDensity::PowerLawHardCutoff(law) if seg.hi > law.omega_c => {
                return Err(MeasureError::InvalidParameter(format!(
                    "segment {i}: hi = {} exceeds the cutoff {}",
                    seg.hi, law.omega_c
                )));
            }
            SpectralDensity::Tabulated(t) if seg.lo < t.omega_min() || seg.hi > t.omega_max() => {
                return Err(MeasureError::InvalidParameter(format!(
                    "segment {i}: [{}, {}] leaves the tabulated range",
                    seg.lo, seg.hi
                )));
            }
            SpectralDensity::PowerLawHardCutoff(_)
            | SpectralDensity::PowerLawExpCutoff(_)
            | SpectralDensity::Tabulated(_) => {}
            _ => {
                return Err(MeasureError::InvalidParameter(format!(
                    "segment {i}: only continuous densities can be segments"
                )))
            }
        }
        if i > 0 && seg.lo <= segs[i - 1].hi {
            return Err(MeasureError::InvalidParameter(format!(
                "segment {i} overlaps or touches segment {}",
                i - 1
            )));
        }
    }
    Ok(())
}

fn tabulated_integral(t: &TabulatedDensity) -> f64 {
    let w = t.omega();
    crate::numfmt::ksum(w.windows(2).map(|p| adaptive_integral(|x| t.eval(x), p[0], p[1], 1e-13).0))
}

fn segment_eta0(seg: &GapSegment) -> Result<f64, MeasureError> {
    Ok(match &seg.density {
        SpectralDensity::PowerLawHardCutoff(law) => {
            let p = law.s + 1.0;
            2.0 * PI * law.alpha * law.omega_c.powf(1.0 - law.s) * (seg.hi.powf(p) - seg.lo.powf(p)) / p
        }
        SpectralDensity::Tabulated(t) => tabulated_integral(&t.restrict(seg.lo, seg.hi)?),
        d => adaptive_integral(|x| d.value(x).unwrap_or(0.0), seg.lo, seg.hi, 1e-13).0,
    })
}
