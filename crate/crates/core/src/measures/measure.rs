use std::fmt;
use std::sync::Arc;

use super::density::SpectralDensity;
use super::tabulated::TabulatedDensity;
use super::MeasureError;
use crate::numfmt::ksum;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Support {
    Bounded { a: f64, b: f64 },
    HalfLine { a: f64 },
}

impl Support {
    pub fn lo(&self) -> f64 {
        match *self {
            Support::Bounded { a, .. } | Support::HalfLine { a } => a,
        }
    }

    pub fn hi(&self) -> f64 {
        match *self {
            Support::Bounded { b, .. } => b,
            Support::HalfLine { .. } => f64::INFINITY,
        }
    }

    pub fn is_bounded(&self) -> bool {
        matches!(self, Support::Bounded { .. })
    }
}

/// Density of a continuous measure component with respect to `dx`.
#[derive(Clone)]
pub enum Weight {
    /// `scale · x^s`
    PowerLaw { scale: f64, s: f64 },
    /// `scale · x^s · e^{−rate·x}`
    PowerLawExp { scale: f64, s: f64, rate: f64 },
    /// `g · J(g·x) / π` for a tabulated `J`.
    Tabulated { table: Arc<TabulatedDensity>, g: f64 },
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::PowerLaw { scale, s } => write!(f, "PowerLaw {{ scale: {scale}, s: {s} }}"),
            Weight::PowerLawExp { scale, s, rate } => {
                write!(f, "PowerLawExp {{ scale: {scale}, s: {s}, rate: {rate} }}")
            }
            Weight::Tabulated { g, .. } => write!(f, "Tabulated {{ g: {g} }}"),
            Weight::Custom(_) => write!(f, "Custom"),
        }
    }
}

impl Weight {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Weight::PowerLaw { scale, s } => scale * x.powf(*s),
            Weight::PowerLawExp { scale, s, rate } => scale * x.powf(*s) * (-rate * x).exp(),
            Weight::Tabulated { table, g } => g * table.eval(g * x) / std::f64::consts::PI,
            Weight::Custom(f) => f(x),
        }
    }

    /// `ln w(x)`, computed without underflow where a closed form allows.
    pub fn ln_eval(&self, x: f64) -> f64 {
        match self {
            Weight::PowerLaw { scale, s } => scale.ln() + if *s == 0.0 { 0.0 } else { s * x.ln() },
            Weight::PowerLawExp { scale, s, rate } => {
                scale.ln() + if *s == 0.0 { 0.0 } else { s * x.ln() } - rate * x
            }
            _ => self.eval(x).ln(),
        }
    }
}

/// A contiguous piece of a continuous measure.
#[derive(Debug, Clone)]
pub struct Component {
    pub lo: f64,
    /// May be `+∞`.
    pub hi: f64,
    pub weight: Weight,
    /// Non-analytic behaviour at the endpoint; quadrature grades towards it.
    pub singular_lo: bool,
    pub singular_hi: bool,
    /// Interior points where the weight is not smooth.
    pub breakpoints: Vec<f64>,
}

impl Component {
    pub fn new(lo: f64, hi: f64, weight: Weight) -> Self {
        let singular_lo = match &weight {
            Weight::PowerLaw { s, .. } | Weight::PowerLawExp { s, .. } => lo == 0.0 && (2.0 * s).fract() != 0.0,
            _ => false,
        };
        Self { lo, hi, weight, singular_lo, singular_hi: false, breakpoints: Vec::new() }
    }

    /// Closed-form moment `∫x^r w dx` where one exists.
    fn moment_closed(&self, r: u32) -> Option<f64> {
        let r = r as f64;
        match self.weight {
            Weight::PowerLaw { scale, s } if self.hi.is_finite() => {
                let p = s + r + 1.0;
                Some(scale * (self.hi.powf(p) - self.lo.powf(p)) / p)
            }
            Weight::PowerLawExp { scale, s, rate } if self.lo == 0.0 && self.hi.is_infinite() => {
                let p = s + r + 1.0;
                Some(scale * (libm::lgamma(p) - p * rate.ln()).exp())
            }
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub enum MeasureKind {
    Continuous(Vec<Component>),
    /// Point masses with strictly increasing nodes and positive weights.
    Discrete { nodes: Vec<f64>, weights: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Advisory {
    /// The density vanishes on `[lo, hi]` (energy units); consider
    /// `split_gapped` and mapping each piece to its own chain.
    GappedSupport { lo: f64, hi: f64 },
}

/// The orthogonality measure `dμ(x) = w(x)dx` with dispersion `ω = g·x`.
#[derive(Debug, Clone)]
pub struct Measure {
    support: Support,
    kind: MeasureKind,
    g: f64,
    mass: f64,
    gaps: Vec<(f64, f64)>,
    advisories: Vec<Advisory>,
}

impl Measure {
    /// Continuous measure from explicit components, ordered by support.
    pub fn from_components(components: Vec<Component>, g: f64) -> Result<Self, MeasureError> {
        if components.is_empty() {
            return Err(MeasureError::NonIntegrable("no support".into()));
        }
        let a = components[0].lo;
        let b = components.last().unwrap().hi;
        let support = if b.is_finite() { Support::Bounded { a, b } } else { Support::HalfLine { a } };
        let gaps = components
            .windows(2)
            .filter(|p| p[1].lo > p[0].hi)
            .map(|p| (p[0].hi, p[1].lo))
            .collect();
        let mut m = Self {
            support,
            kind: MeasureKind::Continuous(components),
            g,
            mass: 0.0,
            gaps,
            advisories: Vec::new(),
        };
        m.mass = m.moment(0);
        m.check_mass()?;
        Ok(m)
    }

    /// `scale · x^s` on `[lo, hi]`, dispersion `g = 1`.
    pub fn power_law(scale: f64, s: f64, lo: f64, hi: f64) -> Result<Self, MeasureError> {
        Self::from_components(vec![Component::new(lo, hi, Weight::PowerLaw { scale, s })], 1.0)
    }

    /// `scale · x^s · e^{−x}` on `[0, ∞)`, dispersion `g = 1`.
    pub fn power_law_exp(scale: f64, s: f64) -> Result<Self, MeasureError> {
        Self::from_components(
            vec![Component::new(0.0, f64::INFINITY, Weight::PowerLawExp { scale, s, rate: 1.0 })],
            1.0,
        )
    }

    /// Arbitrary weight on `[lo, hi]`, dispersion `g = 1`.
    pub fn custom<F: Fn(f64) -> f64 + Send + Sync + 'static>(f: F, lo: f64, hi: f64) -> Result<Self, MeasureError> {
        Self::from_components(vec![Component::new(lo, hi, Weight::Custom(Arc::new(f)))], 1.0)
    }

    /// Point masses `(x_k, w_k)`; coincident nodes are merged.
    pub fn discrete(points: Vec<(f64, f64)>, g: f64) -> Result<Self, MeasureError> {
        let mut pts: Vec<(f64, f64)> = points.into_iter().filter(|p| p.1 != 0.0).collect();
        for &(x, w) in &pts {
            if !x.is_finite() || !w.is_finite() {
                return Err(MeasureError::InvalidParameter("non-finite point mass".into()));
            }
            if w < 0.0 {
                return Err(MeasureError::NegativeDensity { omega: g * x, value: w });
            }
        }
        pts.sort_by(|p, q| p.0.total_cmp(&q.0));
        let mut nodes: Vec<f64> = Vec::with_capacity(pts.len());
        let mut weights: Vec<f64> = Vec::with_capacity(pts.len());
        for (x, w) in pts {
            if nodes.last() == Some(&x) {
                *weights.last_mut().unwrap() += w;
            } else {
                nodes.push(x);
                weights.push(w);
            }
        }
        if nodes.is_empty() {
            return Err(MeasureError::NonIntegrable("zero total mass (no point masses)".into()));
        }
        let support = Support::Bounded { a: nodes[0], b: *nodes.last().unwrap() };
        let mass = ksum(weights.iter().copied());
        let m = Self {
            support,
            kind: MeasureKind::Discrete { nodes, weights },
            g,
            mass,
            gaps: Vec::new(),
            advisories: Vec::new(),
        };
        m.check_mass()?;
        Ok(m)
    }

    pub fn induced(j: &SpectralDensity) -> Result<Self, MeasureError> {
        use SpectralDensity as J;
        j.validate()?;
        let g = j.reference_scale();
        match j {
            J::PowerLawHardCutoff(law) => {
                let scale = 2.0 * law.alpha * law.omega_c * law.omega_c;
                Self::from_components(vec![Component::new(0.0, 1.0, Weight::PowerLaw { scale, s: law.s })], g)
            }
            J::PowerLawExpCutoff(law) => {
                let scale = 2.0 * law.alpha * law.omega_c * law.omega_c;
                let w = Weight::PowerLawExp { scale, s: law.s, rate: 1.0 };
                Self::from_components(vec![Component::new(0.0, f64::INFINITY, w)], g)
            }
            J::LogDiscretised { .. } | J::LinearDiscretised { .. } | J::PointMasses(_) => {
                let modes = j.star_modes().unwrap();
                let pi = std::f64::consts::PI;
                Self::discrete(modes.into_iter().map(|(z, g2)| (z / g, g2 / pi)).collect(), g)
            }
            J::Tabulated(t) => {
                let mut c = tabulated_component(t.clone(), g);
                c.lo = t.omega_min() / g;
                let mut m = Self::from_components(vec![c], g)?;
                let eps_gap = 1e-12 * g;
                for (lo, hi) in t.zero_runs(eps_gap) {
                    m.gaps.push((lo / g, hi / g));
                    m.advisories.push(Advisory::GappedSupport { lo, hi });
                }
                Ok(m)
            }
            J::Gapped(segs) => {
                let mut comps = Vec::with_capacity(segs.len());
                for seg in segs {
                    let (lo, hi) = (seg.lo / g, seg.hi / g);
                    let c = match &seg.density {
                        J::PowerLawHardCutoff(law) => {
                            let scale = 2.0 * law.alpha * law.omega_c.powf(1.0 - law.s) * g.powf(law.s + 1.0);
                            Component::new(lo, hi, Weight::PowerLaw { scale, s: law.s })
                        }
                        J::PowerLawExpCutoff(law) => {
                            let scale = 2.0 * law.alpha * law.omega_c.powf(1.0 - law.s) * g.powf(law.s + 1.0);
                            let rate = g / law.omega_c;
                            Component::new(lo, hi, Weight::PowerLawExp { scale, s: law.s, rate })
                        }
                        J::Tabulated(t) => {
                            let mut c = tabulated_component(t.restrict(seg.lo, seg.hi)?, g);
                            c.lo = lo;
                            c.hi = hi;
                            c
                        }
                        _ => unreachable!("validated"),
                    };
                    comps.push(c);
                }
                let mut m = Self::from_components(comps, g)?;
                m.advisories = m
                    .gaps
                    .iter()
                    .map(|&(lo, hi)| Advisory::GappedSupport { lo: lo * g, hi: hi * g })
                    .collect();
                Ok(m)
            }
        }
    }

    fn check_mass(&self) -> Result<(), MeasureError> {
        if !self.mass.is_finite() {
            return Err(MeasureError::NonIntegrable(format!("total mass is {}", self.mass)));
        }
        if self.mass <= 0.0 {
            return Err(MeasureError::NonIntegrable("zero total mass".into()));
        }
        Ok(())
    }

    pub fn support(&self) -> Support {
        self.support
    }

    pub fn kind(&self) -> &MeasureKind {
        &self.kind
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    /// Total mass `μ₀ = ∫dμ`.
    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Intervals (in `x`) inside the support where the weight vanishes.
    pub fn gaps(&self) -> &[(f64, f64)] {
        &self.gaps
    }

    pub fn advisories(&self) -> &[Advisory] {
        &self.advisories
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self.kind, MeasureKind::Discrete { .. })
    }

    /// Number of support points, `None` for continuous measures.
    pub fn point_count(&self) -> Option<usize> {
        match &self.kind {
            MeasureKind::Discrete { nodes, .. } => Some(nodes.len()),
            MeasureKind::Continuous(_) => None,
        }
    }

    /// Weight at `x`; zero for discrete measures and outside the support.
    pub fn weight_at(&self, x: f64) -> f64 {
        match &self.kind {
            MeasureKind::Continuous(comps) => comps
                .iter()
                .find(|c| x >= c.lo && x <= c.hi)
                .map(|c| c.weight.eval(x))
                .unwrap_or(0.0),
            MeasureKind::Discrete { .. } => 0.0,
        }
    }

    /// The measure scaled by `lambda > 0` (`dμ → λ dμ`).
    pub fn scaled(&self, lambda: f64) -> Measure {
        let mut m = self.clone();
        m.mass *= lambda;
        m.kind = match &self.kind {
            MeasureKind::Discrete { nodes, weights } => MeasureKind::Discrete {
                nodes: nodes.clone(),
                weights: weights.iter().map(|w| w * lambda).collect(),
            },
            MeasureKind::Continuous(comps) => MeasureKind::Continuous(
                comps
                    .iter()
                    .map(|c| {
                        let weight = match &c.weight {
                            Weight::PowerLaw { scale, s } => Weight::PowerLaw { scale: scale * lambda, s: *s },
                            Weight::PowerLawExp { scale, s, rate } => {
                                Weight::PowerLawExp { scale: scale * lambda, s: *s, rate: *rate }
                            }
                            w => {
                                let w = w.clone();
                                Weight::Custom(Arc::new(move |x| lambda * w.eval(x)))
                            }
                        };
                        Component { weight, ..c.clone() }
                    })
                    .collect(),
            ),
        };
        m
    }

    /// Ordinary moment `μ_r = ∫x^r dμ`: closed form where available,
    /// otherwise a converged discretisation.
    pub fn moment(&self, r: u32) -> f64 {
        match &self.kind {
            MeasureKind::Discrete { nodes, weights } => {
                ksum(nodes.iter().zip(weights).map(|(x, w)| w * x.powi(r as i32)))
            }
            MeasureKind::Continuous(comps) => ksum(comps.iter().map(|c| {
                c.moment_closed(r).unwrap_or_else(|| {
                    let rule = crate::orthopoly::discretise_component(c, 2048, r as usize);
                    ksum(rule.iter().map(|(x, w)| w * x.powi(r as i32)))
                })
            })),
        }
    }

    /// Moments `μ_0 … μ_{count−1}`.
    pub fn moments(&self, count: usize) -> Vec<f64> {
        (0..count as u32).map(|r| self.moment(r)).collect()
    }
}

fn tabulated_component(t: TabulatedDensity, g: f64) -> Component {
    let lo = t.omega_min() / g;
    let hi = t.omega_max() / g;
    let breakpoints = t.omega()[1..t.omega().len() - 1].iter().map(|w| w / g).collect();
    Component {
        lo,
        hi,
        weight: Weight::Tabulated { table: Arc::new(t), g },
        singular_lo: false,
        singular_hi: false,
        breakpoints,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{GapSegment, PointMass, PowerLaw};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn hard_cutoff_weight() {
        let j = SpectralDensity::PowerLawHardCutoff(PowerLaw::new(0.1, 1.0, 2.0).unwrap());
        let m = Measure::induced(&j).unwrap();
        assert_eq!(m.support(), Support::Bounded { a: 0.0, b: 1.0 });
        assert_eq!(m.g(), 2.0);
        // 2 α ω_c² x^s
        assert!((m.weight_at(0.5) - 2.0 * 0.1 * 4.0 * 0.5).abs() < 1e-15);
        assert!((m.mass() - j.eta0().unwrap() / PI).abs() < 1e-15);
    }

    #[test]
    fn exp_cutoff_ohmic_weight() {
        let j = SpectralDensity::PowerLawExpCutoff(PowerLaw::new(0.2, 0.0, 1.0).unwrap());
        let m = Measure::induced(&j).unwrap();
        assert!(matches!(m.support(), Support::HalfLine { a } if a == 0.0));
        assert!((m.weight_at(1.5) - 2.0 * 0.2 * (-1.5f64).exp()).abs() < 1e-15);
        assert!((m.mass() / (j.eta0().unwrap() / PI) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn empty_point_masses_is_zero_mass() {
        let j = SpectralDensity::PointMasses(vec![]);
        assert!(matches!(Measure::induced(&j), Err(MeasureError::NonIntegrable(_))));
    }

    #[test]
    fn discrete_masses_are_normalised_by_pi() {
        let j = SpectralDensity::PointMasses(vec![
            PointMass { omega: 0.5, weight: 2.0 },
            PointMass { omega: 1.0, weight: 1.0 },
        ]);
        let m = Measure::induced(&j).unwrap();
        assert_eq!(m.point_count(), Some(2));
        assert!((m.mass() - 3.0 / PI).abs() < 1e-15);
        assert_eq!(m.support(), Support::Bounded { a: 0.5, b: 1.0 });
    }

    #[test]
    fn tabulated_mass_matches_eta0() {
        let samples: Vec<(f64, f64)> = (0..=100).map(|i| {
            let w = i as f64 / 50.0;
            (w, w * w * (-w).exp())
        }).collect();
        let j = SpectralDensity::Tabulated(TabulatedDensity::new(samples).unwrap());
        let m = Measure::induced(&j).unwrap();
        assert!((m.mass() / (j.eta0().unwrap() / PI) - 1.0).abs() < 1e-6);
        assert!(m.advisories().is_empty());
    }

    #[test]
    fn tabulated_zero_run_raises_advisory() {
        let samples = vec![(0.0, 1.0), (0.2, 1.0), (0.3, 0.0), (0.5, 0.0), (0.6, 1.0), (1.0, 1.0)];
        let j = SpectralDensity::Tabulated(TabulatedDensity::new(samples).unwrap());
        let m = Measure::induced(&j).unwrap();
        assert_eq!(m.advisories(), &[Advisory::GappedSupport { lo: 0.3, hi: 0.5 }]);
    }

    #[test]
    fn gapped_measure_records_gap() {
        let base = SpectralDensity::PowerLawHardCutoff(PowerLaw::new(0.1, 1.0, 1.0).unwrap());
        let j = SpectralDensity::Gapped(vec![
            GapSegment { density: base.clone(), lo: 0.0, hi: 0.3 },
            GapSegment { density: base, lo: 0.6, hi: 1.0 },
        ]);
        let m = Measure::induced(&j).unwrap();
        assert_eq!(m.gaps(), &[(0.3, 0.6)]);
        assert!((m.mass() / (j.eta0().unwrap() / PI) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn numeric_moment_of_custom_weight() {
        let m = Measure::custom(|x| 1.0 / (1.0 - x * x).sqrt(), -1.0, 1.0).unwrap();
        // 1 − x² loses digits next to the endpoints
        assert!((m.mass() - PI).abs() < 1e-10);
        assert!((m.moment(2) - PI / 2.0).abs() < 1e-10);
    }

    proptest! {
        #[test]
        fn induced_weight_is_homogeneous_in_alpha(alpha in 0.01f64..10.0, lambda in 0.1f64..10.0,
                                                  s in 0.0f64..3.0, x in 0.0f64..1.0) {
            let j = SpectralDensity::PowerLawHardCutoff(PowerLaw::new(alpha, s, 1.3).unwrap());
            let m1 = Measure::induced(&j).unwrap();
            let m2 = Measure::induced(&j.scaled(lambda)).unwrap();
            let (w1, w2) = (m1.weight_at(x), m2.weight_at(x));
            prop_assert!((w2 - lambda * w1).abs() <= 1e-13 * w2.abs().max(1e-300));
        }

        #[test]
        fn induced_mass_matches_eta0(alpha in 0.01f64..10.0, s in 0.0f64..4.0, wc in 0.1f64..10.0) {
            let law = PowerLaw::new(alpha, s, wc).unwrap();
            for j in [SpectralDensity::PowerLawHardCutoff(law), SpectralDensity::PowerLawExpCutoff(law)] {
                let m = Measure::induced(&j).unwrap();
                prop_assert!((m.mass() / (j.eta0().unwrap() / PI) - 1.0).abs() < 1e-10);
            }
        }
    }
}
