//! Star (hub-and-spoke) form of a bath.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::ChainError;
use crate::measures::{Measure, SpectralDensity};
use crate::orthopoly::{gauss_rule, lanczos_measure, DiscretisationOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistics {
    #[default]
    Boson,
    Fermion,
}

/// `H = H_loc + Â Σₙ γₙ(bₙ + bₙ†)/√π + Σₙ ζₙ bₙ†bₙ`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretisedStarModel {
    pub gammas: Vec<f64>,
    pub zetas: Vec<f64>,
    pub statistics: Statistics,
}

impl DiscretisedStarModel {
    pub fn len(&self) -> usize {
        self.zetas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zetas.is_empty()
    }

    /// `Σ γₙ²`, equal to `η₀`.
    pub fn total_coupling(&self) -> f64 {
        crate::numfmt::ksum(self.gammas.iter().map(|g| g * g))
    }
}

/// Star model of `j`.
///
/// Discrete densities give their own modes. A continuous density is
/// replaced by the `modes`-point Gauss rule of its induced measure, which
/// reproduces the first `modes` chain sites exactly.
pub fn star_model(
    j: &SpectralDensity,
    statistics: Statistics,
    modes: usize,
    opts: &DiscretisationOptions,
) -> Result<DiscretisedStarModel, ChainError> {
    if let Some(list) = j.star_modes() {
        let (zetas, gammas) = list.into_iter().map(|(z, g2)| (z, g2.sqrt())).unzip();
        return Ok(DiscretisedStarModel { gammas, zetas, statistics });
    }
    if modes == 0 {
        return Err(ChainError::InvalidArgument("need at least one star mode".into()));
    }
    let m = Measure::induced(j).map_err(|e| ChainError::Ortho(e.into()))?;
    let rc = lanczos_measure(&m, modes, opts)?;
    let rule = gauss_rule(&rc, modes)?;
    let g = m.g();
    Ok(DiscretisedStarModel {
        zetas: rule.nodes.iter().map(|x| g * x).collect(),
        gammas: rule.weights.iter().map(|w| (PI * w).sqrt()).collect(),
        statistics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{chain_from_coefficients, jacobi_chain};
    use crate::measures::PowerLaw;
    use crate::orthopoly::lanczos_rkpw;
    use crate::orthopoly::QuadratureRule;

    #[test]
    fn log_modes() {
        let law = PowerLaw::new(0.1, 1.0, 1.0).unwrap();
        let j = SpectralDensity::LogDiscretised { law, delta: 2.0 };
        let star = star_model(&j, Statistics::Boson, 0, &Default::default()).unwrap();
        let (z0, g0) = (star.zetas[0], star.gammas[0] * star.gammas[0]);
        for n in 0..20 {
            assert!((star.zetas[n] - z0 * 2f64.powi(-(n as i32))).abs() < 1e-15 * z0);
            let want = g0 * 2f64.powi(-2 * n as i32);
            assert!((star.gammas[n] * star.gammas[n] - want).abs() < 1e-14 * want);
        }
        let eta0 = j.eta0().unwrap();
        assert!((star.total_coupling() - eta0).abs() < 1e-14 * eta0);
    }

    #[test]
    fn continuous_gauss_star_reproduces_chain() {
        let law = PowerLaw::new(0.1, 1.0, 1.0).unwrap();
        let j = SpectralDensity::PowerLawHardCutoff(law);
        let star = star_model(&j, Statistics::Fermion, 12, &Default::default()).unwrap();
        assert_eq!(star.statistics, Statistics::Fermion);
        let rule = QuadratureRule::from_pairs(
            star.zetas.iter().zip(&star.gammas).map(|(z, g)| (*z, g * g / PI)).collect(),
        );
        let cp = chain_from_coefficients(&lanczos_rkpw(&rule, 12).unwrap(), 1.0).unwrap();
        let want = jacobi_chain(0.1, 1.0, 1.0, 12).unwrap();
        for n in 0..12 {
            assert!((cp.omega[n] - want.omega[n]).abs() < 1e-12);
        }
        for n in 0..11 {
            assert!((cp.t[n] - want.t[n]).abs() < 1e-12);
        }
    }
}
