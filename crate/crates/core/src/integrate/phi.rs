use super::config::{QuadratureConfig, QuadratureResult};
use super::tasks::integrate_on_fiber;
use crate::error::{Error, Result};
use crate::geometry::{intersect, Fiber, ProjPoint, DEFAULT_RESIDUAL_TOL};
use crate::metrics::{Curvature, HermitianBundle, Weight};
use crate::poly::HomogeneousPoly;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Integrands available from configuration files.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PhiSpec {
    Constant { value: f64 },
    /// `log ‖section‖_bundle`, singular on `div(section)`
    LogNorm {
        bundle: HermitianBundle,
        section: HomogeneousPoly,
    },
    /// The weight function itself, `φ = ψ`.
    Weight { weight: Weight },
}

impl PhiSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            PhiSpec::Constant { value } if !value.is_finite() => {
                Err(Error::input("phi.value", "must be finite"))
            }
            PhiSpec::LogNorm { bundle, section } => {
                bundle.validate("phi.bundle")?;
                if section.is_zero() {
                    return Err(Error::input("phi.section", "zero section"));
                }
                bundle
                    .log_norm(section, &[Complex64::new(1.0, 0.0); 3])
                    .map(|_| ())
                    .map_err(|e| match e {
                        Error::Input { message, .. } => Error::input("phi.section", message),
                        e => e,
                    })
            }
            PhiSpec::Weight { weight } => weight.validate("phi.weight"),
            _ => Ok(()),
        }
    }

    pub fn eval(&self, p: &[Complex64; 3]) -> f64 {
        match self {
            PhiSpec::Constant { value } => *value,
            PhiSpec::LogNorm { bundle, section } => bundle.log_norm_unchecked(section, p),
            PhiSpec::Weight { weight } => weight.value(p),
        }
    }

    /// Points of the fiber where `φ` has a logarithmic singularity.
    pub fn singular_points(&self, fiber: &Fiber) -> Result<Vec<ProjPoint>> {
        match self {
            PhiSpec::LogNorm { section, .. } => Ok(intersect(fiber, section, DEFAULT_RESIDUAL_TOL)?
                .points
                .into_iter()
                .map(|(p, _)| p)
                .collect()),
            _ => Ok(Vec::new()),
        }
    }

    /// `∫_{X_s} φ c_1`.
    pub fn integrate(
        &self,
        fiber: &Fiber,
        curvature: &dyn Curvature,
        cfg: &QuadratureConfig,
    ) -> Result<QuadratureResult> {
        self.validate()?;
        if let PhiSpec::Constant { value } = self {
            if *value == 0.0 {
                return Ok(QuadratureResult::exact(0.0));
            }
        }
        let pts = self.singular_points(fiber)?;
        integrate_on_fiber(fiber, &|p| self.eval(p), curvature, &pts, cfg)
    }

    /// `φ ∘ g` for `g` given by three forms of one degree.
    pub fn compose(&self, maps: &[HomogeneousPoly; 3]) -> Result<ComposedPhi> {
        let section = match self {
            PhiSpec::LogNorm { section, .. } => Some(section.compose(maps)?),
            _ => None,
        };
        Ok(ComposedPhi {
            phi: self.clone(),
            maps: maps.clone(),
            composed_section: section,
        })
    }
}

/// `φ ∘ g`; see [`PhiSpec::compose`].
#[derive(Debug, Clone)]
pub struct ComposedPhi {
    phi: PhiSpec,
    maps: [HomogeneousPoly; 3],
    composed_section: Option<HomogeneousPoly>,
}

impl ComposedPhi {
    pub fn eval(&self, p: &[Complex64; 3]) -> f64 {
        let g = [0, 1, 2].map(|i| self.maps[i].eval_unchecked(p));
        self.phi.eval(&g)
    }

    pub fn singular_points(&self, fiber: &Fiber) -> Result<Vec<ProjPoint>> {
        match &self.composed_section {
            Some(s) if s.degree() > 0 => Ok(intersect(fiber, s, DEFAULT_RESIDUAL_TOL)?
                .points
                .into_iter()
                .map(|(p, _)| p)
                .collect()),
            _ => Ok(Vec::new()),
        }
    }

    pub fn integrate(
        &self,
        fiber: &Fiber,
        curvature: &dyn Curvature,
        cfg: &QuadratureConfig,
    ) -> Result<QuadratureResult> {
        let pts = self.singular_points(fiber)?;
        integrate_on_fiber(fiber, &|p| self.eval(p), curvature, &pts, cfg)
    }
}
