use super::config::{QuadratureConfig, QuadratureResult};
use super::engine::{integrate, ChartIntegrand, SingularKind, Singularity};
use crate::error::{Error, Result};
use crate::geometry::{
    intersect, singular_locus, BranchedCover, Chart, Fiber, ProjPoint, Projection,
    DEFAULT_RESIDUAL_TOL, DEFAULT_SINGULAR_TOL,
};
use crate::metrics::{Curvature, HermitianBundle};
use crate::poly::HomogeneousPoly;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A real function on the fiber, evaluated on homogeneous coordinates.
pub type Phi<'a> = &'a (dyn Fn(&[Complex64; 3]) -> f64 + Sync);

struct FiberIntegrand<'a> {
    cover: BranchedCover,
    phi: Phi<'a>,
    curvature: &'a dyn Curvature,
}

impl ChartIntegrand for FiberIntegrand<'_> {
    fn eval(&self, chart: Chart, x: Complex64, hint: &mut Vec<Complex64>) -> Result<f64> {
        let mut sheets = Vec::with_capacity(self.cover.sheets());
        self.cover.lift_from(chart, x, hint, &mut sheets)?;
        Ok(sheets
            .iter()
            .map(|s| {
                let rho = self.curvature.density(&s.point, &s.tangent);
                if rho == 0.0 {
                    0.0
                } else {
                    (self.phi)(&s.point) * rho
                }
            })
            .sum())
    }
}

/// Errors unless the fiber is reduced and smooth.
pub fn ensure_smooth(fiber: &Fiber) -> Result<()> {
    let sing = singular_locus(fiber, DEFAULT_SINGULAR_TOL)?;
    if let Some(p) = sing.first() {
        return Err(Error::degenerate(format!(
            "fiber at s = {} is singular at {p}; integration over singular fibers is not supported",
            fiber.s
        )));
    }
    Ok(())
}

/// `∫_{X_s} φ c_1` for any curvature form, with logarithmic singularities of
/// `φ` at `log_points`.
pub fn integrate_on_fiber(
    fiber: &Fiber,
    phi: Phi<'_>,
    curvature: &dyn Curvature,
    log_points: &[ProjPoint],
    cfg: &QuadratureConfig,
) -> Result<QuadratureResult> {
    cfg.validate()?;
    ensure_smooth(fiber)?;
    let cover = BranchedCover::new(fiber, Projection::standard())?;
    let mut sings = Vec::new();
    for chart in Chart::ALL {
        for b in cover.branch_points(chart)? {
            sings.push(Singularity {
                chart,
                x: b,
                kind: SingularKind::Branch,
            });
        }
        for p in log_points {
            if let Some(x) = cover.base_coordinate(chart, p) {
                sings.push(Singularity {
                    chart,
                    x,
                    kind: SingularKind::Log,
                });
            }
        }
    }
    let integrand = FiberIntegrand {
        cover,
        phi,
        curvature,
    };
    integrate(&integrand, &sings, cfg)
}

/// `∫_{X_s} φ c_1(b)`.
pub fn fiber_integral(
    fiber: &Fiber,
    phi: Phi<'_>,
    b: &HermitianBundle,
    cfg: &QuadratureConfig,
) -> Result<QuadratureResult> {
    b.validate("bundle")?;
    integrate_on_fiber(fiber, phi, b, &[], cfg)
}

/// `∫_{X_s} log‖l1‖_{b1} c_1(b0)`.
pub fn log_norm_integral(
    fiber: &Fiber,
    b0: &HermitianBundle,
    b1: &HermitianBundle,
    l1: &HomogeneousPoly,
    cfg: &QuadratureConfig,
) -> Result<QuadratureResult> {
    b0.validate("bundle0")?;
    b1.validate("bundle1")?;
    b1.log_norm(l1, &[Complex64::new(1.0, 0.0); 3])?;
    let div = intersect(fiber, l1, DEFAULT_RESIDUAL_TOL)?;
    let points: Vec<ProjPoint> = div.points.iter().map(|(p, _)| *p).collect();
    let phi = |p: &[Complex64; 3]| b1.log_norm_unchecked(l1, p);
    integrate_on_fiber(fiber, &phi, b0, &points, cfg)
}

/// Results of one task across a ladder of tolerances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefineStudy {
    pub tolerances: Vec<f64>,
    pub results: Vec<QuadratureResult>,
    /// `|value_{k+1} - value_k|`
    pub differences: Vec<f64>,
}

impl RefineStudy {
    /// Value at the finest rung.
    pub fn best(&self) -> f64 {
        self.results.last().map_or(f64::NAN, |r| r.value)
    }

    /// Last successive difference, or the last error estimate for a single
    /// rung.
    pub fn uncertainty(&self) -> f64 {
        match (self.differences.last(), self.results.last()) {
            (Some(d), Some(r)) => d.max(r.error_estimate),
            (None, Some(r)) => r.error_estimate,
            _ => f64::NAN,
        }
    }

    pub fn differences_shrink(&self) -> bool {
        self.differences.windows(2).all(|w| w[1] <= w[0])
    }
}

/// Runs `task` once per tolerance; each rung sets both `rel_tol` and
/// `abs_tol` to the rung value.
pub fn refine_study<F>(task: F, base: &QuadratureConfig, ladder: &[f64]) -> Result<RefineStudy>
where
    F: Fn(&QuadratureConfig) -> Result<QuadratureResult>,
{
    if ladder.is_empty() {
        return Err(Error::input("ladder", "empty"));
    }
    if ladder.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::input("ladder", "tolerances must be strictly decreasing"));
    }
    let mut results = Vec::with_capacity(ladder.len());
    for &t in ladder {
        let cfg = QuadratureConfig {
            rel_tol: t,
            abs_tol: t,
            ..base.clone()
        };
        results.push(task(&cfg)?);
    }
    let differences = results
        .windows(2)
        .map(|w| (w[1].value - w[0].value).abs())
        .collect();
    Ok(RefineStudy {
        tolerances: ladder.to_vec(),
        results,
        differences,
    })
}
