use crate::error::{Error, Result};
use crate::geometry::{intersect, Fiber, ProjPoint, DEFAULT_RESIDUAL_TOL};
use crate::integrate::{PhiSpec, QuadratureConfig, QuadratureResult};
use crate::metrics::{HermitianBundle, PulledBackBundle};
use crate::poly::HomogeneousPoly;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Target of a finite map.
#[derive(Debug, Clone)]
pub enum CoverTarget {
    Curve(Fiber),
    /// Everything is sent to one point.
    Point(ProjPoint),
}

/// `g: V → T` given on the plane by three forms of one degree.
#[derive(Debug, Clone)]
pub struct FiniteCover {
    pub source: Fiber,
    pub target: CoverTarget,
    pub maps: [HomogeneousPoly; 3],
    /// generic number of preimages of a target point
    pub declared_degree: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectionCheck {
    /// `∫_V g*φ c_1(g*b)`
    pub lhs: QuadratureResult,
    /// `k ∫_T φ c_1(b)`; absent when the target is a point
    pub rhs: Option<QuadratureResult>,
    pub ratio: Option<f64>,
    /// preimage count of a generic target point
    pub generic_degree: Option<usize>,
}

fn generic_line() -> HomogeneousPoly {
    HomogeneousPoly::linear(&[
        Complex64::new(0.37, -0.21),
        Complex64::new(-0.64, 0.18),
        Complex64::new(0.29, 0.53),
    ])
}

/// Preimages of a generic point of `T`, counted with multiplicity.
fn generic_preimages(cover: &FiniteCover, target: &Fiber) -> Result<usize> {
    let q = intersect(target, &generic_line(), DEFAULT_RESIDUAL_TOL)?
        .points
        .into_iter()
        .map(|(p, _)| p)
        .next()
        .ok_or_else(|| Error::numerical("target curve has no point on a generic line"))?;
    let qc = q.coords();
    // [g_i : g_j] = [q_i : q_j] for the best-conditioned pair
    let (i, j) = [(0, 1), (0, 2), (1, 2)]
        .into_iter()
        .max_by(|a, b| {
            let w = |(i, j): (usize, usize)| qc[i].norm().min(qc[j].norm());
            w(*a).total_cmp(&w(*b))
        })
        .unwrap_or((0, 1));
    let h = cover.maps[i]
        .scale(qc[j])
        .add(&cover.maps[j].scale(-qc[i]))?;
    let div = intersect(&cover.source, &h, DEFAULT_RESIDUAL_TOL)?;
    let mut count = 0;
    for (p, m) in &div.points {
        let g = [0, 1, 2].map(|k| cover.maps[k].eval_unchecked(&p.coords()));
        let Some(gp) = ProjPoint::new(g) else {
            continue;
        };
        if gp.residual(&target.curve) > 1e-6 {
            return Err(Error::input(
                "maps",
                format!("the image of {p} does not lie on the target curve"),
            ));
        }
        if gp.approx_eq(&q, 1e-6) {
            count += m;
        }
    }
    Ok(count)
}

/// Compares `∫_V g*φ c_1(g*b)` with `k ∫_T φ c_1(b)`; for a point target
/// only the left side is computed (it vanishes).
pub fn projection_check(
    cover: &FiniteCover,
    phi: &PhiSpec,
    b: &HermitianBundle,
    cfg: &QuadratureConfig,
) -> Result<ProjectionCheck> {
    phi.validate()?;
    b.validate("bundle")?;
    let k = cover.maps[0].degree();
    if cover.maps.iter().any(|m| m.num_vars() != 3 || m.degree() != k) {
        return Err(Error::input("maps", "components must be ternary forms of one degree"));
    }
    let pulled = PulledBackBundle::new(b.clone(), cover.maps.clone())?;
    let composed = phi.compose(&cover.maps)?;
    match &cover.target {
        CoverTarget::Point(q) => {
            if k != 0 {
                return Err(Error::input("maps", "a map onto a point must be constant (degree 0)"));
            }
            let image = ProjPoint::new(pulled.image(&[Complex64::new(1.0, 0.0); 3]))
                .ok_or_else(|| Error::input("maps", "all components vanish"))?;
            if !image.approx_eq(q, 1e-12) {
                return Err(Error::input("maps", format!("constant map hits {image}, not {q}")));
            }
            let lhs = composed.integrate(&cover.source, &pulled, cfg)?;
            Ok(ProjectionCheck {
                lhs,
                rhs: None,
                ratio: None,
                generic_degree: None,
            })
        }
        CoverTarget::Curve(target) => {
            let count = generic_preimages(cover, target)?;
            if count != cover.declared_degree {
                return Err(Error::input(
                    "declared_degree",
                    format!(
                        "declared {} but a generic target point has {count} preimages",
                        cover.declared_degree
                    ),
                ));
            }
            let lhs = composed.integrate(&cover.source, &pulled, cfg)?;
            let t = phi.integrate(target, b, cfg)?;
            let kk = cover.declared_degree as f64;
            let rhs = QuadratureResult {
                value: kk * t.value,
                error_estimate: kk * t.error_estimate,
                cells: t.cells,
                flags: t.flags,
            };
            let ratio = (rhs.value != 0.0).then(|| lhs.value / rhs.value);
            Ok(ProjectionCheck {
                lhs,
                rhs: Some(rhs),
                ratio,
                generic_degree: Some(count),
            })
        }
    }
}
