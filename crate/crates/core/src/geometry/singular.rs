use super::intersect::newton_polish;
use super::{Fiber, ProjPoint, Projection};
use crate::error::{Error, Result};
use crate::poly::{self, BiPoly, HomogeneousPoly, UniPoly, DEFAULT_CLUSTER_TOL};
use num_complex::Complex64;

/// Default residual tolerance for singular points.
pub const DEFAULT_SINGULAR_TOL: f64 = 1e-8;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Restriction of a ternary form to the line `u ↦ P + u Q` for a fixed
/// general pair `P, Q`, as a polynomial in `u`.
fn generic_line_restriction(form: &HomogeneousPoly) -> Result<UniPoly> {
    let p = [c(0.31, 0.2), c(-0.72, 0.1), c(0.45, -0.3)];
    let q = [c(0.52, -0.1), c(0.18, 0.6), c(-0.37, 0.25)];
    let maps: Vec<HomogeneousPoly> = (0..3)
        .map(|i| HomogeneousPoly::linear(&[p[i], q[i], c(0.0, 0.0)]))
        .collect();
    let binary = form.compose(&maps)?;
    let d = form.degree();
    Ok(UniPoly::new(
        (0..=d).map(|k| binary.coeff(&[d - k, k, 0])).collect(),
    ))
}

/// Errors if the form has a repeated factor: a general line then meets it
/// in a repeated point, i.e. the restriction has vanishing discriminant.
pub fn check_reduced(fiber: &Fiber) -> Result<()> {
    let h = generic_line_restriction(&fiber.curve)?;
    if h.degree().is_none_or(|k| k == 0) {
        return Ok(());
    }
    let roots = poly::roots(&h, DEFAULT_CLUSTER_TOL)?;
    if let Some(r) = roots.iter().find(|r| r.multiplicity > 1) {
        return Err(Error::degenerate(format!(
            "fiber at s = {} is not reduced: a general line meets it with multiplicity {}",
            fiber.s, r.multiplicity
        )));
    }
    Ok(())
}

struct GradientSystem {
    frame: Projection,
    grads: Vec<HomogeneousPoly>,
    finite: Vec<BiPoly>,
    infinite: Vec<BiPoly>,
}

impl GradientSystem {
    fn new(curve: &HomogeneousPoly, frame: Projection) -> Result<Self> {
        let ft = frame.transform(curve)?;
        let tgrads = ft.gradient();
        Ok(GradientSystem {
            finite: tgrads.iter().map(|g| g.to_bipoly(0, 1)).collect(),
            infinite: tgrads.iter().map(|g| g.to_bipoly(2, 1)).collect(),
            grads: curve.gradient(),
            frame,
        })
    }

    /// Normalized gradient size at a point of the original plane.
    fn residual(&self, p: &ProjPoint, curve: &HomogeneousPoly) -> f64 {
        self.grads
            .iter()
            .map(|g| p.residual(g))
            .fold(p.residual(curve), f64::max)
    }
}

/// Singular points of the fiber: common zeros of all partial derivatives.
///
/// Pairs of partials are eliminated with resultants, roots are lifted and
/// polished, and candidates are kept when every partial (and the form) has
/// normalized residual at most `tol`. An empty result certifies smoothness
/// at working precision.
pub fn singular_locus(fiber: &Fiber, tol: f64) -> Result<Vec<ProjPoint>> {
    check_reduced(fiber)?;
    let d = fiber.curve.degree() as usize;
    if d <= 1 {
        return Ok(Vec::new());
    }
    let sys = GradientSystem::new(&fiber.curve, Projection::standard())?;
    let bound = (d - 1) * (d - 1);
    let pairs = [(0, 1), (0, 2), (1, 2)];
    let mut chosen = None;
    for (a, b) in pairs {
        let res = poly::resultant_y_with_bound(&sys.finite[a], &sys.finite[b], bound)?;
        let reference = sys.finite[a]
            .coeffs()
            .iter()
            .chain(sys.finite[b].coeffs())
            .map(UniPoly::max_abs_coeff)
            .fold(0.0, f64::max)
            .powi(2 * (d as i32 - 1));
        if !res.is_zero() && res.max_abs_coeff() > 1e-10 * reference {
            chosen = Some((a, b, res));
            break;
        }
    }
    let Some((a, b, res)) = chosen else {
        return Err(Error::degenerate(format!(
            "partial derivatives share a component at s = {}",
            fiber.s
        )));
    };

    let mut candidates: Vec<[Complex64; 3]> = Vec::new();
    for root in poly::roots(&res, DEFAULT_CLUSTER_TOL)? {
        let ys = sys.finite[a].eval_x(root.value);
        if ys.degree().is_none_or(|k| k == 0) {
            continue;
        }
        for y in poly::all_roots(&ys)? {
            let pt = [root.value, y, c(1.0, 0.0)];
            candidates.push(newton_polish(&sys.finite[a], &sys.finite[b], pt));
        }
    }
    if res.degree().unwrap_or(0) < bound {
        let vs = sys.infinite[a].eval_x(c(0.0, 0.0));
        if vs.degree().is_some_and(|k| k > 0) {
            for v in poly::all_roots(&vs)? {
                candidates.push([c(1.0, 0.0), v, c(0.0, 0.0)]);
            }
        }
    }

    let mut out: Vec<ProjPoint> = Vec::new();
    for pt in candidates {
        let Some(p) = ProjPoint::new(sys.frame.to_original(&pt)) else {
            continue;
        };
        if sys.residual(&p, &fiber.curve) <= tol && !out.iter().any(|q| q.approx_eq(&p, 1e-6)) {
            out.push(p);
        }
    }
    Ok(out)
}

/// Resultant-based smoothness test, independent of root lifting.
///
/// With `R_01 = res_y(∂_0 F, ∂_1 F)` and `R_02 = res_y(∂_0 F, ∂_2 F)` in the
/// general-position frame, a singular point is a common root of both. The
/// returned value is `min |R_02(r)| / |R_02|(|r|)` over roots `r` of `R_01`:
/// near zero for singular curves and of order one for smooth ones.
pub fn gradient_resultant_test(fiber: &Fiber) -> Result<f64> {
    let d = fiber.curve.degree() as usize;
    if d <= 1 {
        return Ok(1.0);
    }
    let sys = GradientSystem::new(&fiber.curve, Projection::standard())?;
    let bound = (d - 1) * (d - 1);
    let r01 = poly::resultant_y_with_bound(&sys.finite[0], &sys.finite[1], bound)?;
    let r02 = poly::resultant_y_with_bound(&sys.finite[0], &sys.finite[2], bound)?;
    if r01.is_zero() || r02.is_zero() {
        return Ok(0.0);
    }
    Ok(poly::all_roots(&r01)?
        .into_iter()
        .map(|r| r02.eval(r).norm() / r02.eval_abs(r).max(f64::MIN_POSITIVE))
        .fold(f64::INFINITY, f64::min))
}
