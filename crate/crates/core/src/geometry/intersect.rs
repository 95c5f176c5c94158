use super::{Fiber, ProjPoint, Projection};
use crate::error::{Error, Result};
use crate::poly::{self, BiPoly, HomogeneousPoly, DEFAULT_CLUSTER_TOL};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Default residual tolerance for divisor points.
pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-8;

/// Weighted points of `div(section) ∩ X_s`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiberDivisor {
    pub points: Vec<(ProjPoint, usize)>,
    pub total: usize,
}

impl FiberDivisor {
    pub fn new(points: Vec<(ProjPoint, usize)>) -> Self {
        let total = points.iter().map(|(_, m)| m).sum();
        FiberDivisor { points, total }
    }

    pub fn empty() -> Self {
        FiberDivisor {
            points: Vec::new(),
            total: 0,
        }
    }
}

/// `div(section) ∩ X_s` with multiplicities, via elimination in the standard
/// general-position frame.
pub fn intersect(fiber: &Fiber, section: &HomogeneousPoly, tol: f64) -> Result<FiberDivisor> {
    intersect_with(fiber, section, &Projection::standard(), tol)
}

/// Common zeros of two ternary forms in a given frame.
///
/// The forms are moved into the frame, `y = x1` is eliminated with a
/// resultant in the chart `x2 = 1`, and each root `x` is lifted back to the
/// curve. Roots lost to the line `x2 = 0` show up as a degree deficit and
/// are recovered in the chart `x0 = 1`.
pub fn intersect_with(
    fiber: &Fiber,
    section: &HomogeneousPoly,
    frame: &Projection,
    tol: f64,
) -> Result<FiberDivisor> {
    let curve = &fiber.curve;
    if section.num_vars() != 3 {
        return Err(Error::input("section", "must be a ternary form"));
    }
    if section.is_zero() {
        return Err(Error::input("section", "zero section"));
    }
    let d = curve.degree() as usize;
    let e = section.degree() as usize;
    if e == 0 {
        return Ok(FiberDivisor::empty());
    }
    let ft = frame.transform(curve)?;
    let gt = frame.transform(section)?;
    let f = ft.to_bipoly(0, 1);
    let g = gt.to_bipoly(0, 1);
    let res = poly::resultant_y_with_bound(&f, &g, d * e)?;
    let reference = ft.max_abs_coeff().powi(e as i32) * gt.max_abs_coeff().powi(d as i32);
    if res.is_zero() || res.max_abs_coeff() <= 1e-10 * reference {
        return Err(Error::NonProperIntersection {
            message: format!(
                "section of degree {e} vanishes on a component of the fiber at s = {}",
                fiber.s
            ),
        });
    }
    let finite_degree = res.degree().unwrap_or(0);
    let mut points = Vec::new();
    for root in poly::roots(&res, DEFAULT_CLUSTER_TOL)? {
        let y = lift(&f, &g, root.value)?;
        let mut pt = [root.value, y, Complex64::new(1.0, 0.0)];
        if root.multiplicity == 1 {
            pt = newton_polish(&f, &g, pt);
        }
        points.push((pt, root.multiplicity));
    }
    let at_infinity = d * e - finite_degree;
    if at_infinity > 0 {
        // chart x0 = 1 restricted to t = x2 = 0
        let fi = ft.to_bipoly(2, 1);
        let gi = gt.to_bipoly(2, 1);
        let v = lift(&fi, &gi, Complex64::new(0.0, 0.0))?;
        points.push(([Complex64::new(1.0, 0.0), v, Complex64::new(0.0, 0.0)], at_infinity));
    }

    let mut out = Vec::with_capacity(points.len());
    let mut diagnostics = Vec::new();
    for (pt, m) in points {
        let p = ProjPoint::new(frame.to_original(&pt))
            .ok_or_else(|| Error::numerical("lifted intersection point is zero"))?;
        let r = p.residual(curve).max(p.residual(section));
        if !(r <= tol) {
            diagnostics.push(format!("point {p} (multiplicity {m}) has residual {r:.3e}"));
        }
        out.push((p, m));
    }
    let div = FiberDivisor::new(out);
    if div.total != d * e {
        diagnostics.push(format!("found total {} instead of {}", div.total, d * e));
    }
    if !diagnostics.is_empty() {
        return Err(Error::numerical_with(
            format!("intersection at s = {} failed its checks", fiber.s),
            diagnostics,
        ));
    }
    Ok(div)
}

/// The `y` with `f(x, y) = g(x, y) = 0`, taken among the roots of whichever
/// specialization has lower degree.
pub(crate) fn lift(f: &BiPoly, g: &BiPoly, x: Complex64) -> Result<Complex64> {
    let fx = f.eval_x(x);
    let gx = g.eval_x(x);
    let (solve, check) = match (fx.degree(), gx.degree()) {
        (Some(a), Some(b)) if b < a && b > 0 => (&gx, &fx),
        (Some(a), _) if a > 0 => (&fx, &gx),
        (_, Some(b)) if b > 0 => (&gx, &fx),
        _ => {
            return Err(Error::numerical_with(
                "cannot lift intersection point",
                vec![format!("both specializations are constant at x = {x}")],
            ))
        }
    };
    let candidates = poly::all_roots(solve)?;
    candidates
        .into_iter()
        .map(|y| {
            let scale = check.eval_abs(y).max(f64::MIN_POSITIVE);
            (y, check.eval(y).norm() / scale)
        })
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(y, _)| y)
        .ok_or_else(|| Error::numerical("no lifting candidates"))
}

/// Newton on `(f, g)` in the affine chart, kept only while residuals shrink.
pub(crate) fn newton_polish(f: &BiPoly, g: &BiPoly, pt: [Complex64; 3]) -> [Complex64; 3] {
    let (fx, fy, gx, gy) = (f.d_dx(), f.d_dy(), g.d_dx(), g.d_dy());
    let (mut x, mut y) = (pt[0], pt[1]);
    let resid = |x: Complex64, y: Complex64| f.eval(x, y).norm() + g.eval(x, y).norm();
    let mut best = resid(x, y);
    for _ in 0..8 {
        let a = fx.eval(x, y);
        let b = fy.eval(x, y);
        let c = gx.eval(x, y);
        let dd = gy.eval(x, y);
        let det = a * dd - b * c;
        if det.norm() == 0.0 {
            break;
        }
        let rf = f.eval(x, y);
        let rg = g.eval(x, y);
        let dx = (dd * rf - b * rg) / det;
        let dy = (a * rg - c * rf) / det;
        let (nx, ny) = (x - dx, y - dy);
        let r = resid(nx, ny);
        if !(r < best) {
            break;
        }
        best = r;
        x = nx;
        y = ny;
    }
    [x, y, pt[2]]
}
