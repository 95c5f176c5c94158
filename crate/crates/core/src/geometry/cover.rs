use super::{Fiber, ProjPoint, Projection};
use crate::error::{Error, Result};
use crate::poly::{self, BiPoly, Root};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Affine chart of the projection line.
///
/// For a form `F(x0, x1, x2)` the finite chart is `x2 = 1` with base
/// coordinate `x = x0` and fiber coordinate `y = x1`; the inversion chart is
/// `x0 = 1` with base coordinate `t = x2` (so `t = 1/x`) and fiber
/// coordinate `v = x1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Chart {
    Finite,
    Inversion,
}

impl Chart {
    pub const ALL: [Chart; 2] = [Chart::Finite, Chart::Inversion];

    fn vars(self) -> (usize, usize) {
        match self {
            Chart::Finite => (0, 1),
            Chart::Inversion => (2, 1),
        }
    }

    /// Homogeneous coordinates of the chart point `(base, fiber)`.
    pub fn embed(self, base: Complex64, fiber: Complex64) -> [Complex64; 3] {
        let one = Complex64::new(1.0, 0.0);
        match self {
            Chart::Finite => [base, fiber, one],
            Chart::Inversion => [one, fiber, base],
        }
    }

    /// Derivative of `embed` along the curve, given `d(fiber)/d(base)`.
    pub fn embed_tangent(self, slope: Complex64) -> [Complex64; 3] {
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        match self {
            Chart::Finite => [one, slope, zero],
            Chart::Inversion => [zero, slope, one],
        }
    }

    /// Base coordinate of a point, if the point lies in this chart.
    pub fn base_coordinate(self, p: &[Complex64; 3]) -> Option<Complex64> {
        let (num, den) = match self {
            Chart::Finite => (p[0], p[2]),
            Chart::Inversion => (p[2], p[0]),
        };
        (den.norm() > 0.0).then(|| num / den)
    }
}

/// Solutions `y` of `F(x, y) = 0` over one base value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchSet {
    pub values: Vec<Root>,
    /// two or more sheets meet here (within tolerance)
    pub at_branch_point: bool,
    /// sheets lost to infinity because the leading y-coefficient vanishes
    pub escaped: usize,
}

/// All branches of the dehomogenized fiber over `x` in the fiber's own
/// coordinates.
pub fn branches(fiber: &Fiber, chart: Chart, x: Complex64, tol: f64) -> Result<BranchSet> {
    let (xv, yv) = chart.vars();
    let bp = fiber.curve.to_bipoly(xv, yv);
    let nominal = bp
        .coeffs()
        .iter()
        .rposition(|c| !c.is_zero())
        .unwrap_or(0);
    if nominal == 0 {
        return Err(Error::input(
            "chart",
            format!("fiber has no dependence on the fiber coordinate in the {chart:?} chart"),
        ));
    }
    let dense = bp.eval_x_dense(x);
    let scale = dense.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Err(Error::degenerate(format!(
            "the whole fiber line over x = {x} lies on the curve"
        )));
    }
    let actual = dense
        .iter()
        .rposition(|c| c.norm() > tol * scale)
        .unwrap_or(0);
    let trimmed = poly::UniPoly::new(dense[..=actual].to_vec());
    let values = if actual == 0 {
        Vec::new()
    } else {
        poly::roots(&trimmed, tol)?
    };
    Ok(BranchSet {
        at_branch_point: values.iter().any(|r| r.multiplicity > 1),
        values,
        escaped: nominal - actual,
    })
}

struct ChartPolys {
    f: BiPoly,
    fy: BiPoly,
}

/// A point on one sheet of the cover, with the derivative of its
/// homogeneous coordinates along the local branch, both in the original
/// frame.
#[derive(Debug, Clone, Copy)]
pub struct SheetPoint {
    pub point: [Complex64; 3],
    pub tangent: [Complex64; 3],
}

/// The fiber as a branched cover of the projection line in a general
/// position frame.
pub struct BranchedCover {
    frame: Projection,
    sheets: usize,
    charts: [ChartPolys; 2],
}

impl BranchedCover {
    pub fn new(fiber: &Fiber, frame: Projection) -> Result<Self> {
        let ft = frame.transform(&fiber.curve)?;
        let d = ft.degree() as usize;
        let lead = ft.coeff(&[0, d as u32, 0]);
        if lead.norm() <= 1e-8 * ft.max_abs_coeff() {
            return Err(Error::numerical(
                "projection centre lies on the fiber; the cover is not in general position",
            ));
        }
        let build = |chart: Chart| {
            let (xv, yv) = chart.vars();
            let f = ft.to_bipoly(xv, yv);
            ChartPolys { fy: f.d_dy(), f }
        };
        Ok(BranchedCover {
            frame,
            sheets: d,
            charts: [build(Chart::Finite), build(Chart::Inversion)],
        })
    }

    pub fn sheets(&self) -> usize {
        self.sheets
    }

    pub fn frame(&self) -> &Projection {
        &self.frame
    }

    fn polys(&self, chart: Chart) -> &ChartPolys {
        match chart {
            Chart::Finite => &self.charts[0],
            Chart::Inversion => &self.charts[1],
        }
    }

    /// Base values where sheets meet: roots of `res_y(f, ∂f/∂y)`.
    pub fn branch_points(&self, chart: Chart) -> Result<Vec<Complex64>> {
        let p = self.polys(chart);
        if self.sheets <= 1 {
            return Ok(Vec::new());
        }
        let disc = poly::resultant_y_with_bound(&p.f, &p.fy, self.sheets * (self.sheets - 1))?;
        if disc.is_zero() {
            return Err(Error::degenerate("discriminant of the projection vanishes identically"));
        }
        poly::all_roots(&disc)
    }

    /// Base coordinate of a point of the original plane in the given chart.
    pub fn base_coordinate(&self, chart: Chart, p: &ProjPoint) -> Option<Complex64> {
        chart.base_coordinate(&self.frame.to_projected(&p.coords()))
    }

    /// Every sheet over `x`, appended to `out`.
    pub fn lift(&self, chart: Chart, x: Complex64, out: &mut Vec<SheetPoint>) -> Result<()> {
        self.lift_from(chart, x, &mut Vec::new(), out)
    }

    /// As [`lift`](Self::lift), with `hint` holding fiber values from a
    /// nearby base point as starting values; updated on return.
    pub fn lift_from(
        &self,
        chart: Chart,
        x: Complex64,
        hint: &mut Vec<Complex64>,
        out: &mut Vec<SheetPoint>,
    ) -> Result<()> {
        let p = self.polys(chart);
        let n = p.f.coeffs().len();
        let mut c = Vec::with_capacity(n);
        let mut dc = Vec::with_capacity(n);
        for u in p.f.coeffs() {
            let (v, d) = u.eval_with_derivative(x);
            c.push(v);
            dc.push(d);
        }
        let fiber_poly = poly::UniPoly::new(c.clone());
        let ys = poly::roots_from_guess(&fiber_poly, hint)?;
        for &y in &ys {
            let mut f_y = Complex64::new(0.0, 0.0);
            let mut f_x = Complex64::new(0.0, 0.0);
            for j in (0..n).rev() {
                f_x = f_x * y + dc[j];
                if j > 0 {
                    f_y = f_y * y + c[j] * j as f64;
                }
            }
            let slope = -f_x / f_y;
            let point = self.frame.to_original(&chart.embed(x, y));
            let tangent = self.frame.to_original(&chart.embed_tangent(slope));
            out.push(SheetPoint { point, tangent });
        }
        *hint = ys;
        Ok(())
    }
}
