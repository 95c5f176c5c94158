use super::weight::Weight;
use crate::error::{Error, Result};
use crate::geometry::{Chart, Fiber, ProjPoint};
use crate::poly::{BiPoly, HomogeneousPoly};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Anything with a first Chern form that can be pulled back along a
/// holomorphic curve `x ↦ p(x)` in `ℂ³ \ 0`.
pub trait Curvature: Sync {
    /// Density of `c_1` against `dA` of the curve parameter, given a point
    /// `p` and its derivative `dp` along the curve.
    fn density(&self, p: &[Complex64; 3], dp: &[Complex64; 3]) -> f64;

    /// Degree of the line bundle on the ambient plane.
    fn total_degree(&self) -> u32;
}

/// `∂x ∂x̄ log ‖p(x)‖²` in terms of `p` and `p'`.
pub fn fubini_study_density(p: &[Complex64; 3], dp: &[Complex64; 3]) -> f64 {
    let pp: f64 = p.iter().map(|z| z.norm_sqr()).sum();
    // ‖p ∧ p'‖² avoids the cancellation in ‖p‖²‖p'‖² − |⟨p', p⟩|²
    let mut wedge = 0.0;
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        wedge += (p[i] * dp[j] - p[j] * dp[i]).norm_sqr();
    }
    wedge / (pp * pp)
}

/// `O(d)` with the metric `|l(p)| ‖p‖^{-d} exp(-ψ(p))`.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct HermitianBundle {
    pub degree: u32,
    #[serde(default)]
    pub weight: Weight,
}

impl HermitianBundle {
    pub fn new(degree: u32, weight: Weight) -> Self {
        HermitianBundle { degree, weight }
    }

    /// `O(d)` with the `d`-th power of the Fubini–Study metric.
    pub fn fubini_study(degree: u32) -> Self {
        HermitianBundle {
            degree,
            weight: Weight::Zero,
        }
    }

    pub fn validate(&self, field: &str) -> Result<()> {
        self.weight.validate(field)
    }

    fn check_section(&self, l: &HomogeneousPoly) -> Result<()> {
        if l.num_vars() != 3 {
            return Err(Error::input("section", "must be a ternary form"));
        }
        if l.degree() != self.degree {
            return Err(Error::input(
                "section",
                format!(
                    "section degree {} does not match bundle degree {}",
                    l.degree(),
                    self.degree
                ),
            ));
        }
        Ok(())
    }

    /// `log ‖l‖(p)`; `-inf` on `div(l)`.
    pub fn log_norm(&self, l: &HomogeneousPoly, p: &[Complex64; 3]) -> Result<f64> {
        self.check_section(l)?;
        Ok(self.log_norm_unchecked(l, p))
    }

    pub(crate) fn log_norm_unchecked(&self, l: &HomogeneousPoly, p: &[Complex64; 3]) -> f64 {
        let pp: f64 = p.iter().map(|z| z.norm_sqr()).sum();
        l.eval_unchecked(p).norm().ln() - 0.5 * self.degree as f64 * pp.ln() - self.weight.value(p)
    }

    pub fn norm(&self, l: &HomogeneousPoly, p: &ProjPoint) -> Result<f64> {
        Ok(self.log_norm(l, &p.coords())?.exp())
    }

    /// `L ⊗ L'`: degrees add, weights add.
    pub fn tensor(&self, other: &HermitianBundle) -> HermitianBundle {
        HermitianBundle {
            degree: self.degree + other.degree,
            weight: self.weight.plus(&other.weight),
        }
    }

    /// Same bundle with `ψ` replaced by `ψ + c`.
    pub fn shifted(&self, c: f64) -> HermitianBundle {
        HermitianBundle {
            degree: self.degree,
            weight: self.weight.plus(&Weight::Constant { value: c }),
        }
    }
}

impl Curvature for HermitianBundle {
    fn density(&self, p: &[Complex64; 3], dp: &[Complex64; 3]) -> f64 {
        let fs = if self.degree == 0 {
            0.0
        } else {
            self.degree as f64 * fubini_study_density(p, dp)
        };
        (fs + 2.0 * self.weight.levi(p, dp)) / PI
    }

    fn total_degree(&self) -> u32 {
        self.degree
    }
}

/// `u = log(‖·‖' / ‖·‖) = ψ - ψ'`.
#[derive(Debug, Clone)]
pub struct MetricRatio {
    psi: Weight,
    psi_prime: Weight,
}

impl MetricRatio {
    pub fn eval(&self, p: &[Complex64; 3]) -> f64 {
        self.psi.value(p) - self.psi_prime.value(p)
    }
}

pub fn metric_ratio_u(b: &HermitianBundle, b_prime: &HermitianBundle) -> Result<MetricRatio> {
    if b.degree != b_prime.degree {
        return Err(Error::input(
            "b_prime",
            format!("degree {} differs from {}", b_prime.degree, b.degree),
        ));
    }
    Ok(MetricRatio {
        psi: b.weight.clone(),
        psi_prime: b_prime.weight.clone(),
    })
}

/// Pullback of a bundle along `g = (g0, g1, g2)`, forms of a common
/// degree `k`: `G = g(p)` and `G' = Dg(p) p'`.
#[derive(Debug, Clone)]
pub struct PulledBackBundle {
    pub bundle: HermitianBundle,
    maps: [HomogeneousPoly; 3],
    jacobian: Vec<Vec<HomogeneousPoly>>,
}

impl PulledBackBundle {
    pub fn new(bundle: HermitianBundle, maps: [HomogeneousPoly; 3]) -> Result<Self> {
        let k = maps[0].degree();
        if maps.iter().any(|m| m.num_vars() != 3 || m.degree() != k) {
            return Err(Error::input("map", "components must be ternary forms of one degree"));
        }
        if maps.iter().all(HomogeneousPoly::is_zero) {
            return Err(Error::input("map", "all components vanish"));
        }
        let jacobian = maps.iter().map(HomogeneousPoly::gradient).collect();
        Ok(PulledBackBundle {
            bundle,
            maps,
            jacobian,
        })
    }

    pub fn map_degree(&self) -> u32 {
        self.maps[0].degree()
    }

    pub fn maps(&self) -> &[HomogeneousPoly; 3] {
        &self.maps
    }

    pub fn image(&self, p: &[Complex64; 3]) -> [Complex64; 3] {
        [0, 1, 2].map(|i| self.maps[i].eval_unchecked(p))
    }

    fn image_tangent(&self, p: &[Complex64; 3], dp: &[Complex64; 3]) -> [Complex64; 3] {
        [0, 1, 2].map(|i| {
            self.jacobian[i]
                .iter()
                .zip(dp)
                .map(|(g, v)| g.eval_unchecked(p) * v)
                .sum()
        })
    }
}

impl Curvature for PulledBackBundle {
    fn density(&self, p: &[Complex64; 3], dp: &[Complex64; 3]) -> f64 {
        let g = self.image(p);
        let dg = self.image_tangent(p, dp);
        self.bundle.density(&g, &dg)
    }

    fn total_degree(&self) -> u32 {
        self.bundle.degree * self.map_degree()
    }
}

/// `c_1(L̄)` of a bundle pulled back to one affine chart of a fiber, in the
/// fiber's own coordinates (see [`Chart`]).
pub struct CurvatureDensity<'a> {
    bundle: &'a HermitianBundle,
    chart: Chart,
    f: BiPoly,
    fx: BiPoly,
    fy: BiPoly,
    scale: f64,
}

impl<'a> CurvatureDensity<'a> {
    pub fn new(bundle: &'a HermitianBundle, fiber: &Fiber, chart: Chart) -> Self {
        let (xv, yv) = match chart {
            Chart::Finite => (0, 1),
            Chart::Inversion => (2, 1),
        };
        let f = fiber.curve.to_bipoly(xv, yv);
        CurvatureDensity {
            bundle,
            chart,
            fx: f.d_dx(),
            fy: f.d_dy(),
            scale: fiber.curve.max_abs_coeff(),
            f,
        }
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    /// Residual of the chart equation at `(x, y)`.
    pub fn residual(&self, x: Complex64, y: Complex64) -> f64 {
        self.f.eval(x, y).norm()
    }

    /// Density at `(x, y)` on the local branch `y(x)`, or `None` at a branch
    /// point (`∂f/∂y` vanishes to working precision).
    pub fn at(&self, x: Complex64, y: Complex64) -> Option<f64> {
        let fy = self.fy.eval(x, y);
        let size = 1.0 + x.norm().max(y.norm());
        let d = self.f.declared_y_degree().max(1) as i32;
        if fy.norm() <= 1e-12 * self.scale * size.powi(d) {
            return None;
        }
        let slope = -self.fx.eval(x, y) / fy;
        let p = self.chart.embed(x, y);
        let dp = self.chart.embed_tangent(slope);
        Some(self.bundle.density(&p, &dp))
    }
}

/// Density of `c_1(b)` on `fiber` at chart point
/// `(x, y)`; `None` flags a branch point.
pub fn curvature_density(
    b: &HermitianBundle,
    fiber: &Fiber,
    chart: Chart,
    x: Complex64,
    y: Complex64,
) -> Option<f64> {
    CurvatureDensity::new(b, fiber, chart).at(x, y)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn norm_of_x0() {
        let b = HermitianBundle::fubini_study(1);
        let x0 = HomogeneousPoly::variable(3, 0);
        assert!((b.norm(&x0, &ProjPoint::real(1.0, 0.0, 0.0)).unwrap() - 1.0).abs() < 1e-15);
        let v = b.norm(&x0, &ProjPoint::real(1.0, 1.0, 1.0)).unwrap();
        assert!((v - 1.0 / 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn degree_mismatch() {
        let b = HermitianBundle::fubini_study(2);
        let x0 = HomogeneousPoly::variable(3, 0);
        assert!(matches!(
            b.log_norm(&x0, &[c(1.0, 0.0); 3]),
            Err(Error::Input { .. })
        ));
    }

    #[test]
    fn line_density() {
        let b = HermitianBundle::fubini_study(1);
        let z = c(0.4, -1.3);
        let p = [c(1.0, 0.0), z, c(0.0, 0.0)];
        let dp = [c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)];
        let want = 1.0 / (PI * (1.0 + z.norm_sqr()).powi(2));
        assert!((b.density(&p, &dp) - want).abs() < 1e-15);
    }
}
