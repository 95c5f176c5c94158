use super::UniPoly;
use num_complex::Complex64;

/// Polynomial in `y` whose coefficients are polynomials in `x`.
///
/// `coeffs[j]` multiplies `y^j`. The declared y-degree is `coeffs.len() - 1`
/// and is kept even if the top coefficient is the zero polynomial, since
/// resultants are taken with respect to declared degrees.
#[derive(Debug, Clone, PartialEq)]
pub struct BiPoly {
    coeffs: Vec<UniPoly>,
}

impl BiPoly {
    pub fn new(coeffs: Vec<UniPoly>) -> Self {
        BiPoly { coeffs }
    }

    /// Builds from a dense table `rows[j][i]` = coefficient of `x^i y^j`.
    pub fn from_table(rows: &[&[f64]]) -> Self {
        BiPoly::new(rows.iter().map(|r| UniPoly::from_real(r)).collect())
    }

    pub fn coeffs(&self) -> &[UniPoly] {
        &self.coeffs
    }

    pub fn declared_y_degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(UniPoly::is_zero)
    }

    pub fn max_x_degree(&self) -> usize {
        self.coeffs
            .iter()
            .filter_map(UniPoly::degree)
            .max()
            .unwrap_or(0)
    }

    /// Coefficients in `y` at a fixed `x`, keeping the declared length.
    pub fn eval_x_dense(&self, x: Complex64) -> Vec<Complex64> {
        self.coeffs.iter().map(|c| c.eval(x)).collect()
    }

    pub fn eval_x(&self, x: Complex64) -> UniPoly {
        UniPoly::new(self.eval_x_dense(x))
    }

    pub fn eval(&self, x: Complex64, y: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * y + c.eval(x))
    }

    pub fn d_dx(&self) -> BiPoly {
        BiPoly::new(self.coeffs.iter().map(UniPoly::derivative).collect())
    }

    pub fn d_dy(&self) -> BiPoly {
        if self.coeffs.len() <= 1 {
            return BiPoly::new(vec![UniPoly::zero()]);
        }
        BiPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, c)| c.scale(Complex64::new(j as f64, 0.0)))
                .collect(),
        )
    }
}
