//! Resultants with respect to `y` of polynomials with coefficients in `C[x]`.
//!
//! Sign convention: the Sylvester matrix lists the `deg_y(g)` shifted rows of
//! `f` first, then the `deg_y(f)` shifted rows of `g`, each row with the
//! highest power of `y` in the leftmost column. With this convention
//! `res_y(y - a, y - b) = a - b`.

use super::{BiPoly, UniPoly};
use crate::error::{Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Sylvester matrix of two univariate coefficient vectors (lowest degree
/// first, declared lengths respected).
pub fn sylvester_matrix(f: &[Complex64], g: &[Complex64]) -> DMatrix<Complex64> {
    let m = f.len().saturating_sub(1);
    let n = g.len().saturating_sub(1);
    let size = m + n;
    let mut s = DMatrix::from_element(size, size, Complex64::new(0.0, 0.0));
    for row in 0..n {
        for (k, c) in f.iter().rev().enumerate() {
            s[(row, row + k)] = *c;
        }
    }
    for row in 0..m {
        for (k, c) in g.iter().rev().enumerate() {
            s[(n + row, row + k)] = *c;
        }
    }
    s
}

/// Numeric resultant of two univariate polynomials given by coefficient
/// vectors with declared degrees.
pub fn resultant_numeric(f: &[Complex64], g: &[Complex64]) -> Complex64 {
    let m = f.len().saturating_sub(1);
    let n = g.len().saturating_sub(1);
    if m + n == 0 {
        return Complex64::new(1.0, 0.0);
    }
    sylvester_matrix(f, g).determinant()
}

/// `res_y(f, g)` as a polynomial in `x`, in the declared y-degrees of `f`
/// and `g`.
///
/// The determinant is sampled on the unit circle at more points than its
/// degree bound and interpolated with an inverse DFT.
pub fn resultant_y(f: &BiPoly, g: &BiPoly) -> Result<UniPoly> {
    let bound = f.declared_y_degree() * g.max_x_degree() + g.declared_y_degree() * f.max_x_degree();
    resultant_y_with_bound(f, g, bound)
}

/// Same as [`resultant_y`] with a caller-supplied bound on the x-degree of
/// the result (e.g. the Bezout number for dehomogenized forms).
pub fn resultant_y_with_bound(f: &BiPoly, g: &BiPoly, bound: usize) -> Result<UniPoly> {
    if f.is_zero() && g.is_zero() {
        return Err(Error::input("f, g", "resultant of two zero polynomials"));
    }
    let samples = bound + 1;
    let values: Vec<Complex64> = (0..samples)
        .map(|j| {
            let x = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / samples as f64);
            resultant_numeric(&f.eval_x_dense(x), &g.eval_x_dense(x))
        })
        .collect();
    let vmax = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let coeffs: Vec<Complex64> = (0..samples)
        .map(|k| {
            let sum: Complex64 = values
                .iter()
                .enumerate()
                .map(|(j, v)| {
                    v * Complex64::from_polar(1.0, -2.0 * PI * (j * k) as f64 / samples as f64)
                })
                .sum();
            sum / samples as f64
        })
        .collect();
    // interpolation noise sits at roughly eps * samples * max|value|
    let noise = 64.0 * f64::EPSILON * samples as f64 * vmax;
    let mut trimmed = coeffs;
    while trimmed.last().is_some_and(|c| c.norm() <= noise) {
        trimmed.pop();
    }
    Ok(UniPoly::new(trimmed))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn linear_factors_give_root_difference() {
        let a = c(0.7, -1.2);
        let b = c(-2.0, 0.3);
        let f = [-a, c(1.0, 0.0)];
        let g = [-b, c(1.0, 0.0)];
        let r = resultant_numeric(&f, &g);
        assert!((r - (a - b)).norm() < 1e-14);
    }

    #[test]
    fn y_squared_minus_x_against_y() {
        // f = y^2 - x, g = y; Sylvester matrix expanded by hand:
        //   [1, 0, -x]
        //   [1, 0,  0]
        //   [0, 1,  0]
        // det = 1*(0*0 - 0*1) - 0 + (-x)*(1*1 - 0*0) = -x
        let f = BiPoly::from_table(&[&[0.0, -1.0], &[0.0], &[1.0]]);
        let g = BiPoly::from_table(&[&[0.0], &[1.0]]);
        let r = resultant_y(&f, &g).unwrap();
        assert_eq!(r.degree(), Some(1));
        assert!((r.coeff(1) - c(-1.0, 0.0)).norm() < 1e-13);
        assert!(r.coeff(0).norm() < 1e-13);
    }

    #[test]
    fn both_zero_rejected() {
        let z = BiPoly::new(vec![UniPoly::zero(), UniPoly::zero()]);
        assert!(resultant_y(&z, &z).is_err());
    }
}
