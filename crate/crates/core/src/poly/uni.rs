use num_complex::Complex64;
use std::ops::{Add, Mul, Neg, Sub};

/// Univariate polynomial with complex coefficients, lowest degree first.
///
/// Trailing zero coefficients are always stripped, so the zero polynomial is
/// the empty coefficient list.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct UniPoly {
    coeffs: Vec<Complex64>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// `z - root`
    pub fn linear_factor(root: Complex64) -> Self {
        Self::new(vec![-root, Complex64::new(1.0, 0.0)])
    }

    /// Monic polynomial with the given roots (repeated roots listed repeatedly).
    pub fn from_roots(roots: &[Complex64]) -> Self {
        roots
            .iter()
            .fold(Self::constant(Complex64::new(1.0, 0.0)), |acc, r| {
                &acc * &Self::linear_factor(*r)
            })
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs.last().copied().unwrap_or_default()
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    /// Value and first derivative in one Horner pass.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    /// Sum of |c_k| |z|^k, the natural scale for rounding error in `eval(z)`.
    pub fn eval_abs(&self, z: Complex64) -> f64 {
        let r = z.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * k as f64)
                .collect(),
        )
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Coefficients of `p(z0 + h)` as a polynomial in `h`.
    pub fn taylor_shift(&self, z0: Complex64) -> Self {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let hi = c[j + 1];
                c[j] += z0 * hi;
            }
        }
        Self::new(c)
    }

    /// Drops leading coefficients whose modulus is at most `rel * max|c|`.
    pub fn trim_relative(&self, rel: f64) -> Self {
        let cutoff = rel * self.max_abs_coeff();
        let mut c = self.coeffs.clone();
        while c.last().is_some_and(|x| x.norm() <= cutoff) {
            c.pop();
        }
        Self::new(c)
    }

    /// `z^n p(1/z)` with `n` the given nominal degree.
    pub fn reversed(&self, nominal_degree: usize) -> Self {
        let mut c = vec![Complex64::new(0.0, 0.0); nominal_degree + 1];
        for (k, v) in self.coeffs.iter().enumerate() {
            if k <= nominal_degree {
                c[nominal_degree - k] = *v;
            }
        }
        Self::new(c)
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut c = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        UniPoly::new(c)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}
