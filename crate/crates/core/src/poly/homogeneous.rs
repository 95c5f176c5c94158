use super::{BiPoly, UniPoly};
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Exponent multi-index, one entry per variable.
pub type Exponent = Vec<u32>;

/// Homogeneous polynomial in `num_vars` variables with complex coefficients.
///
/// Only nonzero coefficients are stored and every stored exponent sums to
/// `degree`.
#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneousPoly {
    num_vars: usize,
    degree: u32,
    terms: BTreeMap<Exponent, Complex64>,
}

impl HomogeneousPoly {
    pub fn zero(num_vars: usize, degree: u32) -> Self {
        HomogeneousPoly {
            num_vars,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms<I>(num_vars: usize, degree: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponent, Complex64)>,
    {
        if num_vars == 0 {
            return Err(Error::input("num_vars", "must be positive"));
        }
        let mut p = Self::zero(num_vars, degree);
        for (exp, c) in terms {
            if exp.len() != num_vars {
                return Err(Error::input(
                    "terms.exp",
                    format!("exponent {exp:?} has {} entries, expected {num_vars}", exp.len()),
                ));
            }
            let sum: u32 = exp.iter().sum();
            if sum != degree {
                return Err(Error::input(
                    "terms.exp",
                    format!("exponent {exp:?} sums to {sum}, expected degree {degree}"),
                ));
            }
            p.add_term(exp, c);
        }
        Ok(p)
    }

    /// Real-coefficient convenience constructor for ternary forms.
    pub fn ternary(degree: u32, terms: &[([u32; 3], f64)]) -> Result<Self> {
        Self::from_terms(
            3,
            degree,
            terms
                .iter()
                .map(|(e, c)| (e.to_vec(), Complex64::new(*c, 0.0))),
        )
    }

    pub fn variable(num_vars: usize, index: usize) -> Self {
        let mut exp = vec![0; num_vars];
        exp[index] = 1;
        let mut p = Self::zero(num_vars, 1);
        p.add_term(exp, Complex64::new(1.0, 0.0));
        p
    }

    /// Linear form `sum_i coeffs[i] * x_i`.
    pub fn linear(coeffs: &[Complex64]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n, 1);
        for (i, c) in coeffs.iter().enumerate() {
            let mut exp = vec![0; n];
            exp[i] = 1;
            p.add_term(exp, *c);
        }
        p
    }

    pub fn constant(num_vars: usize, c: Complex64) -> Self {
        let mut p = Self::zero(num_vars, 0);
        p.add_term(vec![0; num_vars], c);
        p
    }

    fn add_term(&mut self, exp: Exponent, c: Complex64) {
        let v = self.terms.get(&exp).copied().unwrap_or_default() + c;
        if v == Complex64::new(0.0, 0.0) {
            self.terms.remove(&exp);
        } else {
            self.terms.insert(exp, v);
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Complex64)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: &[u32]) -> Complex64 {
        self.terms.get(exp).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn eval(&self, point: &[Complex64]) -> Result<Complex64> {
        if point.len() != self.num_vars {
            return Err(Error::input(
                "point",
                format!("expected {} coordinates, got {}", self.num_vars, point.len()),
            ));
        }
        Ok(self.eval_unchecked(point))
    }

    pub(crate) fn eval_unchecked(&self, point: &[Complex64]) -> Complex64 {
        let d = self.degree as usize;
        // powers[v][k] = point[v]^k
        let powers: Vec<Vec<Complex64>> = point
            .iter()
            .map(|&z| {
                let mut row = Vec::with_capacity(d + 1);
                let mut acc = Complex64::new(1.0, 0.0);
                for _ in 0..=d {
                    row.push(acc);
                    acc *= z;
                }
                row
            })
            .collect();
        self.terms
            .iter()
            .map(|(exp, c)| {
                exp.iter()
                    .enumerate()
                    .fold(*c, |acc, (v, &a)| acc * powers[v][a as usize])
            })
            .sum()
    }

    /// Sum of |c| |monomial(point)|, the rounding scale of `eval`.
    pub fn eval_abs(&self, point: &[Complex64]) -> f64 {
        self.terms
            .iter()
            .map(|(exp, c)| {
                exp.iter()
                    .zip(point)
                    .fold(c.norm(), |acc, (&a, z)| acc * z.norm().powi(a as i32))
            })
            .sum()
    }

    pub fn partial(&self, var: usize) -> Result<Self> {
        if var >= self.num_vars {
            return Err(Error::input(
                "var",
                format!("index {var} out of range for {} variables", self.num_vars),
            ));
        }
        let mut out = Self::zero(self.num_vars, self.degree.saturating_sub(1));
        for (exp, c) in &self.terms {
            if exp[var] > 0 {
                let mut e = exp.clone();
                e[var] -= 1;
                out.add_term(e, c * exp[var] as f64);
            }
        }
        Ok(out)
    }

    pub fn gradient(&self) -> Vec<Self> {
        (0..self.num_vars)
            .map(|v| self.partial(v).expect("index in range"))
            .collect()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = Self::zero(self.num_vars, self.degree);
        for (exp, c) in &self.terms {
            out.add_term(exp.clone(), c * s);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        if self.degree != other.degree {
            return Err(Error::input(
                "degree",
                format!("cannot add forms of degree {} and {}", self.degree, other.degree),
            ));
        }
        let mut out = self.clone();
        for (exp, c) in &other.terms {
            out.add_term(exp.clone(), *c);
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.num_vars, self.degree + other.degree);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponent = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::constant(self.num_vars, Complex64::new(1.0, 0.0));
        for _ in 0..k {
            out = out.mul(self).expect("same arity");
        }
        out
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.num_vars != other.num_vars {
            return Err(Error::input(
                "num_vars",
                format!("{} vs {} variables", self.num_vars, other.num_vars),
            ));
        }
        Ok(())
    }

    /// `p(g_0, ..., g_{n-1})` for forms `g_i` of a common degree.
    pub fn compose(&self, maps: &[HomogeneousPoly]) -> Result<Self> {
        if maps.len() != self.num_vars {
            return Err(Error::input(
                "maps",
                format!("expected {} component forms, got {}", self.num_vars, maps.len()),
            ));
        }
        let target_vars = maps[0].num_vars;
        let k = maps[0].degree;
        if maps.iter().any(|m| m.num_vars != target_vars || m.degree != k) {
            return Err(Error::input("maps", "component forms must share arity and degree"));
        }
        let mut out = Self::zero(target_vars, self.degree * k);
        // cache powers of each component
        let d = self.degree as usize;
        let powers: Vec<Vec<HomogeneousPoly>> = maps
            .iter()
            .map(|m| {
                let mut row = vec![Self::constant(target_vars, Complex64::new(1.0, 0.0))];
                for i in 1..=d {
                    let next = row[i - 1].mul(m).expect("same arity");
                    row.push(next);
                }
                row
            })
            .collect();
        for (exp, c) in &self.terms {
            let mut term = Self::constant(target_vars, *c);
            for (v, &a) in exp.iter().enumerate() {
                term = term.mul(&powers[v][a as usize])?;
            }
            for (e, tc) in term.terms {
                out.add_term(e, tc);
            }
        }
        Ok(out)
    }

    /// `p(M x)` for a square matrix `M` (rows act on the coordinate vector).
    pub fn linear_substitute(&self, m: &[[Complex64; 3]; 3]) -> Result<Self> {
        if self.num_vars != 3 {
            return Err(Error::input("num_vars", "linear substitution needs a ternary form"));
        }
        let rows: Vec<HomogeneousPoly> = m.iter().map(|row| Self::linear(row)).collect();
        if self.degree == 0 {
            return Ok(self.clone());
        }
        self.compose(&rows)
    }

    /// Dehomogenize a ternary form by setting the remaining variable to 1 and
    /// view it as a polynomial in `y_var` whose coefficients are polynomials
    /// in `x_var`. The declared y-degree is the form's degree.
    pub fn to_bipoly(&self, x_var: usize, y_var: usize) -> BiPoly {
        let d = self.degree as usize;
        let mut table = vec![vec![Complex64::new(0.0, 0.0); d + 1]; d + 1];
        for (exp, c) in &self.terms {
            table[exp[y_var] as usize][exp[x_var] as usize] += c;
        }
        BiPoly::new(table.into_iter().map(UniPoly::new).collect())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    exp: Vec<u32>,
    re: f64,
    #[serde(default)]
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    degree: u32,
    terms: Vec<TermRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    num_vars: Option<usize>,
}

impl Serialize for HomogeneousPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyRepr {
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermRepr {
                    exp: e.clone(),
                    re: c.re,
                    im: c.im,
                })
                .collect(),
            num_vars: if self.terms.is_empty() { Some(self.num_vars) } else { None },
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for HomogeneousPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = PolyRepr::deserialize(d)?;
        let num_vars = repr
            .num_vars
            .or_else(|| repr.terms.first().map(|t| t.exp.len()))
            .unwrap_or(3);
        HomogeneousPoly::from_terms(
            num_vars,
            repr.degree,
            repr.terms
                .into_iter()
                .map(|t| (t.exp, Complex64::new(t.re, t.im))),
        )
        .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn monomial_at_unit_vector() {
        let x0 = HomogeneousPoly::variable(3, 0);
        assert_eq!(x0.eval(&[c(1.0), c(0.0), c(0.0)]).unwrap(), c(1.0));
    }

    #[test]
    fn binomial_square() {
        let p = HomogeneousPoly::ternary(2, &[([2, 0, 0], 1.0), ([1, 1, 0], 2.0), ([0, 2, 0], 1.0)])
            .unwrap();
        assert_eq!(p.eval(&[c(1.0), c(1.0), c(0.0)]).unwrap(), c(4.0));
    }

    #[test]
    fn arity_mismatch_is_input_error() {
        let p = HomogeneousPoly::variable(3, 1);
        assert!(matches!(p.eval(&[c(1.0), c(2.0)]), Err(Error::Input { .. })));
    }

    #[test]
    fn exponent_sum_is_validated() {
        let err = HomogeneousPoly::ternary(2, &[([1, 0, 0], 1.0)]).unwrap_err();
        assert!(matches!(err, Error::Input { .. }));
    }

    #[test]
    fn partial_derivatives() {
        let x0sq = HomogeneousPoly::ternary(2, &[([2, 0, 0], 1.0)]).unwrap();
        let d = x0sq.partial(0).unwrap();
        assert_eq!(d, HomogeneousPoly::ternary(1, &[([1, 0, 0], 2.0)]).unwrap());
        let x1cube = HomogeneousPoly::ternary(3, &[([0, 3, 0], 1.0)]).unwrap();
        assert!(x1cube.partial(0).unwrap().is_zero());
        assert!(x1cube.partial(3).is_err());
    }

    #[test]
    fn json_shape() {
        let p = HomogeneousPoly::ternary(1, &[([1, 0, 0], 1.5)]).unwrap();
        let v = serde_json::to_value(&p).unwrap();
        assert_eq!(v["degree"], 1);
        assert_eq!(v["terms"][0]["exp"], serde_json::json!([1, 0, 0]));
        assert_eq!(v["terms"][0]["re"], 1.5);
        let back: HomogeneousPoly = serde_json::from_value(v).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn compose_with_squares() {
        // x0 + x1 composed with (x0^2, x1^2, x2^2)
        let l = HomogeneousPoly::ternary(1, &[([1, 0, 0], 1.0), ([0, 1, 0], 1.0)]).unwrap();
        let sq: Vec<_> = (0..3)
            .map(|i| HomogeneousPoly::variable(3, i).pow(2))
            .collect();
        let g = l.compose(&sq).unwrap();
        let expect = HomogeneousPoly::ternary(2, &[([2, 0, 0], 1.0), ([0, 2, 0], 1.0)]).unwrap();
        assert_eq!(g, expect);
    }
}
