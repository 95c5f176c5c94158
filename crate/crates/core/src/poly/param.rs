use super::{Exponent, HomogeneousPoly, UniPoly};
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Homogeneous form whose coefficients are polynomials in a base parameter
/// `s`. Specializing at a value of `s` yields a [`HomogeneousPoly`].
#[derive(Debug, Clone, PartialEq)]
pub struct ParamForm {
    num_vars: usize,
    degree: u32,
    terms: BTreeMap<Exponent, UniPoly>,
}

impl ParamForm {
    pub fn new<I>(num_vars: usize, degree: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponent, UniPoly)>,
    {
        let mut out = ParamForm {
            num_vars,
            degree,
            terms: BTreeMap::new(),
        };
        for (exp, c) in terms {
            if exp.len() != num_vars || exp.iter().sum::<u32>() != degree {
                return Err(Error::input(
                    "terms.exp",
                    format!("exponent {exp:?} does not match {num_vars} variables of degree {degree}"),
                ));
            }
            let merged = match out.terms.remove(&exp) {
                Some(prev) => &prev + &c,
                None => c,
            };
            if !merged.is_zero() {
                out.terms.insert(exp, merged);
            }
        }
        Ok(out)
    }

    /// A form whose coefficients do not depend on `s`.
    pub fn constant(p: &HomogeneousPoly) -> Self {
        ParamForm {
            num_vars: p.num_vars(),
            degree: p.degree(),
            terms: p
                .terms()
                .map(|(e, c)| (e.clone(), UniPoly::constant(*c)))
                .collect(),
        }
    }

    /// Ternary form from real `s`-polynomials: `(exponent, [c0, c1, ...])`
    /// means `(c0 + c1 s + ...) * x^exponent`.
    pub fn ternary(degree: u32, terms: &[([u32; 3], &[f64])]) -> Result<Self> {
        Self::new(
            3,
            degree,
            terms
                .iter()
                .map(|(e, cs)| (e.to_vec(), UniPoly::from_real(cs))),
        )
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest modulus of any coefficient at `s`, and the same with every
    /// coefficient polynomial's terms taken in absolute value (the rounding
    /// scale).
    pub fn coefficient_scale(&self, s: Complex64) -> f64 {
        self.terms
            .values()
            .map(|c| c.eval_abs(s))
            .fold(0.0, f64::max)
    }

    pub fn specialize(&self, s: Complex64) -> HomogeneousPoly {
        HomogeneousPoly::from_terms(
            self.num_vars,
            self.degree,
            self.terms.iter().map(|(e, c)| (e.clone(), c.eval(s))),
        )
        .expect("exponents validated at construction")
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &UniPoly)> {
        self.terms.iter()
    }
}

/// A complex number as `[re, im]`; `{"re": .., "im": ..}` is also read.
pub(crate) struct ComplexRepr {
    pub re: f64,
    pub im: f64,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ComplexIn {
    Pair([f64; 2]),
    Object {
        re: f64,
        #[serde(default)]
        im: f64,
    },
    Real(f64),
}

impl Serialize for ComplexRepr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.re, self.im].serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexRepr {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(match ComplexIn::deserialize(d)? {
            ComplexIn::Pair([re, im]) | ComplexIn::Object { re, im } => ComplexRepr { re, im },
            ComplexIn::Real(re) => ComplexRepr { re, im: 0.0 },
        })
    }
}

impl From<Complex64> for ComplexRepr {
    fn from(c: Complex64) -> Self {
        ComplexRepr { re: c.re, im: c.im }
    }
}

impl From<&ComplexRepr> for Complex64 {
    fn from(c: &ComplexRepr) -> Self {
        Complex64::new(c.re, c.im)
    }
}

#[derive(Serialize, Deserialize)]
struct ParamTermRepr {
    exp: Vec<u32>,
    /// coefficients of the s-polynomial, lowest degree first
    coeffs: Vec<ComplexRepr>,
}

#[derive(Serialize, Deserialize)]
struct ParamFormRepr {
    degree: u32,
    terms: Vec<ParamTermRepr>,
}

impl Serialize for ParamForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ParamFormRepr {
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| ParamTermRepr {
                    exp: e.clone(),
                    coeffs: c.coeffs().iter().map(|z| ComplexRepr::from(*z)).collect(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ParamForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = ParamFormRepr::deserialize(d)?;
        let num_vars = repr.terms.first().map(|t| t.exp.len()).unwrap_or(3);
        ParamForm::new(
            num_vars,
            repr.degree,
            repr.terms.into_iter().map(|t| {
                (
                    t.exp,
                    UniPoly::new(t.coeffs.iter().map(Complex64::from).collect()),
                )
            }),
        )
        .map_err(serde::de::Error::custom)
    }
}
