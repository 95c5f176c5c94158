use crate::error::{Error, Result};
use crate::poly::{ComplexRepr, HomogeneousPoly, ParamForm};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Default distance within which a base value counts as adjacent to a
/// declared degenerate value.
pub const DEFAULT_ADJACENCY_RADIUS: f64 = 1e-3;

/// Axis-aligned rectangle in the complex base.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BaseDomain {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl BaseDomain {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        let d = BaseDomain {
            re_min,
            re_max,
            im_min,
            im_max,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = [self.re_min, self.re_max, self.im_min, self.im_max]
            .iter()
            .all(|v| v.is_finite())
            && self.re_max > self.re_min
            && self.im_max > self.im_min;
        if ok {
            Ok(())
        } else {
            Err(Error::input("base_domain", "rectangle must have positive area"))
        }
    }

    pub fn contains(&self, s: Complex64) -> bool {
        s.re >= self.re_min && s.re <= self.re_max && s.im >= self.im_min && s.im <= self.im_max
    }
}

/// One-parameter family of plane curves `F(x0, x1, x2; s) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveFamily {
    pub form: ParamForm,
    pub base_domain: BaseDomain,
    pub declared_degenerate: Vec<Complex64>,
    pub adjacency_radius: f64,
}

/// A fiber `X_s` of a family.
#[derive(Debug, Clone, PartialEq)]
pub struct Fiber {
    pub s: Complex64,
    pub curve: HomogeneousPoly,
    /// within the adjacency radius of a declared degenerate value
    pub degenerate_adjacent: bool,
}

impl Fiber {
    /// A fiber not attached to any family.
    pub fn standalone(curve: HomogeneousPoly) -> Self {
        Fiber {
            s: Complex64::new(0.0, 0.0),
            curve,
            degenerate_adjacent: false,
        }
    }

    pub fn degree(&self) -> u32 {
        self.curve.degree()
    }
}

impl CurveFamily {
    pub fn new(form: ParamForm, base_domain: BaseDomain, declared_degenerate: Vec<Complex64>) -> Result<Self> {
        if form.num_vars() != 3 {
            return Err(Error::input("form", "families must be ternary forms"));
        }
        if form.degree() == 0 {
            return Err(Error::input("form.degree", "fiber degree must be positive"));
        }
        if form.is_zero() {
            return Err(Error::input("form", "zero form"));
        }
        base_domain.validate()?;
        Ok(CurveFamily {
            form,
            base_domain,
            declared_degenerate,
            adjacency_radius: DEFAULT_ADJACENCY_RADIUS,
        })
    }

    /// Family whose form does not depend on `s`.
    pub fn constant(curve: &HomogeneousPoly, base_domain: BaseDomain) -> Result<Self> {
        Self::new(ParamForm::constant(curve), base_domain, Vec::new())
    }

    /// `y^2 z - x (x - z)(x - s z)`, nodal at `s = 0` and `s = 1`.
    pub fn legendre() -> Self {
        let form = ParamForm::ternary(
            3,
            &[
                ([0, 2, 1], &[1.0]),
                ([3, 0, 0], &[-1.0]),
                ([2, 0, 1], &[1.0, 1.0]),
                ([1, 0, 2], &[0.0, -1.0]),
            ],
        )
        .expect("valid form");
        CurveFamily::new(
            form,
            BaseDomain::new(-2.0, 3.0, -2.0, 2.0).expect("valid domain"),
            vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        )
        .expect("valid family")
    }

    /// The line `x2 = 0`, constant over the unit square.
    pub fn projective_line() -> Self {
        CurveFamily::constant(
            &HomogeneousPoly::variable(3, 2),
            BaseDomain::new(-1.0, 1.0, -1.0, 1.0).expect("valid domain"),
        )
        .expect("valid family")
    }

    pub fn degree(&self) -> u32 {
        self.form.degree()
    }

    /// Specialize the family at `s`.
    pub fn fiber(&self, s: Complex64) -> Result<Fiber> {
        if !self.base_domain.contains(s) {
            return Err(Error::input("s", format!("{s} lies outside the base domain")));
        }
        let curve = self.form.specialize(s);
        // every coefficient cancelled, or cancelled down to rounding
        let scale = self.form.coefficient_scale(s);
        if curve.is_zero() || curve.max_abs_coeff() <= 1e-13 * scale {
            return Err(Error::Flatness {
                s: s.to_string(),
                message: format!(
                    "specialized form vanishes identically; fiber degree drops below {}",
                    self.degree()
                ),
            });
        }
        let degenerate_adjacent = self
            .declared_degenerate
            .iter()
            .any(|d| (d - s).norm() <= self.adjacency_radius);
        Ok(Fiber {
            s,
            curve,
            degenerate_adjacent,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct FamilyRepr {
    form: ParamForm,
    base_domain: BaseDomain,
    #[serde(default)]
    degenerate: Vec<ComplexRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    adjacency_radius: Option<f64>,
}

impl Serialize for CurveFamily {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FamilyRepr {
            form: self.form.clone(),
            base_domain: self.base_domain,
            degenerate: self
                .declared_degenerate
                .iter()
                .map(|z| ComplexRepr::from(*z))
                .collect(),
            adjacency_radius: Some(self.adjacency_radius),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CurveFamily {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = FamilyRepr::deserialize(d)?;
        let mut fam = CurveFamily::new(
            repr.form,
            repr.base_domain,
            repr.degenerate.iter().map(Complex64::from).collect(),
        )
        .map_err(serde::de::Error::custom)?;
        if let Some(r) = repr.adjacency_radius {
            fam.adjacency_radius = r;
        }
        Ok(fam)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_fiber_specializes() {
        let fam = CurveFamily::legendre();
        let f = fam.fiber(Complex64::new(2.0, 0.0)).unwrap();
        // y^2 z - x^3 + 3 x^2 z - 2 x z^2
        assert_eq!(f.curve.coeff(&[2, 0, 1]), Complex64::new(3.0, 0.0));
        assert_eq!(f.curve.coeff(&[1, 0, 2]), Complex64::new(-2.0, 0.0));
        assert!(!f.degenerate_adjacent);
        let near = fam.fiber(Complex64::new(5e-4, 0.0)).unwrap();
        assert!(near.degenerate_adjacent);
    }

    #[test]
    fn outside_domain_rejected() {
        let fam = CurveFamily::legendre();
        assert!(matches!(
            fam.fiber(Complex64::new(10.0, 0.0)),
            Err(Error::Input { .. })
        ));
    }

    #[test]
    fn vanishing_specialization_is_flatness_violation() {
        // (s - 1) * x0 : zero at s = 1
        let form = ParamForm::ternary(1, &[([1, 0, 0], &[-1.0, 1.0])]).unwrap();
        let fam = CurveFamily::new(form, BaseDomain::new(0.0, 2.0, -1.0, 1.0).unwrap(), vec![]).unwrap();
        assert!(matches!(
            fam.fiber(Complex64::new(1.0, 0.0)),
            Err(Error::Flatness { .. })
        ));
        assert!(fam.fiber(Complex64::new(0.5, 0.0)).is_ok());
    }

    #[test]
    fn constant_family_gives_identical_fibers() {
        let line = HomogeneousPoly::variable(3, 2);
        let fam = CurveFamily::constant(&line, BaseDomain::new(-1.0, 1.0, -1.0, 1.0).unwrap()).unwrap();
        let a = fam.fiber(Complex64::new(0.1, 0.2)).unwrap();
        let b = fam.fiber(Complex64::new(-0.7, 0.0)).unwrap();
        assert_eq!(a.curve, b.curve);
    }

    #[test]
    fn zero_area_domain_rejected() {
        assert!(BaseDomain::new(0.0, 0.0, -1.0, 1.0).is_err());
    }

    #[test]
    fn family_json_roundtrip() {
        let fam = CurveFamily::legendre();
        let text = serde_json::to_string(&fam).unwrap();
        let back: CurveFamily = serde_json::from_str(&text).unwrap();
        assert_eq!(back, fam);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert!(v["base_domain"]["re_min"].is_number());
        assert!(v["degenerate"].is_array());
    }
}
