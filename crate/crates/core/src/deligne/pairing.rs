use crate::error::{Error, Result};
use crate::geometry::{
    intersect, CurveFamily, Fiber, FiberDivisor, DEFAULT_RESIDUAL_TOL,
};
use crate::integrate::{ensure_smooth, log_norm_integral, QuadratureConfig, QuadratureResult};
use crate::metrics::HermitianBundle;
use crate::poly::{HomogeneousPoly, ParamForm};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Sections closer than this (normalized residual) to vanishing at a
/// divisor point count as intersecting.
pub const SECTION_COLLISION_TOL: f64 = 1e-10;

/// Data of a pairing `⟨l0, l1⟩` on a family; sections may depend on `s`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairingInput {
    pub family: CurveFamily,
    pub bundle0: HermitianBundle,
    pub bundle1: HermitianBundle,
    pub section0: ParamForm,
    pub section1: ParamForm,
}

impl PairingInput {
    pub fn new(
        family: CurveFamily,
        bundle0: HermitianBundle,
        bundle1: HermitianBundle,
        section0: ParamForm,
        section1: ParamForm,
    ) -> Result<Self> {
        let inp = PairingInput {
            family,
            bundle0,
            bundle1,
            section0,
            section1,
        };
        inp.validate()?;
        Ok(inp)
    }

    /// Sections that do not depend on `s`.
    pub fn constant_sections(
        family: CurveFamily,
        bundle0: HermitianBundle,
        bundle1: HermitianBundle,
        section0: &HomogeneousPoly,
        section1: &HomogeneousPoly,
    ) -> Result<Self> {
        Self::new(
            family,
            bundle0,
            bundle1,
            ParamForm::constant(section0),
            ParamForm::constant(section1),
        )
    }

    pub fn validate(&self) -> Result<()> {
        self.bundle0.validate("bundle0")?;
        self.bundle1.validate("bundle1")?;
        for (name, sec, b) in [
            ("section0", &self.section0, &self.bundle0),
            ("section1", &self.section1, &self.bundle1),
        ] {
            if sec.num_vars() != 3 {
                return Err(Error::input(name, "must be a ternary form"));
            }
            if sec.is_zero() {
                return Err(Error::input(name, "section is identically zero"));
            }
            if sec.degree() != b.degree {
                return Err(Error::input(
                    name,
                    format!(
                        "section degree {} does not match bundle degree {}",
                        sec.degree(),
                        b.degree
                    ),
                ));
            }
        }
        Ok(())
    }

    /// The same pairing with the two slots exchanged.
    pub fn swapped(&self) -> PairingInput {
        PairingInput {
            family: self.family.clone(),
            bundle0: self.bundle1.clone(),
            bundle1: self.bundle0.clone(),
            section0: self.section1.clone(),
            section1: self.section0.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairingNormResult {
    pub s: Complex64,
    pub norm: f64,
    pub log_norm: f64,
    /// `Σ m_y log ‖l0(y)‖` over `div(l1) ∩ X_s`
    pub boundary_term: f64,
    /// `∫ log ‖l1‖ c_1(L̄0)`
    pub integral_term: f64,
    pub divisor: FiberDivisor,
    pub quadrature: QuadratureResult,
}

/// `Σ m_y log ‖l0(y)‖_{b0}`.
pub fn log_norm0(divisor: &FiberDivisor, b0: &HermitianBundle, l0: &HomogeneousPoly) -> Result<f64> {
    let mut acc = 0.0;
    for (p, m) in &divisor.points {
        if p.residual(l0) <= SECTION_COLLISION_TOL {
            return Err(Error::IntersectingSections {
                point: p.to_string(),
            });
        }
        acc += *m as f64 * b0.log_norm(l0, &p.coords())?;
    }
    Ok(acc)
}

/// `∏_y ‖l0(y)‖^{m_y}`; 1 for the empty divisor.
pub fn norm0(divisor: &FiberDivisor, b0: &HermitianBundle, l0: &HomogeneousPoly) -> Result<f64> {
    log_norm0(divisor, b0, l0).map(f64::exp)
}

/// `‖⟨l0, l1⟩‖` on one fiber.
pub fn pairing_norm_on_fiber(
    fiber: &Fiber,
    b0: &HermitianBundle,
    b1: &HermitianBundle,
    l0: &HomogeneousPoly,
    l1: &HomogeneousPoly,
    cfg: &QuadratureConfig,
) -> Result<PairingNormResult> {
    for (name, l, b) in [("section0", l0, b0), ("section1", l1, b1)] {
        if l.is_zero() {
            return Err(Error::input(name, format!("vanishes identically at s = {}", fiber.s)));
        }
        if l.degree() != b.degree {
            return Err(Error::input(
                name,
                format!("section degree {} does not match bundle degree {}", l.degree(), b.degree),
            ));
        }
    }
    ensure_smooth(fiber)?;
    let divisor = intersect(fiber, l1, DEFAULT_RESIDUAL_TOL)?;
    let boundary_term = log_norm0(&divisor, b0, l0)?;
    let quadrature = log_norm_integral(fiber, b0, b1, l1, cfg)?;
    let integral_term = quadrature.value;
    let log_norm = boundary_term + integral_term;
    Ok(PairingNormResult {
        s: fiber.s,
        norm: log_norm.exp(),
        log_norm,
        boundary_term,
        integral_term,
        divisor,
        quadrature,
    })
}

/// `‖⟨l0, l1⟩‖(s)`.
pub fn pairing_norm(inp: &PairingInput, s: Complex64, cfg: &QuadratureConfig) -> Result<PairingNormResult> {
    inp.validate()?;
    let fiber = inp.family.fiber(s)?;
    pairing_norm_on_fiber(
        &fiber,
        &inp.bundle0,
        &inp.bundle1,
        &inp.section0.specialize(s),
        &inp.section1.specialize(s),
        cfg,
    )
}
