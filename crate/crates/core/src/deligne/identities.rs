use super::pairing::{pairing_norm_on_fiber, PairingInput};
use crate::error::{Error, Result};
use crate::integrate::{fiber_integral, QuadratureConfig};
use crate::metrics::{metric_ratio_u, HermitianBundle};
use crate::poly::ParamForm;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Which identity to test.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IdentityKind {
    /// `log N(l0, l1) = log N(l1, l0)`
    Symmetry,
    /// `log N(l0 l0', l1) = log N(l0, l1) + log N(l0', l1)` on `L0 ⊗ L0'`
    Multilinearity {
        section0_prime: ParamForm,
        bundle0_prime: HermitianBundle,
    },
    /// Replace the metric of bundle `slot` by `bundle_prime` (same degree).
    ChangeOfMetric {
        slot: usize,
        bundle_prime: HermitianBundle,
    },
}

impl IdentityKind {
    pub fn name(&self) -> &'static str {
        match self {
            IdentityKind::Symmetry => "symmetry",
            IdentityKind::Multilinearity { .. } => "multilinearity",
            IdentityKind::ChangeOfMetric { .. } => "change_of_metric",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub kind: String,
    pub s: Complex64,
    /// measured side
    pub lhs: f64,
    /// predicted side
    pub rhs: f64,
    pub defect: f64,
    /// sum of the quadrature error estimates that enter `lhs` and `rhs`
    pub error_estimate: f64,
    /// `rhs` came from a closed form rather than quadrature
    pub analytic: bool,
}

/// `u` sampled at fixed points; `Some(c)` when it is constant to rounding.
fn constant_value(u: impl Fn(&[Complex64; 3]) -> f64) -> Option<f64> {
    let pts = [
        [Complex64::new(1.0, 0.0), Complex64::new(0.3, -0.2), Complex64::new(-0.5, 0.7)],
        [Complex64::new(-0.2, 0.9), Complex64::new(1.0, 0.0), Complex64::new(0.4, 0.1)],
        [Complex64::new(0.6, 0.6), Complex64::new(-0.8, 0.3), Complex64::new(1.0, 0.0)],
        [Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)],
    ];
    let vals: Vec<f64> = pts.iter().map(&u).collect();
    let c = vals[0];
    vals.iter()
        .all(|v| (v - c).abs() <= 1e-14 * (1.0 + c.abs()))
        .then_some(c)
}

/// Measures one identity of the pairing at `s`. Every identity is exact,
/// so the defect measures numerical error only.
pub fn identity_defect(
    kind: &IdentityKind,
    inp: &PairingInput,
    s: Complex64,
    cfg: &QuadratureConfig,
) -> Result<IdentityReport> {
    inp.validate()?;
    let fiber = inp.family.fiber(s)?;
    let l0 = inp.section0.specialize(s);
    let l1 = inp.section1.specialize(s);
    let (b0, b1) = (&inp.bundle0, &inp.bundle1);
    let base = pairing_norm_on_fiber(&fiber, b0, b1, &l0, &l1, cfg)?;
    let report = |lhs: f64, rhs: f64, err: f64, analytic: bool| IdentityReport {
        kind: kind.name().to_string(),
        s,
        lhs,
        rhs,
        defect: (lhs - rhs).abs(),
        error_estimate: err,
        analytic,
    };
    match kind {
        IdentityKind::Symmetry => {
            let other = pairing_norm_on_fiber(&fiber, b1, b0, &l1, &l0, cfg)?;
            Ok(report(
                base.log_norm,
                other.log_norm,
                base.quadrature.error_estimate + other.quadrature.error_estimate,
                false,
            ))
        }
        IdentityKind::Multilinearity {
            section0_prime,
            bundle0_prime,
        } => {
            bundle0_prime.validate("bundle0_prime")?;
            if section0_prime.degree() != bundle0_prime.degree {
                return Err(Error::input(
                    "section0_prime",
                    "degree does not match bundle0_prime",
                ));
            }
            let l0p = section0_prime.specialize(s);
            let prod = l0.mul(&l0p)?;
            let bt = b0.tensor(bundle0_prime);
            let joint = pairing_norm_on_fiber(&fiber, &bt, b1, &prod, &l1, cfg)?;
            let second = pairing_norm_on_fiber(&fiber, bundle0_prime, b1, &l0p, &l1, cfg)?;
            Ok(report(
                joint.log_norm,
                base.log_norm + second.log_norm,
                joint.quadrature.error_estimate
                    + base.quadrature.error_estimate
                    + second.quadrature.error_estimate,
                false,
            ))
        }
        IdentityKind::ChangeOfMetric { slot, bundle_prime } => {
            bundle_prime.validate("bundle_prime")?;
            // Changing the metric of one slot by u = log(‖·‖'/‖·‖) moves
            // log N by ∫ u c_1 of the other slot's bundle. For slot 0 the
            // point terms Σ m u(y) from the boundary and from the change of
            // curvature cancel (Poincaré–Lelong for l1).
            let (old, other) = match slot {
                0 => (b0, b1),
                1 => (b1, b0),
                _ => return Err(Error::input("slot", format!("must be 0 or 1, got {slot}"))),
            };
            let ratio = metric_ratio_u(old, bundle_prime)?;
            let swapped = if *slot == 0 {
                pairing_norm_on_fiber(&fiber, bundle_prime, b1, &l0, &l1, cfg)?
            } else {
                pairing_norm_on_fiber(&fiber, b0, bundle_prime, &l0, &l1, cfg)?
            };
            let lhs = swapped.log_norm - base.log_norm;
            let err = swapped.quadrature.error_estimate + base.quadrature.error_estimate;
            if let Some(c) = constant_value(|p| ratio.eval(p)) {
                let mass = other.degree as f64 * fiber.degree() as f64;
                return Ok(report(lhs, c * mass, err, true));
            }
            let predicted = fiber_integral(&fiber, &|p| ratio.eval(p), other, cfg)?;
            Ok(report(lhs, predicted.value, err + predicted.error_estimate, false))
        }
    }
}
