use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

/// Complex Hessian `H[i][j] = ∂²ψ / ∂p_i ∂p̄_j` in ambient coordinates.
pub type Hessian = [[Complex64; 3]; 3];

pub type WeightFn = Arc<dyn Fn(&[Complex64; 3]) -> f64 + Send + Sync>;
pub type HessianFn = Arc<dyn Fn(&[Complex64; 3]) -> Hessian + Send + Sync>;

/// Finite-difference step, relative to the unit-normalized representative.
pub const FD_STEP: f64 = 1e-4;

/// A weight given by code. Never serialized.
#[derive(Clone)]
pub struct CustomWeight {
    pub label: String,
    value: WeightFn,
    hessian: Option<HessianFn>,
}

impl CustomWeight {
    /// `value` must be invariant under `p ↦ λp`. Without `hessian` the
    /// Levi form falls back to finite differences.
    pub fn new(label: impl Into<String>, value: WeightFn, hessian: Option<HessianFn>) -> Self {
        CustomWeight {
            label: label.into(),
            value,
            hessian,
        }
    }
}

impl fmt::Debug for CustomWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomWeight")
            .field("label", &self.label)
            .field("analytic_hessian", &self.hessian.is_some())
            .finish()
    }
}

/// The function `ψ` in `‖·‖ = ‖·‖_FS · exp(-ψ)`.
///
/// Named variants round-trip through JSON under `"name"`; `Custom` is
/// construction-time only.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Weight {
    #[default]
    Zero,
    Constant {
        value: f64,
    },
    /// `amplitude · |x_index|² / ‖x‖²`
    CoordinateBump {
        index: usize,
        amplitude: f64,
    },
    /// `amplitude · |Σ c_k x_k|² / ‖x‖²`
    LinearBump {
        coeffs: [Complex64; 3],
        amplitude: f64,
    },
    Sum {
        terms: Vec<Weight>,
    },
    #[serde(skip)]
    Custom(CustomWeight),
}

fn zero3() -> Hessian {
    [[Complex64::new(0.0, 0.0); 3]; 3]
}

fn norm_sqr(p: &[Complex64; 3]) -> f64 {
    p.iter().map(|z| z.norm_sqr()).sum()
}

fn unit(index: usize) -> [Complex64; 3] {
    let mut c = [Complex64::new(0.0, 0.0); 3];
    c[index] = Complex64::new(1.0, 0.0);
    c
}

fn bump_value(c: &[Complex64; 3], a: f64, p: &[Complex64; 3]) -> f64 {
    let lam: Complex64 = (0..3).map(|k| c[k] * p[k]).sum();
    a * lam.norm_sqr() / norm_sqr(p)
}

/// Hessian of `a |λ(p)|² / ‖p‖²` by the quotient rule.
fn bump_hessian(c: &[Complex64; 3], a: f64, p: &[Complex64; 3]) -> Hessian {
    let lam: Complex64 = (0..3).map(|k| c[k] * p[k]).sum();
    let q = lam.norm_sqr();
    let n = norm_sqr(p);
    let mut h = zero3();
    for i in 0..3 {
        for l in 0..3 {
            let q_il = c[i] * c[l].conj();
            let q_i = c[i] * lam.conj();
            let q_l = lam * c[l].conj();
            let n_i = p[i].conj();
            let n_l = p[l];
            let n_il = if i == l { 1.0 } else { 0.0 };
            h[i][l] = a
                * (q_il / n - (q_i * n_l + q_l * n_i) / (n * n) - q * n_il / (n * n)
                    + 2.0 * q * n_i * n_l / (n * n * n));
        }
    }
    h
}

/// Levi form `Σ H[i][j] v_i v̄_j` of a Hessian.
pub fn levi_from_hessian(h: &Hessian, v: &[Complex64; 3]) -> f64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..3 {
        for j in 0..3 {
            acc += h[i][j] * v[i] * v[j].conj();
        }
    }
    acc.re
}

/// `∂z ∂z̄ f(p + z v)` at `z = 0` by a five-point Laplacian with one
/// Richardson step.
pub fn levi_fd<F>(f: &F, p: &[Complex64; 3], v: &[Complex64; 3]) -> f64
where
    F: Fn(&[Complex64; 3]) -> f64 + ?Sized,
{
    let n = norm_sqr(p).sqrt();
    if n == 0.0 {
        return f64::NAN;
    }
    let pn = [p[0] / n, p[1] / n, p[2] / n];
    let vn = [v[0] / n, v[1] / n, v[2] / n];
    let vlen = norm_sqr(&vn).sqrt();
    if vlen == 0.0 {
        return 0.0;
    }
    let w = [vn[0] / vlen, vn[1] / vlen, vn[2] / vlen];
    let g = |z: Complex64| f(&[pn[0] + z * w[0], pn[1] + z * w[1], pn[2] + z * w[2]]);
    let g0 = g(Complex64::new(0.0, 0.0));
    let lap = |h: f64| {
        let s = g(Complex64::new(h, 0.0))
            + g(Complex64::new(-h, 0.0))
            + g(Complex64::new(0.0, h))
            + g(Complex64::new(0.0, -h))
            - 4.0 * g0;
        s / (4.0 * h * h)
    };
    let coarse = lap(FD_STEP);
    let fine = lap(FD_STEP / 2.0);
    (4.0 * fine - coarse) / 3.0 * vlen * vlen
}

/// Full complex Hessian from finite-difference Levi forms along
/// `e_i`, `e_i + e_j` and `e_i + i e_j`.
pub fn hessian_fd<F>(f: &F, p: &[Complex64; 3]) -> Hessian
where
    F: Fn(&[Complex64; 3]) -> f64 + ?Sized,
{
    let mut h = zero3();
    let diag: Vec<f64> = (0..3).map(|i| levi_fd(f, p, &unit(i))).collect();
    for i in 0..3 {
        h[i][i] = Complex64::new(diag[i], 0.0);
        for j in (i + 1)..3 {
            let mut v = unit(i);
            v[j] = Complex64::new(1.0, 0.0);
            let re = (levi_fd(f, p, &v) - diag[i] - diag[j]) / 2.0;
            v[j] = Complex64::new(0.0, 1.0);
            let im = (levi_fd(f, p, &v) - diag[i] - diag[j]) / 2.0;
            h[i][j] = Complex64::new(re, im);
            h[j][i] = h[i][j].conj();
        }
    }
    h
}

impl Weight {
    pub fn custom(
        label: impl Into<String>,
        value: impl Fn(&[Complex64; 3]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Weight::Custom(CustomWeight::new(label, Arc::new(value), None))
    }

    pub fn custom_with_hessian(
        label: impl Into<String>,
        value: impl Fn(&[Complex64; 3]) -> f64 + Send + Sync + 'static,
        hessian: impl Fn(&[Complex64; 3]) -> Hessian + Send + Sync + 'static,
    ) -> Self {
        Weight::Custom(CustomWeight::new(
            label,
            Arc::new(value),
            Some(Arc::new(hessian)),
        ))
    }

    pub fn is_serializable(&self) -> bool {
        match self {
            Weight::Custom(_) => false,
            Weight::Sum { terms } => terms.iter().all(Weight::is_serializable),
            _ => true,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Weight::Zero => true,
            Weight::Constant { value } => *value == 0.0,
            Weight::CoordinateBump { amplitude, .. } | Weight::LinearBump { amplitude, .. } => {
                *amplitude == 0.0
            }
            Weight::Sum { terms } => terms.iter().all(Weight::is_zero),
            Weight::Custom(_) => false,
        }
    }

    /// Checks parameters; `field` names the weight in error messages.
    pub fn validate(&self, field: &str) -> crate::Result<()> {
        let bad = |m: String| Err(crate::Error::input(field, m));
        match self {
            Weight::Constant { value } if !value.is_finite() => bad("constant must be finite".into()),
            Weight::CoordinateBump { index, amplitude } => {
                if *index > 2 {
                    bad(format!("coordinate index {index} out of range 0..3"))
                } else if !amplitude.is_finite() {
                    bad("amplitude must be finite".into())
                } else {
                    Ok(())
                }
            }
            Weight::LinearBump { coeffs, amplitude } => {
                if !amplitude.is_finite() || coeffs.iter().any(|c| !c.is_finite()) {
                    bad("parameters must be finite".into())
                } else {
                    Ok(())
                }
            }
            Weight::Sum { terms } => terms.iter().try_for_each(|t| t.validate(field)),
            _ => Ok(()),
        }
    }

    pub fn value(&self, p: &[Complex64; 3]) -> f64 {
        match self {
            Weight::Zero => 0.0,
            Weight::Constant { value } => *value,
            Weight::CoordinateBump { index, amplitude } => bump_value(&unit(*index), *amplitude, p),
            Weight::LinearBump { coeffs, amplitude } => bump_value(coeffs, *amplitude, p),
            Weight::Sum { terms } => terms.iter().map(|t| t.value(p)).sum(),
            Weight::Custom(c) => (c.value)(p),
        }
    }

    /// Analytic Hessian where available.
    pub fn hessian(&self, p: &[Complex64; 3]) -> Option<Hessian> {
        match self {
            Weight::Zero | Weight::Constant { .. } => Some(zero3()),
            Weight::CoordinateBump { index, amplitude } => {
                Some(bump_hessian(&unit(*index), *amplitude, p))
            }
            Weight::LinearBump { coeffs, amplitude } => Some(bump_hessian(coeffs, *amplitude, p)),
            Weight::Sum { terms } => {
                let mut acc = zero3();
                for t in terms {
                    let h = t.hessian(p)?;
                    for i in 0..3 {
                        for j in 0..3 {
                            acc[i][j] += h[i][j];
                        }
                    }
                }
                Some(acc)
            }
            Weight::Custom(c) => c.hessian.as_ref().map(|h| h(p)),
        }
    }

    /// Hessian, analytic or by finite differences.
    pub fn hessian_or_fd(&self, p: &[Complex64; 3]) -> Hessian {
        self.hessian(p)
            .unwrap_or_else(|| hessian_fd(&|q: &[Complex64; 3]| self.value(q), p))
    }

    /// `∂z ∂z̄ ψ(p + z v)` at `z = 0`.
    pub fn levi(&self, p: &[Complex64; 3], v: &[Complex64; 3]) -> f64 {
        match self {
            Weight::Zero | Weight::Constant { .. } => 0.0,
            Weight::CoordinateBump { index, amplitude } => {
                levi_from_hessian(&bump_hessian(&unit(*index), *amplitude, p), v)
            }
            Weight::LinearBump { coeffs, amplitude } => {
                levi_from_hessian(&bump_hessian(coeffs, *amplitude, p), v)
            }
            Weight::Sum { terms } => terms.iter().map(|t| t.levi(p, v)).sum(),
            Weight::Custom(c) => match &c.hessian {
                Some(h) => levi_from_hessian(&h(p), v),
                None => levi_fd(&*c.value, p, v),
            },
        }
    }

    /// `self + other`, flattening nested sums and dropping zeros.
    pub fn plus(&self, other: &Weight) -> Weight {
        let mut terms = Vec::new();
        for w in [self, other] {
            match w {
                Weight::Sum { terms: inner } => terms.extend(inner.iter().cloned()),
                Weight::Zero => {}
                w => terms.push(w.clone()),
            }
        }
        match terms.len() {
            0 => Weight::Zero,
            1 => terms.pop().unwrap_or_default(),
            _ => Weight::Sum { terms },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn bump_is_projective() {
        let w = Weight::CoordinateBump {
            index: 1,
            amplitude: 0.7,
        };
        let p = [c(0.3, 0.1), c(-1.2, 0.4), c(0.5, -0.9)];
        let lam = c(2.5, -1.5);
        let q = [p[0] * lam, p[1] * lam, p[2] * lam];
        assert!((w.value(&p) - w.value(&q)).abs() < 1e-14);
    }

    #[test]
    fn fd_levi_matches_analytic() {
        let w = Weight::LinearBump {
            coeffs: [c(0.2, 0.1), c(1.0, 0.0), c(-0.3, 0.4)],
            amplitude: 0.5,
        };
        let p = [c(0.3, 0.1), c(-1.2, 0.4), c(0.5, -0.9)];
        let v = [c(1.0, 0.0), c(0.2, -0.7), c(0.0, 0.0)];
        let exact = w.levi(&p, &v);
        let fd = levi_fd(&|q: &[Complex64; 3]| w.value(q), &p, &v);
        assert!((exact - fd).abs() < 1e-7, "{exact} vs {fd}");
    }

    #[test]
    fn json_names() {
        let w = Weight::CoordinateBump {
            index: 2,
            amplitude: 0.1,
        };
        let s = serde_json::to_string(&w).unwrap();
        assert_eq!(s, r#"{"name":"coordinate_bump","index":2,"amplitude":0.1}"#);
        let custom = Weight::custom("x", |_| 1.0);
        assert!(serde_json::to_string(&custom).is_err());
    }
}
