//! Polynomial roots by Aberth–Ehrlich simultaneous iteration, with a
//! companion-matrix eigenvalue fallback and multiplicity-aware clustering.

use super::UniPoly;
use crate::error::{Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Default separation below which two roots count as a double root, after
/// scaling by `max(1, |root|)`.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-7;

const MAX_ABERTH_ITERS: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub value: Complex64,
    pub multiplicity: usize,
}

/// All roots of `p` with multiplicities summing to its degree.
///
/// Roots whose separation is consistent with an m-fold root at double
/// precision are merged: a cluster of `m` roots is accepted when all of them
/// lie within `tol^(2/m) * max(1, |centroid|)` of their centroid. For `m = 2`
/// this is `tol` itself; higher multiplicities split further apart under
/// rounding (spread ~ eps^(1/m)), hence the wider radius.
pub fn roots(p: &UniPoly, tol: f64) -> Result<Vec<Root>> {
    let raw = all_roots(p)?;
    let mut out = cluster(&raw, tol);
    for r in out.iter_mut().filter(|r| r.multiplicity > 1) {
        r.value = polish_multiple(p, r.value, r.multiplicity);
    }
    Ok(out)
}

/// Newton on `p^(m-1)`, which has a simple root at an m-fold root of `p`.
fn polish_multiple(p: &UniPoly, start: Complex64, m: usize) -> Complex64 {
    let mut q = p.clone();
    for _ in 1..m {
        q = q.derivative();
    }
    let spread = tol_guard(start);
    let mut z = start;
    for _ in 0..20 {
        let (v, dv) = q.eval_with_derivative(z);
        if dv == Complex64::new(0.0, 0.0) {
            break;
        }
        let step = v / dv;
        z -= step;
        if step.norm() <= 4.0 * f64::EPSILON * z.norm().max(1.0) {
            break;
        }
    }
    if (z - start).norm() <= spread && z.re.is_finite() && z.im.is_finite() {
        z
    } else {
        start
    }
}

fn tol_guard(z: Complex64) -> f64 {
    1e-3 * z.norm().max(1.0)
}

/// Every root of `p`, repeated according to numerical multiplicity, with no
/// clustering.
pub fn all_roots(p: &UniPoly) -> Result<Vec<Complex64>> {
    let n = p
        .degree()
        .ok_or_else(|| Error::input("p", "zero polynomial has no well-defined roots"))?;
    if n == 0 {
        return Ok(Vec::new());
    }
    let c = p.coeffs();
    // exact zero roots
    let zeros = c.iter().take_while(|z| **z == Complex64::new(0.0, 0.0)).count();
    let mut out = vec![Complex64::new(0.0, 0.0); zeros];
    let reduced = UniPoly::new(c[zeros..].to_vec());
    match reduced.degree() {
        Some(0) | None => {}
        Some(1) => out.push(-reduced.coeff(0) / reduced.coeff(1)),
        Some(2) => out.extend(quadratic(reduced.coeff(2), reduced.coeff(1), reduced.coeff(0))),
        Some(_) => match aberth(&reduced) {
            Some(r) => out.extend(r),
            None => out.extend(companion_roots(&reduced)?),
        },
    }
    Ok(out)
}

/// Numerically stable quadratic formula.
pub fn quadratic(a: Complex64, b: Complex64, c: Complex64) -> [Complex64; 2] {
    let disc = (b * b - 4.0 * a * c).sqrt();
    // pick the sign that avoids cancellation
    let q = if (b.conj() * disc).re >= 0.0 {
        -0.5 * (b + disc)
    } else {
        -0.5 * (b - disc)
    };
    if q == Complex64::new(0.0, 0.0) {
        return [Complex64::new(0.0, 0.0); 2];
    }
    [q / a, c / q]
}

fn aberth(p: &UniPoly) -> Option<Vec<Complex64>> {
    let n = p.degree()?;
    let lead = p.leading();
    let monic = p.scale(lead.inv());
    let coeffs = monic.coeffs();
    // initial radius: geometric mean of root moduli, bounded by Cauchy's bound
    let cauchy = 1.0 + coeffs[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut radius = coeffs[0].norm().powf(1.0 / n as f64);
    if !radius.is_finite() || radius == 0.0 {
        radius = 1.0;
    }
    radius = radius.min(cauchy);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 2.0 * PI * k as f64 / n as f64 + 0.4))
        .collect();
    aberth_iterate(&monic, &mut z, MAX_ABERTH_ITERS).then_some(z)
}

/// Aberth iteration on a monic polynomial from the given starting values.
fn aberth_iterate(monic: &UniPoly, z: &mut [Complex64], max_iters: usize) -> bool {
    let n = z.len();
    let mut converged = vec![false; n];
    for _ in 0..max_iters {
        let mut all_done = true;
        for k in 0..n {
            if converged[k] {
                continue;
            }
            let (v, dv) = monic.eval_with_derivative(z[k]);
            if v == Complex64::new(0.0, 0.0) {
                converged[k] = true;
                continue;
            }
            let ratio = v / dv;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| (z[k] - z[j]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !step.re.is_finite() || !step.im.is_finite() {
                return false;
            }
            z[k] -= step;
            let scale = z[k].norm().max(1e-300);
            let residual_floor = 4.0 * f64::EPSILON * monic.eval_abs(z[k]);
            if step.norm() <= 4.0 * f64::EPSILON * scale
                || monic.eval(z[k]).norm() <= residual_floor
            {
                converged[k] = true;
            } else {
                all_done = false;
            }
        }
        if all_done {
            return true;
        }
    }
    false
}

/// Roots of `p` starting from `guess` (one value per root), falling back to
/// [`all_roots`] when the guess has the wrong length or fails to converge.
pub fn roots_from_guess(p: &UniPoly, guess: &[Complex64]) -> Result<Vec<Complex64>> {
    match p.degree() {
        Some(n) if n >= 3 && guess.len() == n && p.coeff(0) != Complex64::new(0.0, 0.0) => {
            let monic = p.scale(p.leading().inv());
            let mut z = guess.to_vec();
            // distinct starting values are required by the repulsion term
            for i in 1..n {
                for j in 0..i {
                    if z[i] == z[j] {
                        let bump = Complex64::new(1e-8, 1e-8) * (1.0 + z[i].norm());
                        z[i] += bump;
                    }
                }
            }
            if aberth_iterate(&monic, &mut z, 40) {
                return Ok(z);
            }
            all_roots(p)
        }
        _ => all_roots(p),
    }
}

fn companion_roots(p: &UniPoly) -> Result<Vec<Complex64>> {
    let n = p.degree().unwrap_or(0);
    let lead = p.leading();
    let mut m = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    for i in 1..n {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..n {
        m[(i, n - 1)] = -p.coeff(i) / lead;
    }
    let schur = nalgebra::linalg::Schur::try_new(m, f64::EPSILON, 10_000).ok_or_else(|| {
        Error::numerical_with(
            "root finding did not converge",
            vec![format!("degree {n}"), format!("coefficients {:?}", p.coeffs())],
        )
    })?;
    let eig = schur.eigenvalues().ok_or_else(|| {
        Error::numerical_with(
            "companion matrix eigenvalues unavailable",
            vec![format!("degree {n}")],
        )
    })?;
    Ok(eig.iter().copied().collect())
}

/// Groups raw roots into roots with multiplicity.
///
/// Repeatedly picks the largest group (a seed plus its nearest neighbours)
/// that passes the radius test, preferring the tightest group among equal
/// sizes, and removes it from the pool.
pub fn cluster(raw: &[Complex64], tol: f64) -> Vec<Root> {
    let mut pool: Vec<Complex64> = raw.to_vec();
    let mut out = Vec::new();
    while !pool.is_empty() {
        let mut best: Option<(usize, f64, Vec<usize>)> = None;
        for seed in 0..pool.len() {
            let mut order: Vec<usize> = (0..pool.len()).collect();
            order.sort_by(|&a, &b| {
                (pool[a] - pool[seed])
                    .norm()
                    .total_cmp(&(pool[b] - pool[seed]).norm())
            });
            for m in (1..=pool.len()).rev() {
                if best.as_ref().is_some_and(|(bm, _, _)| *bm > m) {
                    break;
                }
                let members: Vec<Complex64> = order[..m].iter().map(|&i| pool[i]).collect();
                let centre = centroid(&members);
                let radius = members
                    .iter()
                    .map(|z| (z - centre).norm())
                    .fold(0.0, f64::max);
                let allowed = if m == 1 {
                    f64::INFINITY
                } else {
                    tol.powf(2.0 / m as f64) * centre.norm().max(1.0)
                };
                if radius <= allowed {
                    let better = match &best {
                        None => true,
                        Some((bm, br, _)) => m > *bm || (m == *bm && radius < *br),
                    };
                    if better {
                        best = Some((m, radius, order[..m].to_vec()));
                    }
                    break;
                }
            }
        }
        let (_, _, mut idx) = best.expect("singletons always qualify");
        let members: Vec<Complex64> = idx.iter().map(|&i| pool[i]).collect();
        out.push(Root {
            value: centroid(&members),
            multiplicity: members.len(),
        });
        idx.sort_unstable_by(|a, b| b.cmp(a));
        for i in idx {
            pool.remove(i);
        }
    }
    out.sort_by(|a, b| {
        a.value
            .re
            .total_cmp(&b.value.re)
            .then(a.value.im.total_cmp(&b.value.im))
    });
    out
}

fn centroid(zs: &[Complex64]) -> Complex64 {
    zs.iter().sum::<Complex64>() / zs.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn z_squared_plus_one() {
        let p = UniPoly::from_real(&[1.0, 0.0, 1.0]);
        let r = roots(&p, DEFAULT_CLUSTER_TOL).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r.iter().all(|x| x.multiplicity == 1));
        assert!(r.iter().any(|x| (x.value - c(0.0, 1.0)).norm() < 1e-14));
        assert!(r.iter().any(|x| (x.value - c(0.0, -1.0)).norm() < 1e-14));
    }

    #[test]
    fn double_root_clusters() {
        let p = UniPoly::from_real(&[1.0, -2.0, 1.0]);
        let r = roots(&p, DEFAULT_CLUSTER_TOL).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].multiplicity, 2);
        assert!((r[0].value - c(1.0, 0.0)).norm() < 1e-7);
    }

    #[test]
    fn triple_root_clusters() {
        let p = UniPoly::from_roots(&[c(0.3, 0.2); 3]).scale(c(2.0, -1.0));
        let p = &p * &UniPoly::linear_factor(c(-1.0, 0.5));
        let r = roots(&p, DEFAULT_CLUSTER_TOL).unwrap();
        assert_eq!(r.len(), 2);
        let triple = r.iter().find(|x| x.multiplicity == 3).unwrap();
        assert!((triple.value - c(0.3, 0.2)).norm() < 1e-9, "{:?}", triple);
    }

    #[test]
    fn zero_polynomial_rejected() {
        assert!(matches!(roots(&UniPoly::zero(), 1e-7), Err(Error::Input { .. })));
    }

    #[test]
    fn companion_fallback_agrees() {
        let p = UniPoly::from_roots(&[c(1.0, 0.0), c(-2.0, 1.0), c(0.5, -0.5), c(3.0, 3.0)]);
        let mut a = companion_roots(&p).unwrap();
        let mut b = aberth(&p).unwrap();
        let key = |z: &Complex64| (z.re * 1e6).round() as i64 * 1_000_000 + (z.im * 1e6).round() as i64;
        a.sort_by_key(key);
        b.sort_by_key(key);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).norm() < 1e-9);
        }
    }

    #[test]
    fn quadratic_without_cancellation() {
        let [r1, r2] = quadratic(c(1.0, 0.0), c(-1e8, 0.0), c(1.0, 0.0));
        let small = if r1.norm() < r2.norm() { r1 } else { r2 };
        assert!((small.re - 1e-8).abs() < 1e-20);
    }
}
