use crate::poly::{ComplexRepr, HomogeneousPoly};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Point of the projective plane.
///
/// Stored with the coordinate of largest modulus scaled to exactly 1, so
/// every stored representative has max-norm 1.
#[derive(Debug, Clone, Copy)]
pub struct ProjPoint {
    coords: [Complex64; 3],
}

impl ProjPoint {
    /// `None` for the zero vector.
    pub fn new(coords: [Complex64; 3]) -> Option<Self> {
        let (imax, m) = coords
            .iter()
            .enumerate()
            .map(|(i, z)| (i, z.norm()))
            .fold((0, 0.0), |acc, (i, n)| if n > acc.1 { (i, n) } else { acc });
        if m == 0.0 || !m.is_finite() {
            return None;
        }
        let pivot = coords[imax];
        let mut c = coords.map(|z| z / pivot);
        c[imax] = Complex64::new(1.0, 0.0);
        Some(ProjPoint { coords: c })
    }

    pub fn real(x: f64, y: f64, z: f64) -> Self {
        Self::new([x, y, z].map(|v| Complex64::new(v, 0.0))).expect("nonzero point")
    }

    pub fn coords(&self) -> [Complex64; 3] {
        self.coords
    }

    /// Chordal (Fubini–Study sine) distance; zero iff the points coincide.
    pub fn distance(&self, other: &ProjPoint) -> f64 {
        let a = self.coords;
        let b = other.coords;
        let na: f64 = a.iter().map(|z| z.norm_sqr()).sum();
        let nb: f64 = b.iter().map(|z| z.norm_sqr()).sum();
        // |a x b|^2 = |a|^2 |b|^2 - |<a,b>|^2, computed without cancellation
        let cross = [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ];
        let nc: f64 = cross.iter().map(|z| z.norm_sqr()).sum();
        (nc / (na * nb)).sqrt()
    }

    pub fn approx_eq(&self, other: &ProjPoint, tol: f64) -> bool {
        self.distance(other) <= tol
    }

    /// `|F(p)| / max|coeff F|` at the max-norm representative.
    pub fn residual(&self, form: &HomogeneousPoly) -> f64 {
        let scale = form.max_abs_coeff();
        if scale == 0.0 {
            return 0.0;
        }
        form.eval_unchecked(&self.coords).norm() / scale
    }
}

impl PartialEq for ProjPoint {
    fn eq(&self, other: &Self) -> bool {
        self.distance(other) <= 1e-12
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let part = |z: &Complex64| {
            if z.im.abs() < 1e-14 {
                format!("{:.6}", z.re)
            } else {
                format!("{:.6}{:+.6}i", z.re, z.im)
            }
        };
        write!(
            f,
            "[{}:{}:{}]",
            part(&self.coords[0]),
            part(&self.coords[1]),
            part(&self.coords[2])
        )
    }
}

impl Serialize for ProjPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<ComplexRepr> = self.coords.iter().map(|z| ComplexRepr::from(*z)).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ProjPoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v: Vec<ComplexRepr> = Vec::deserialize(d)?;
        if v.len() != 3 {
            return Err(serde::de::Error::custom("projective point needs 3 coordinates"));
        }
        ProjPoint::new([(&v[0]).into(), (&v[1]).into(), (&v[2]).into()])
            .ok_or_else(|| serde::de::Error::custom("zero vector is not a projective point"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_is_projective() {
        let p = ProjPoint::real(2.0, -4.0, 1.0);
        let q = ProjPoint::new([
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, -2.0),
            Complex64::new(0.0, 0.5),
        ])
        .unwrap();
        assert_eq!(p, q);
        assert!(p.coords().iter().any(|z| (z.norm() - 1.0).abs() < 1e-15));
        assert!(p.coords().iter().all(|z| z.norm() <= 1.0 + 1e-15));
    }

    #[test]
    fn zero_vector_rejected() {
        assert!(ProjPoint::new([Complex64::new(0.0, 0.0); 3]).is_none());
    }

    #[test]
    fn distinct_points_have_positive_distance() {
        let p = ProjPoint::real(1.0, 0.0, 0.0);
        let q = ProjPoint::real(0.0, 1.0, 0.0);
        assert!((p.distance(&q) - 1.0).abs() < 1e-15);
    }
}
