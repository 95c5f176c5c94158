use crate::error::Result;
use crate::poly::HomogeneousPoly;
use num_complex::Complex64;

type Mat3 = [[Complex64; 3]; 3];

/// A fixed unitary change of coordinates `p = U p̃` putting curves in general
/// position before elimination and projection.
///
/// In the new coordinates the projection centre is `[0:1:0]` and the
/// projection line is `[x0 : x2]`. The matrices are fixed so results are
/// reproducible; two presets exist so that computations can be repeated in
/// an independent coordinate system.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    u: Mat3,
    u_adj: Mat3,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn householder(v: [Complex64; 3]) -> Mat3 {
    let n: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    let mut h = [[c(0.0, 0.0); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let delta = if i == j { 1.0 } else { 0.0 };
            h[i][j] = c(delta, 0.0) - 2.0 * v[i] * v[j].conj() / n;
        }
    }
    h
}

fn matmul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = [[c(0.0, 0.0); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

fn diag_phase(angles: [f64; 3]) -> Mat3 {
    let mut d = [[c(0.0, 0.0); 3]; 3];
    for i in 0..3 {
        d[i][i] = Complex64::from_polar(1.0, angles[i]);
    }
    d
}

fn adjoint(a: &Mat3) -> Mat3 {
    let mut out = [[c(0.0, 0.0); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = a[j][i].conj();
        }
    }
    out
}

pub(crate) fn apply(m: &Mat3, p: &[Complex64; 3]) -> [Complex64; 3] {
    [
        m[0][0] * p[0] + m[0][1] * p[1] + m[0][2] * p[2],
        m[1][0] * p[0] + m[1][1] * p[1] + m[1][2] * p[2],
        m[2][0] * p[0] + m[2][1] * p[1] + m[2][2] * p[2],
    ]
}

impl Projection {
    pub fn standard() -> Self {
        let h1 = householder([c(1.0, 0.0), c(0.3, 0.7), c(-0.4, 0.2)]);
        let h2 = householder([c(0.2, -0.5), c(1.0, 0.0), c(0.6, 0.1)]);
        Self::from_unitary(matmul(&matmul(&h1, &h2), &diag_phase([0.3, -1.1, 0.7])))
    }

    /// A second, unrelated general-position frame.
    pub fn alternate() -> Self {
        let h1 = householder([c(0.5, 0.4), c(-0.3, 0.0), c(1.0, -0.6)]);
        let h2 = householder([c(-0.7, 0.1), c(0.25, 0.9), c(1.0, 0.0)]);
        Self::from_unitary(matmul(&matmul(&h2, &h1), &diag_phase([-0.5, 0.9, 2.1])))
    }

    /// Identity frame (no change of coordinates).
    pub fn identity() -> Self {
        Self::from_unitary(diag_phase([0.0; 3]))
    }

    fn from_unitary(u: Mat3) -> Self {
        Projection {
            u_adj: adjoint(&u),
            u,
        }
    }

    /// Original coordinates of a point given in projected coordinates.
    pub fn to_original(&self, p: &[Complex64; 3]) -> [Complex64; 3] {
        apply(&self.u, p)
    }

    pub fn to_projected(&self, p: &[Complex64; 3]) -> [Complex64; 3] {
        apply(&self.u_adj, p)
    }

    /// `F̃(p̃) = F(U p̃)`.
    pub fn transform(&self, form: &HomogeneousPoly) -> Result<HomogeneousPoly> {
        form.linear_substitute(&self.u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_are_unitary() {
        for p in [Projection::standard(), Projection::alternate()] {
            let prod = matmul(&p.u, &p.u_adj);
            for i in 0..3 {
                for j in 0..3 {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((prod[i][j] - c(expect, 0.0)).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn transform_commutes_with_evaluation() {
        let f = HomogeneousPoly::ternary(3, &[([0, 2, 1], 1.0), ([3, 0, 0], -1.0), ([1, 0, 2], 0.5)])
            .unwrap();
        let proj = Projection::standard();
        let g = proj.transform(&f).unwrap();
        let pt = [c(0.3, -0.1), c(1.2, 0.4), c(-0.5, 0.9)];
        let lhs = g.eval(&pt).unwrap();
        let rhs = f.eval(&proj.to_original(&pt)).unwrap();
        assert!((lhs - rhs).norm() < 1e-13);
    }
}
