//! Families of plane projective curves over a one-dimensional complex base:
//! fibers, divisor intersections, singular points and branched-cover
//! parameterizations.

mod cover;
mod family;
mod intersect;
mod point;
mod projection;
mod singular;

pub use cover::{branches, BranchSet, BranchedCover, Chart, SheetPoint};
pub use family::{BaseDomain, CurveFamily, Fiber, DEFAULT_ADJACENCY_RADIUS};
pub use intersect::{intersect, intersect_with, FiberDivisor, DEFAULT_RESIDUAL_TOL};
pub use point::ProjPoint;
pub use projection::Projection;
pub use singular::{check_reduced, gradient_resultant_test, singular_locus, DEFAULT_SINGULAR_TOL};

/// Fiber of `fam` at `s`; see [`CurveFamily::fiber`].
pub fn fiber(fam: &CurveFamily, s: num_complex::Complex64) -> crate::Result<Fiber> {
    fam.fiber(s)
}
