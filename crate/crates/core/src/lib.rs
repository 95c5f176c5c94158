//! Numerical laboratory for metrized Deligne pairings on flat families of
//! plane projective curves.
//!
//! The crate computes, at each base point `s` of a one-parameter family of
//! plane curves, fiber integrals `∫_{X_s} φ c_1(L̄)` and the norm of the
//! Deligne pairing `‖⟨l_0, l_1⟩‖(s)` for hermitian line bundles of the form
//! Fubini–Study times `exp(-ψ)`. On top of that it checks the structural
//! identities of the pairing (symmetry, multilinearity, change of metric,
//! polarization, projection formula) and runs continuity scans towards
//! nodal fibers.
//!
//! Modules, bottom up:
//! - [`poly`]: forms, resultants, roots
//! - [`geometry`]: families, fibers, intersections, singular points, branches
//! - [`metrics`]: hermitian bundles, norms, curvature densities
//! - [`integrate`]: adaptive quadrature over fibers
//! - [`deligne`]: pairing norms and identity checks
//! - [`scan`]: continuity experiments
//! - [`cli`], [`output`] and [`suite`]: the task runner behind the `dlab` binary

pub mod cli;
pub mod deligne;
pub mod error;
pub mod geometry;
pub mod integrate;
pub mod metrics;
pub mod output;
pub mod poly;
pub mod scan;
pub mod suite;

pub use error::{Error, Result};
pub use num_complex::Complex64;
