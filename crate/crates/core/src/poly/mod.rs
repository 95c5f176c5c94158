//! Complex polynomial algebra: homogeneous forms, univariate polynomials,
//! resultants and root finding.

mod bivariate;
mod homogeneous;
mod param;
mod resultant;
mod roots;
mod uni;

pub use bivariate::BiPoly;
pub use homogeneous::{Exponent, HomogeneousPoly};
pub use param::ParamForm;
#[allow(unused_imports)]
pub(crate) use param::ComplexRepr;
pub use resultant::{resultant_numeric, resultant_y, resultant_y_with_bound, sylvester_matrix};
pub use roots::{
    all_roots, cluster, quadratic, roots, roots_from_guess, Root, DEFAULT_CLUSTER_TOL,
};
pub use uni::UniPoly;
