//! Hermitian metrics `‖·‖_FS^d · exp(-ψ)` on `O(d)` over the plane: section
//! norms, curvature densities along curves, and metric ratios.
//!
//! `c_1` is normalized so that `∫_{P^1} c_1(O(1)_FS) = 1`.

mod bundle;
mod weight;

pub use bundle::{
    curvature_density, fubini_study_density, metric_ratio_u, Curvature, CurvatureDensity,
    HermitianBundle, MetricRatio, PulledBackBundle,
};
pub use weight::{
    hessian_fd, levi_fd, levi_from_hessian, CustomWeight, Hessian, HessianFn, Weight, WeightFn,
    FD_STEP,
};
