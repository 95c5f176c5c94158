//! Fiber integrals `∫_{X_s} φ c_1(L̄)` by adaptive quadrature over the
//! branched cover `X_s → P^1`.
//!
//! Each fiber is viewed over the projection line of a general-position
//! frame. The line is covered by two polar disks, every sheet above a sample
//! point is summed, and cells containing branch points or logarithmic
//! singularities of `φ` are refined down to an exclusion size, dropped, and
//! compensated by a two-rung ladder.

mod config;
mod engine;
mod gauss;
mod phi;
mod tasks;

pub use config::{QuadFlag, QuadratureConfig, QuadratureResult};
pub use gauss::gauss_legendre;
pub use phi::{ComposedPhi, PhiSpec};
pub use tasks::{
    ensure_smooth, fiber_integral, integrate_on_fiber, log_norm_integral, refine_study, Phi,
    RefineStudy,
};
