//! Norms of the pairing `⟨l0, l1⟩` for families of curves, and checks of
//! its identities.
//!
//! For a fiber `X_s` and `Y = div(l1) ∩ X_s`,
//! `log ‖⟨l0, l1⟩‖(s) = Σ_{y∈Y} m_y log ‖l0(y)‖ + ∫_{X_s} log ‖l1‖ c_1(L̄0)`.

mod identities;
mod pairing;
mod polarization;
mod projection;

pub use identities::{identity_defect, IdentityKind, IdentityReport};
pub use pairing::{
    log_norm0, norm0, pairing_norm, pairing_norm_on_fiber, PairingInput, PairingNormResult,
    SECTION_COLLISION_TOL,
};
pub use polarization::{
    polarization_exact, polarization_expand, polarization_numeric, PolarizationTerm,
    MAX_POLARIZATION_N,
};
pub use projection::{projection_check, CoverTarget, FiniteCover, ProjectionCheck};
