//! Tensor-network engine: MPOs, MPS, environments and two-site sweeps.

mod env;
pub mod lanczos;
pub mod mpo;
pub mod mps;
pub mod sweep;

pub use lanczos::{lowest_eigenpair, LanczosOptions, LanczosOutcome};
pub use mpo::{compile_mpo, LocalOp, MpoEntry, MpoOperator, MpoSite};
pub use mps::{
    canonicalize, entanglement_profile, expectation, left_isometry_error, right_isometry_error,
    svd_truncate, EntanglementData, MpsState, Truncation,
};
pub use sweep::{two_site_eigensolve, Direction, SweepEngine, TwoSiteSolution};
