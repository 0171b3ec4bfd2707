//! Clifford-augmented matrix product states for one-dimensional spin chains.
//!
//! Two-site DMRG sweeps are interleaved with two-qubit Clifford gates chosen
//! to minimise the bond entropy before truncation. The gates are absorbed
//! into the Hamiltonian symbolically, so the final circuit doubles as a map
//! to a less entangled dual model. The crate also contains a dense oracle,
//! scaling fits and tools that analyse the circuits the solver produces.

#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod camps;
pub mod clifford;
pub mod diagnostics;
pub mod engine;
pub mod error;
pub mod exact;
pub mod format;
pub mod linalg;
pub mod pauli;

pub type C64 = num_complex::Complex64;

pub use analysis::{
    circuit_to_mpo, conjugate_full_hamiltonian, detect_pattern, match_dual_model, Circuit,
    MatchReport, PatternKind, PatternReport,
};
pub use camps::{run, run_hamiltonian, CampsConfig, CampsResult, CircuitEntry, CircuitLog};
pub use clifford::{CliffordTableau, GateClass, GateSet, GateSetMode, LocalClifford};
pub use diagnostics::{
    fit_central_charge, fit_entropy_reduction, normalize_spectrum, relative_energy_error,
    DeltaSFit, FitResult,
};
pub use engine::{compile_mpo, EntanglementData, MpoOperator, MpsState};
pub use error::{Error, Result};
pub use exact::{exact_entanglement, exact_ground_state, ExactSolution};
pub use pauli::{build_model, Model, Pauli, PauliString, PauliSum};
