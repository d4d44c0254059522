//! Dirac particle in a uniform magnetic field whose direction precesses about
//! the z axis at a constant tilt.
//!
//! The crate covers the closed-form relativistic Landau modes, truncated-basis
//! operator matrices for the total angular momentum and the Dirac Hamiltonian,
//! rotating-frame time evolution with cyclic-state phase extraction, and the
//! Dirac-Pauli extension with an anomalous magnetic moment.

pub mod error;
pub mod evolution;
pub mod landau;
pub mod linalg;
pub mod operators;
pub mod pauli;
pub mod special;
pub mod spinor;
pub mod stencil;

pub use error::{Error, Result};
pub use evolution::{
    brute_force_evolve, brute_force_samples, evolve_closed_form, j_trajectory, phase_report, reduce_phase,
    solid_angle_phase, w_matrix, IntegratorOptions, PhaseReport, Propagator, TrajectorySample,
};
pub use landau::{
    build_mode, energy0, inner_product, laguerre, DiracSpinor, LandauMode, Orbital, PhysicalConfig, QuantumNumbers,
    Spin,
};
pub use operators::{
    enumerate_basis, BasisKind, BasisTruncation, EigenSolution, ModeBasis, OperatorMatrix, TiltedSystem,
    TruncationReport, TRACKED_STATES,
};
pub use pauli::{diagonalize_pauli_heff, h_pauli_matrix, verify_pauli_invariance, PauliConfig};
pub use spinor::{build_dirac_matrices, dirac, spin_rotation_y, DiracMatrixSet};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;
/// Dense complex column vector.
pub type CVector = nalgebra::DVector<C64>;
