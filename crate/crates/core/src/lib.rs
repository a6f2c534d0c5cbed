//! Geometric measure of quantum discord and total quantum correlations for
//! multipartite states.
//!
//! The central object is the coefficient tensor `C` of a state in an
//! orthonormal Hermitian product basis. The discord for a von Neumann
//! measurement on party `k` is `‖C‖² − max_A ‖C ×_k A‖²`, maximized over the
//! isometries induced by orthonormal bases of party `k`. For qubits the
//! maximization reduces to the top eigenpair of a 3×3 matrix built from the
//! Bloch data; for other parties a multi-start search gives an upper bound.
//! A brute-force oracle over measurement angles checks the closed forms.

pub mod bloch;
pub mod complex;
pub mod density;
pub mod discord;
pub mod error;
pub mod io;
pub mod measurement;
pub mod oracle;
pub mod states;
pub mod sweep;
pub mod sym3;
pub mod tensor;
pub mod total;

pub use bloch::{
    bloch_decompose, check_norm_identity, coefficient_tensor, reconstruct_state, standard_coefficient_tensor,
    BlochDecomposition, CoefficientTensor, HermitianBasis, PartySet,
};
pub use complex::ComplexMatrix;
pub use density::{embed_operator, partial_trace, DensityMatrix};
pub use discord::{
    build_g_matrix, discord_from_isometry, discord_generic_upper_bound, discord_qubit, discord_qubit_closed_form,
    discord_two_qubit_dakic, optimal_isometry, DiscordReport, GenericDiscord, Isometry,
};
pub use error::{Error, Result, ValidationFailure};
pub use io::{decomposition_to_table, ingest_pauli_table, load_state, save_state, Ingested, PauliTable};
pub use measurement::{
    apply_projective_measurement, basis_from_isometry, build_classical_quantum_state, optimal_post_measurement_state,
    ProjectiveBasis,
};
pub use oracle::{oracle_discord_qubit, oracle_quadratic_max, verify_equality_dbar, DbarCheck, GridSpec, OracleResult};
pub use states::{family_state, named_state, random_density, Family, FamilySpec, StateName};
pub use sweep::{detect_branch_crossings, sweep_family, BranchCrossing, Sweep, SweepRow};
pub use sym3::{sym3_top_eigen, Sym3};
pub use tensor::{frobenius_norm_sq, n_mode_product, RealMatrix, RealTensor};
pub use total::{chain_with_isometries, total_quantum_correlations, two_qubit_total, ChainStep, TotalCorrelationReport};
