//! Subsystem quantum error-correcting codes on square and cubic lattices.
//!
//! - [`pauli`]: phase-tracked Pauli operators in symplectic form.
//! - [`code`]: lattice layouts, gauge/stabilizer/logical operators, error
//!   strings and operator classification.
//! - [`decoder`]: syndrome extraction, repetition-code decoding and the
//!   closed-form failure probability.
//! - [`noise`]: noise channels and Monte-Carlo failure-rate estimation.
//! - [`hamiltonian`]: bond Hamiltonians, sector-resolved exact
//!   diagonalization and mean-field error energetics.
//! - [`thermal`]: Metropolis dynamics of Ising memories and of the
//!   mean-field error model with a syndrome-adjusted order parameter.

pub mod bits;
pub mod code;
pub mod decoder;
pub mod error;
pub mod hamiltonian;
pub mod noise;
pub mod pauli;
pub mod rng;
pub mod stats;
pub mod thermal;

pub use bits::BitString;
pub use code::{
    build_code, conjugate_transversal_cnot, Bond, BondKind, CodeLayout, Dimension, ErrorStrings,
    GaugeQubit, LogicalClass, Logicals, Syndrome,
};
pub use decoder::{
    adjudicate, analytic_failure_prob, decode, decode_syndrome, measure_syndrome, DecodeOutcome,
};
pub use error::{Error, Result};
pub use hamiltonian::{
    build_hamiltonian, diagonalize_small, mean_field_delta_e, HamiltonianSpec, MeanFieldParams,
    SectorReport,
};
pub use noise::{
    run_trials, sample_error, threshold_scan, NoiseKind, NoiseModel, ThresholdRecord, TrialStats,
};
pub use pauli::{commutes, pauli_mul, Pauli, PauliOperator};
pub use thermal::{
    bifurcation_scan, metropolis_sweep, metropolis_sweep_sequential, simulate_ising_memory,
    simulate_meanfield_code, BifurcationRecord, BifurcationScan, ErrorSector, IsingLattice,
    MeanFieldCodeState, MeanFieldRun, OrderParameterSample,
};
