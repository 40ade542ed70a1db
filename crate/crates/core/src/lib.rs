//! Drug-combination design as Ising ground-state search.
//!
//! Interaction graphs ([`graph`], [`datasets`]) compile into Ising models
//! ([`hamiltonian`]) under two objectives: the maximum safe subset (MSS) and
//! synergy-constrained optimization (SCO). The models are solved by
//! feedback-based quantum control simulated on a dense statevector
//! ([`simulator`], [`engines`]), with exhaustive enumeration as the reference.
//! [`report`] turns final states into audited drug subsets.

pub mod cli;
pub mod datasets;
pub mod engines;
pub mod error;
pub mod graph;
pub mod hamiltonian;
pub mod report;
pub mod simulator;

pub use datasets::{builtin_dataset, Dataset};
pub use engines::{
    exact_solve, run_falqon, run_falqon_monotone, run_ite_falqon, verify_encoding, EngineRun,
    ExactSolution, FalqonConfig, IteFalqonConfig, StepRecord, Trajectory,
};
pub use error::{Error, Result};
pub use graph::{Drug, Interaction, InteractionGraph, InteractionKind};
pub use hamiltonian::{
    compile_mss, compile_sco, diagonal_energies, energy_of, loss_mss, loss_sco, Assignment,
    IsingModel, ModelKind, MssParams, Objective, ScoParams, MAX_QUBITS,
};
pub use report::{audit, decode, render_bitstring, top_k, BitOrder, RankedOutcome, SubsetAudit};
pub use simulator::{DiagonalOperator, StateVector};
