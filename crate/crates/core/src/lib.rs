//! Clifford pre-optimisation for variational quantum eigensolvers.
//!
//! Restricting every rotation angle of an ansatz to a multiple of π/2 turns
//! it into a Clifford circuit whose output is a stabilizer state, so the
//! energy can be evaluated exactly in polynomial time. This crate searches
//! that discrete lattice by simulated annealing and checks the results
//! against dense statevector and exact-diagonalization oracles.

pub mod anneal;
pub mod ansatz;
pub mod counting;
pub mod error;
pub mod models;
pub mod oracle;
pub mod pauli;
pub mod registry;
pub mod rng;
pub mod stabilizer;

pub use anneal::{anneal_run, AnnealConfig, AnnealResult};
pub use ansatz::{Ansatz, AnsatzFamily, GateSlot, QuarterTurns, RotationAxis};
pub use error::{Error, Result};
pub use pauli::{Hamiltonian, PauliLetter, PauliString, Term};
pub use registry::{AnsatzRegistry, ModelRegistry, ModelRequest};
pub use stabilizer::{CliffordGate, GateKind, Tableau};
