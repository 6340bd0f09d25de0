//! EVA: expectation values of diagonal (Ising-type) Hamiltonians from a
//! single quantum circuit.
//!
//! A diagonal Hamiltonian H (a weighted sum of Pauli-Z products) is not
//! unitary, so it cannot be run on a quantum computer directly. Its complex
//! exponential e^{iH/k} is, and for Ising-type H it can be built *exactly*
//! as a circuit of CNOTs and Z-rotations. An ancilla-based test circuit then
//! measures Im⟨φ|e^{iH/k}|φ⟩ on the ancilla, and
//!
//! ```text
//!   ⟨φ|H|φ⟩ ≈ k · Im⟨φ|e^{iH/k}|φ⟩        (error ≤ ‖H‖³/(6k²))
//! ```
//!
//! so one circuit estimates what term-by-term Pauli measurement needs many
//! circuits for. A reduced-depth variant trades the controlled exponential
//! (Toffoli-heavy) for controlled-H conjugation of the plain exponential,
//! valid for single-axis (RX/CNOT) ansatz states and small angles.
//!
//! Module map:
//!
//! - [`hamiltonian`] — Pauli-Z products, random instance generation,
//!   normalization, JSON (de)serialization.
//! - [`simulator`] — exact statevector simulation of the fixed gate set,
//!   ancilla probabilities, seeded shot sampling.
//! - [`oracle`] — dense-matrix reference implementations used to cross-check
//!   the simulator and circuit builders in tests.
//! - [`circuits`] — the exponential circuit, the ancilla test circuits, the
//!   reduced-depth variant, and the gate-cost model.
//! - [`estimators`] — exact / single-circuit / per-term / grouped estimators
//!   with a-priori error bounds and the k²-shot policy.
//! - [`rng`] — deterministic seed derivation for reproducible runs.

pub mod circuits;
pub mod error;
pub mod estimators;
pub mod hamiltonian;
pub mod oracle;
pub mod rng;
pub mod simulator;

pub use error::{Error, Result};
