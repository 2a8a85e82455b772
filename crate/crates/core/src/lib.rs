//! Sparse Pauli dynamics for Pauli-rotation circuits.
//!
//! A circuit of rotations `exp(-iθP/2)` is first folded so that every
//! Clifford quarter turn is absorbed into the remaining generators and the
//! observable ([`clifford`]). The observable is then evolved in the
//! Heisenberg picture over an adaptively grown set of Pauli strings, with
//! growth capped by a truncation order ([`spd`]), and its expectation in
//! `|0…0⟩` is read off directly.

pub mod circuits;
pub mod cli;
pub mod clifford;
mod error;
pub mod oracle;
pub mod pauli;
pub mod spd;

pub use circuits::{build_circuit, observable_preset, KickedIsingSpec, LatticeSpec};
pub use clifford::{conjugate_pauli, fold, fold_with, split_angle, FoldOptions, FoldedCircuit, RotationGate};
pub use error::{Error, Result};
pub use pauli::{Pauli, PauliString};
pub use spd::{run, run_sum, RunStats, SparseObservable, SpdConfig};
