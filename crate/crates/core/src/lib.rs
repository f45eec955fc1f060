//! Quantum circuit IR, Toffoli decompositions, rewriting into the
//! `{ecr, rz, sx}` native basis, and an echoed cross-resonance pulse model.
//!
//! Qubit 0 is always the most significant tensor factor.

pub mod circuit;
pub mod gates;
pub mod linalg;
pub mod pulse;
pub mod transpile;

pub use circuit::{Circuit, CouplingMap, Instruction};
pub use linalg::{ComplexMatrix, C64};
