//! Toffoli decomposition catalog and lowering to the `{ecr, rz, sx}` basis.

mod catalog;
mod ecr;
mod euler;
mod rewrite;
mod synth;

use thiserror::Error;

use crate::circuit::CircuitError;
use crate::gates::GateError;
use crate::linalg::LinalgError;

pub use catalog::{
    catalog, catalog_entry, ccx_from_ccz, ccz_linear8, h_conjugate, toffoli_6cnot_ibm,
    toffoli_6cnot_nc, toffoli_ecr9, toffoli_linear, verify, CatalogEntry, Target, VERIFY_TOL,
};
pub use ecr::{cnot_to_ecr, ecr_template, EcrTemplate, Step, Word};
pub use euler::{euler_decompose_1q, wrap_angle, EulerAngles};
pub use rewrite::{rewrite_to_basis, BasisSpec, TwoQubitBasis};
pub use synth::{synthesize_toffoli_ecr, Synthesis};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TranspileError {
    #[error("gate `{0}` cannot be rewritten; lower 3-qubit gates with the catalog first")]
    UnsupportedGate(String),
    #[error("unsupported basis: {0}")]
    UnsupportedBasis(String),
    #[error("verification failed: {what} (overlap {overlap:.12})")]
    VerificationFailed { what: String, overlap: f64 },
    #[error("no single-qubit correction turns ECR into CNOT")]
    SearchFailed,
    #[error("no feasible decomposition: {0}")]
    NoFeasibleDecomposition(String),
    #[error("matrix is not unitary (max deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },
    #[error("expected a 2x2 matrix, got {0}x{0}")]
    NotSingleQubit(usize),
    #[error("unknown catalog entry `{0}`")]
    UnknownCatalogEntry(String),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Gate(#[from] GateError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
