//! Echoed cross-resonance model: the two-transmon device Hamiltonian, static
//! ZZ, the block-diagonal effective Hamiltonian and the echoed pulse unitary.
//!
//! Units are angular frequency with ħ = 1.

mod device;
mod echo;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::LinalgError;

pub use device::{build_device_hamiltonian, static_zz, MAX_LEVELS};
pub use echo::{
    calibrate_time, echoed_unitary_analytic, echoed_unitary_numeric, effective_hamiltonian,
    gate_error_report, zx_rotation, Calibration, DriveSign, EchoCoeffs, GateErrorReport,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PulseError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("dressed state |{state}> is ambiguous (best overlap {overlap:.4} < 0.7)")]
    AmbiguousDressing { state: &'static str, overlap: f64 },
    #[error("all Hamiltonian coefficients are zero")]
    DegenerateCoeffs,
    #[error("time must be finite and non-negative, got {0}")]
    InvalidTime(f64),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Two transmons, the first driven; see `build_device_hamiltonian`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransmonParams {
    pub eps: [f64; 2],
    pub delta_res: [f64; 2],
    pub lambda: f64,
    pub drive_amp: f64,
    pub drive_freq: f64,
    pub drive_phase: f64,
    pub levels: usize,
}

impl TransmonParams {
    pub fn validate(&self) -> Result<(), PulseError> {
        if self.levels < 2 || self.levels > MAX_LEVELS {
            return Err(PulseError::InvalidParams(format!(
                "levels must be in 2..={MAX_LEVELS}, got {}",
                self.levels
            )));
        }
        let all = [
            self.eps[0],
            self.eps[1],
            self.delta_res[0],
            self.delta_res[1],
            self.lambda,
            self.drive_amp,
            self.drive_freq,
            self.drive_phase,
        ];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(PulseError::InvalidParams(
                "all fields must be finite".into(),
            ));
        }
        Ok(())
    }
}

/// Coefficients of the effective two-qubit Hamiltonian
/// `H = (l_ix·IX + l_zi·ZI + l_iz·IZ + l_zz·ZZ + l_zx·ZX) / 2`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PauliCoeffs {
    pub l_ix: f64,
    pub l_zi: f64,
    pub l_iz: f64,
    pub l_zz: f64,
    pub l_zx: f64,
}

impl PauliCoeffs {
    pub fn zx(l_zx: f64) -> Self {
        Self {
            l_zx,
            ..Self::default()
        }
    }

    pub fn as_array(&self) -> [f64; 5] {
        [self.l_ix, self.l_zi, self.l_iz, self.l_zz, self.l_zx]
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self {
            l_ix: k * self.l_ix,
            l_zi: k * self.l_zi,
            l_iz: k * self.l_iz,
            l_zz: k * self.l_zz,
            l_zx: k * self.l_zx,
        }
    }

    pub fn validate(&self) -> Result<(), PulseError> {
        if self.as_array().iter().all(|x| x.is_finite()) {
            Ok(())
        } else {
            Err(PulseError::InvalidParams(
                "coefficients must be finite".into(),
            ))
        }
    }
}

fn check_time(t: f64) -> Result<(), PulseError> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(PulseError::InvalidTime(t))
    }
}
