//! Fixed inputs shared by the criterion benches.

use std::f64::consts::PI;

use crossres::pulse::{PauliCoeffs, TransmonParams};

/// A representative set of cross-resonance coefficients (rad/us).
pub fn sample_coeffs() -> PauliCoeffs {
    PauliCoeffs {
        l_ix: 0.8,
        l_zi: -0.3,
        l_iz: 0.15,
        l_zz: 0.05,
        l_zx: 2.0 * PI * 0.5,
    }
}

/// Two transmons a quarter GHz apart, weakly coupled.
pub fn sample_transmons(levels: usize) -> TransmonParams {
    TransmonParams {
        eps: [2.0 * PI * 5.0, 2.0 * PI * 5.25],
        delta_res: [-2.0 * PI * 0.33, -2.0 * PI * 0.31],
        lambda: 2.0 * PI * 0.004,
        drive_amp: 0.0,
        drive_freq: 0.0,
        drive_phase: 0.0,
        levels,
    }
}
