use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use super::{check_time, PauliCoeffs, PulseError};
use crate::linalg::{avg_gate_fidelity, matrix_exp_hermitian, pauli_string, ComplexMatrix, C64};

const SINC_SERIES_BELOW: f64 = 1e-8;
const GRID_POINTS: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DriveSign {
    Plus,
    Minus,
}

impl DriveSign {
    fn factor(self) -> f64 {
        match self {
            DriveSign::Plus => 1.0,
            DriveSign::Minus => -1.0,
        }
    }
}

/// `(l_ix·IX + l_zi·ZI + l_iz·IZ + l_zz·ZZ + l_zx·ZX) / 2`; a negative drive
/// flips the terms that are odd in the drive amplitude (IX, ZX).
pub fn effective_hamiltonian(c: &PauliCoeffs, drive_sign: DriveSign) -> ComplexMatrix {
    let s = drive_sign.factor();
    let mut h = ComplexMatrix::zeros(4);
    for (label, coeff) in [
        ("IX", s * c.l_ix),
        ("ZI", c.l_zi),
        ("IZ", c.l_iz),
        ("ZZ", c.l_zz),
        ("ZX", s * c.l_zx),
    ] {
        if coeff != 0.0 {
            h = &h + &pauli_string(label).scale(C64::new(coeff / 2.0, 0.0));
        }
    }
    h
}

/// `XI · e^{-iH(−E₀)t} · XI · e^{-iH(+E₀)t}`.
pub fn echoed_unitary_numeric(c: &PauliCoeffs, t: f64) -> Result<ComplexMatrix, PulseError> {
    check_time(t)?;
    let xi = pauli_string("XI");
    let plus = matrix_exp_hermitian(&effective_hamiltonian(c, DriveSign::Plus), t)?;
    let minus = matrix_exp_hermitian(&effective_hamiltonian(c, DriveSign::Minus), t)?;
    Ok(&(&(&xi * &minus) * &xi) * &plus)
}

/// Closed-form echo coefficients: `Û = z_ii·II + z_iz·IZ + z_iy·IY + z_zx·ZX`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EchoCoeffs {
    pub z_ii: C64,
    pub z_iz: C64,
    pub z_iy: C64,
    pub z_zx: C64,
    pub zeta: f64,
    pub xi: f64,
}

impl EchoCoeffs {
    pub fn norm_sqr(&self) -> f64 {
        [self.z_ii, self.z_iz, self.z_iy, self.z_zx]
            .iter()
            .map(|z| z.norm_sqr())
            .sum()
    }

    pub fn unitary(&self) -> ComplexMatrix {
        let mut u = ComplexMatrix::zeros(4);
        for (label, z) in [
            ("II", self.z_ii),
            ("IZ", self.z_iz),
            ("IY", self.z_iy),
            ("ZX", self.z_zx),
        ] {
            u = &u + &pauli_string(label).scale(z);
        }
        u
    }
}

/// `sin(x·t/2) / x`, finite as `x → 0`.
fn sinc_half(x: f64, t: f64) -> f64 {
    if x.abs() < SINC_SERIES_BELOW {
        t / 2.0 - x * x * t * t * t / 48.0
    } else {
        (x * t / 2.0).sin() / x
    }
}

/// Echo coefficients and the unitary they define.
pub fn echoed_unitary_analytic(
    c: &PauliCoeffs,
    t: f64,
) -> Result<(EchoCoeffs, ComplexMatrix), PulseError> {
    check_time(t)?;
    let PauliCoeffs {
        l_ix,
        l_iz,
        l_zz,
        l_zx,
        ..
    } = *c;
    let zeta = (l_iz + l_zz).hypot(l_ix + l_zx);
    let xi = (l_iz - l_zz).hypot(l_ix - l_zx);
    let (sz, cz) = (sinc_half(zeta, t), (zeta * t / 2.0).cos());
    let (sx, cx) = (sinc_half(xi, t), (xi * t / 2.0).cos());
    let i = C64::new(0.0, 1.0);

    let z_ii = C64::new(
        ((l_ix * l_ix - l_iz * l_iz) + (l_zz * l_zz - l_zx * l_zx)) * sz * sx + cz * cx,
        0.0,
    );
    let z_iz = -i * ((l_iz - l_zz) * cz * sx + (l_iz + l_zz) * sz * cx);
    let z_iy = -i * (2.0 * (l_ix * l_iz - l_zx * l_zz) * sz * sx);
    let z_zx = i * ((l_ix - l_zx) * cz * sx - (l_ix + l_zx) * sz * cx);

    let coeffs = EchoCoeffs {
        z_ii,
        z_iz,
        z_iy,
        z_zx,
        zeta,
        xi,
    };
    Ok((coeffs, coeffs.unitary()))
}

/// `e^{-i(angle/2)·ZX}`.
pub fn zx_rotation(angle: f64) -> ComplexMatrix {
    let (s, c) = (angle / 2.0).sin_cos();
    let mut u = ComplexMatrix::identity(4).scale(C64::new(c, 0.0));
    u = &u + &pauli_string("ZX").scale(C64::new(0.0, -s));
    u
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GateErrorReport {
    pub time: f64,
    pub coeffs: EchoCoeffs,
    /// Average gate fidelity against `ZX(π/2)`.
    pub fidelity: f64,
    /// `|z_iz|`, surviving IZ error amplitude.
    pub residual_iz: f64,
    /// `|z_iy|`, surviving IY error amplitude.
    pub residual_iy: f64,
}

pub fn gate_error_report(c: &PauliCoeffs, t: f64) -> Result<GateErrorReport, PulseError> {
    let (coeffs, u) = echoed_unitary_analytic(c, t)?;
    Ok(GateErrorReport {
        time: t,
        coeffs,
        fidelity: avg_gate_fidelity(&u, &zx_rotation(FRAC_PI_2))?,
        residual_iz: coeffs.z_iz.norm(),
        residual_iy: coeffs.z_iy.norm(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Calibration {
    pub t_star: f64,
    pub fidelity: f64,
}

/// Pulse time in `(0, t_max]` maximizing fidelity to `ZX(π/2)`: best point
/// of a uniform grid, refined by golden-section search on its neighbours.
pub fn calibrate_time(c: &PauliCoeffs, t_max: f64) -> Result<Calibration, PulseError> {
    c.validate()?;
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err(PulseError::InvalidTime(t_max));
    }
    if c.as_array().iter().all(|&x| x == 0.0) {
        return Err(PulseError::DegenerateCoeffs);
    }
    let target = zx_rotation(FRAC_PI_2);
    let fid = |t: f64| -> f64 {
        let (_, u) = echoed_unitary_analytic(c, t).expect("validated time");
        avg_gate_fidelity(&u, &target).expect("4x4 operands")
    };

    let step = t_max / GRID_POINTS as f64;
    let mut best = Calibration {
        t_star: step,
        fidelity: f64::NEG_INFINITY,
    };
    for k in 1..=GRID_POINTS {
        let t = step * k as f64;
        let f = fid(t);
        if f > best.fidelity {
            best = Calibration {
                t_star: t,
                fidelity: f,
            };
        }
    }

    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (
        (best.t_star - step).max(0.0),
        (best.t_star + step).min(t_max),
    );
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let (mut f1, mut f2) = (fid(x1), fid(x2));
    while b - a > 1e-13 * t_max {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = fid(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = fid(x2);
        }
    }
    let t = (a + b) / 2.0;
    let f = fid(t);
    if t > 0.0 && f > best.fidelity {
        best = Calibration {
            t_star: t,
            fidelity: f,
        };
    }
    Ok(best)
}
