use std::f64::consts::PI;

use super::TranspileError;
use crate::gates::{fixed, rz_matrix};
use crate::linalg::{hilbert_schmidt, ComplexMatrix, C64, DEFAULT_TOL};

/// `u = e^{i·phase} · Rz(alpha) · √X · Rz(beta) · √X · Rz(gamma)`.
///
/// As a circuit this reads `rz(gamma) sx rz(beta) sx rz(alpha)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerAngles {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub phase: f64,
}

impl EulerAngles {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let sx = fixed("sx");
        let m = &(&(&(&rz_matrix(self.alpha) * &sx) * &rz_matrix(self.beta)) * &sx)
            * &rz_matrix(self.gamma);
        m.scale(C64::from_polar(1.0, self.phase))
    }
}

/// Maps an angle into `(-π, π]`.
pub fn wrap_angle(x: f64) -> f64 {
    let y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y - 2.0 * PI
    } else {
        y
    }
}

/// ZSXZSXZ decomposition of a single-qubit unitary, angles in `(-π, π]`.
///
/// Uses `√X·Rz(β)·√X ∝ Ry(-β)·X`, so `u·X ∝ Rz(α)·Ry(-β)·Rz(-γ)` and the
/// angles follow from a ZYZ decomposition of `u·X`.
pub fn euler_decompose_1q(u: &ComplexMatrix) -> Result<EulerAngles, TranspileError> {
    if u.dim() != 2 {
        return Err(TranspileError::NotSingleQubit(u.dim()));
    }
    let deviation = u.unitary_deviation();
    if deviation > DEFAULT_TOL {
        return Err(TranspileError::NotUnitary { deviation });
    }
    let w = u * &fixed("x");
    let w = w.scale(w.det().sqrt().inv());
    // w = [[a, -b*], [b, a*]] = Rz(φ)·Ry(θ)·Rz(λ)
    let a = w[(0, 0)];
    let b = w[(1, 0)];
    let theta = 2.0 * b.norm().atan2(a.norm());
    let sum = if a.norm() > 1e-14 {
        -2.0 * a.arg()
    } else {
        0.0
    };
    let diff = if b.norm() > 1e-14 { 2.0 * b.arg() } else { 0.0 };
    let phi = (sum + diff) / 2.0;
    let lambda = (sum - diff) / 2.0;

    let mut angles = EulerAngles {
        alpha: wrap_angle(phi),
        beta: wrap_angle(-theta),
        gamma: wrap_angle(-lambda),
        phase: 0.0,
    };
    let tr = hilbert_schmidt(&angles.reconstruct(), u).expect("2x2 operands");
    angles.phase = tr.arg();
    Ok(angles)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::haar_unitary;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn x_is_two_sx() {
        let e = euler_decompose_1q(&fixed("x")).unwrap();
        assert_eq!((e.alpha, e.beta, e.gamma), (0.0, 0.0, 0.0));
        assert!(e.phase.abs() < 1e-15);
        assert!(e.reconstruct().max_abs_diff(&fixed("x")) < 1e-15);
    }

    #[test]
    fn rz_and_h_reconstruct() {
        let mut rng = StdRng::seed_from_u64(4);
        for _ in 0..50 {
            let theta = rng.random_range(-10.0..10.0);
            let u = rz_matrix(theta);
            let e = euler_decompose_1q(&u).unwrap();
            assert!(e.reconstruct().max_abs_diff(&u) <= 1e-10);
        }
        let h = fixed("h");
        assert!(
            euler_decompose_1q(&h)
                .unwrap()
                .reconstruct()
                .max_abs_diff(&h)
                <= 1e-10
        );
    }

    #[test]
    fn haar_reconstruction_and_canonical_range() {
        let mut rng = StdRng::seed_from_u64(8);
        for _ in 0..1000 {
            let u = haar_unitary(2, &mut rng);
            let e = euler_decompose_1q(&u).unwrap();
            assert!(e.reconstruct().max_abs_diff(&u) <= 1e-10);
            for a in [e.alpha, e.beta, e.gamma] {
                assert!(a > -PI && a <= PI);
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            euler_decompose_1q(&ComplexMatrix::zeros(2)),
            Err(TranspileError::NotUnitary { .. })
        ));
        assert!(matches!(
            euler_decompose_1q(&ComplexMatrix::identity(4)),
            Err(TranspileError::NotSingleQubit(4))
        ));
    }

    #[test]
    fn wrap() {
        assert_eq!(wrap_angle(PI), PI);
        assert!((wrap_angle(-PI) - PI).abs() < 1e-15);
        assert!((wrap_angle(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
        assert!((wrap_angle(0.25)) == 0.25);
    }
}
