use super::{PulseError, TransmonParams};
use crate::linalg::{hermitian_eigen, kron, ComplexMatrix, C64};

/// Largest per-transmon truncation accepted.
pub const MAX_LEVELS: usize = 16;

const DRESSING_MIN_OVERLAP: f64 = 0.7;

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Truncated lowering operator, `a|n> = √n |n-1>`.
fn lowering(d: usize) -> ComplexMatrix {
    let mut a = ComplexMatrix::zeros(d);
    for n in 1..d {
        a[(n - 1, n)] = real((n as f64).sqrt());
    }
    a
}

/// `Σ_j [ε_j n_j + (δ_j/2) n_j(n_j − 1)] + E₀cos(ω·t + φ)(a₀† + a₀) + λ(a₀†a₁ + a₀a₁†)`
/// on `d ⊗ d` levels, transmon 0 first.
pub fn build_device_hamiltonian(
    p: &TransmonParams,
    time: f64,
) -> Result<ComplexMatrix, PulseError> {
    p.validate()?;
    if !time.is_finite() {
        return Err(PulseError::InvalidTime(time));
    }
    let d = p.levels;
    let id = ComplexMatrix::identity(d);
    let a = lowering(d);
    let ad = a.dagger();

    let mut local = Vec::new();
    for j in 0..2 {
        let energies: Vec<C64> = (0..d)
            .map(|n| {
                let n = n as f64;
                real(p.eps[j] * n + p.delta_res[j] / 2.0 * n * (n - 1.0))
            })
            .collect();
        local.push(ComplexMatrix::diagonal(&energies));
    }
    let mut h = &kron(&local[0], &id) + &kron(&id, &local[1]);

    let drive = p.drive_amp * (p.drive_freq * time + p.drive_phase).cos();
    if drive != 0.0 {
        let x0 = kron(&(&ad + &a), &id).scale(real(drive));
        h = &h + &x0;
    }
    if p.lambda != 0.0 {
        let hop = &kron(&ad, &a) + &kron(&a, &ad);
        h = &h + &hop.scale(real(p.lambda));
    }
    Ok(h)
}

/// Static ZZ shift `E₁₁ − E₁₀ − E₀₁ + E₀₀` of the undriven device.
///
/// Drive fields are ignored. Each computational state is matched to the
/// dressed eigenstate it overlaps most.
pub fn static_zz(p: &TransmonParams) -> Result<f64, PulseError> {
    p.validate()?;
    if p.lambda == 0.0 {
        return Ok(0.0);
    }
    let undriven = TransmonParams {
        drive_amp: 0.0,
        ..p.clone()
    };
    let h = build_device_hamiltonian(&undriven, 0.0)?;
    let (values, vectors) = hermitian_eigen(&h)?;
    let d = p.levels;
    let energy = |label: &'static str, n0: usize, n1: usize| -> Result<f64, PulseError> {
        let bare = n0 * d + n1;
        let (k, overlap) = (0..values.len())
            .map(|k| (k, vectors[(bare, k)].norm_sqr()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("non-empty spectrum");
        if overlap < DRESSING_MIN_OVERLAP {
            return Err(PulseError::AmbiguousDressing {
                state: label,
                overlap,
            });
        }
        Ok(values[k])
    };
    let e00 = energy("00", 0, 0)?;
    let e01 = energy("01", 0, 1)?;
    let e10 = energy("10", 1, 0)?;
    let e11 = energy("11", 1, 1)?;
    Ok(e11 - e10 - e01 + e00)
}
