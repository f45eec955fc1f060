//! Dense complex matrices and the handful of operations the rest of the crate
//! is built on: products, tensor products, Hermitian exponentials, Pauli
//! expansions, phase-insensitive comparison and two-qubit local invariants.
//!
//! Qubit ordering: qubit 0 is the most significant tensor factor, so for a
//! two-qubit operator `A ⊗ B` the matrix element `[i·2 + k][j·2 + l]` is
//! `A[i][j]·B[k][l]` and `A` acts on qubit 0.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

pub type C64 = Complex64;

/// Default tolerance for unitarity and phase-insensitive equivalence checks.
pub const DEFAULT_TOL: f64 = 1e-10;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("matrix is not Hermitian (max |h - h†| = {deviation:.3e})")]
    NonHermitian { deviation: f64 },
    #[error("matrix is not unitary (max |u†u - 1| = {deviation:.3e})")]
    NotUnitary { deviation: f64 },
    #[error("dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },
    #[error("expected {expected} entries for a {dim}x{dim} matrix, got {got}")]
    BadShape {
        dim: usize,
        expected: usize,
        got: usize,
    },
}

/// Square complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn new(dim: usize, data: Vec<C64>) -> Result<Self, LinalgError> {
        if dim == 0 || data.len() != dim * dim {
            return Err(LinalgError::BadShape {
                dim,
                expected: dim * dim,
                got: data.len(),
            });
        }
        Ok(Self { dim, data })
    }

    /// Builds a matrix from rows. Panics if the rows do not form a square.
    pub fn from_rows<R: AsRef<[C64]>>(rows: &[R]) -> Self {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            let row = row.as_ref();
            assert_eq!(row.len(), dim, "row length must equal row count");
            data.extend_from_slice(row);
        }
        Self::new(dim, data).expect("non-empty square input")
    }

    /// Builds a matrix from real rows.
    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Self {
        let complex: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&complex)
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0);
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn diagonal(entries: &[C64]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn dagger(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&x| x * s).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Elementwise max distance. Panics on dimension mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_distance(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `max |self - self†|`.
    pub fn hermitian_deviation(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// `max |self† self - 1|`.
    pub fn unitary_deviation(&self) -> f64 {
        (&self.dagger() * self).max_abs_diff(&Self::identity(self.dim))
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitary_deviation() <= tol
    }

    /// Determinant by LU factorisation with partial pivoting.
    pub fn det(&self) -> C64 {
        let n = self.dim;
        let mut a = self.data.clone();
        let mut det = ONE;
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&r, &s| a[r * n + col].norm().total_cmp(&a[s * n + col].norm()))
                .unwrap();
            if a[pivot * n + col].norm() == 0.0 {
                return ZERO;
            }
            if pivot != col {
                for k in 0..n {
                    a.swap(pivot * n + k, col * n + k);
                }
                det = -det;
            }
            let p = a[col * n + col];
            det *= p;
            for r in col + 1..n {
                let f = a[r * n + col] / p;
                if f == ZERO {
                    continue;
                }
                for k in col..n {
                    let v = a[col * n + k];
                    a[r * n + k] -= f * v;
                }
            }
        }
        det
    }

    fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.dim, self.dim, &self.data)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix product dimension mismatch");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

impl Mul for ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: ComplexMatrix) -> ComplexMatrix {
        &self * &rhs
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim);
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim);
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for i in 0..self.dim {
            let cells: Vec<String> = self
                .row(i)
                .iter()
                .map(|z| format!("{:+.4}{:+.4}i", z.re, z.im))
                .collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Tensor product `a ⊗ b`; `a` becomes the more significant factor.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (da, db) = (a.dim, b.dim);
    let n = da * db;
    let mut out = ComplexMatrix::zeros(n);
    for i in 0..da {
        for j in 0..da {
            let aij = a[(i, j)];
            if aij == ZERO {
                continue;
            }
            for k in 0..db {
                for l in 0..db {
                    out[(i * db + k, j * db + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Tensor product of a sequence of factors, first factor most significant.
pub fn kron_all<'a>(factors: impl IntoIterator<Item = &'a ComplexMatrix>) -> ComplexMatrix {
    factors
        .into_iter()
        .fold(ComplexMatrix::identity(1), |acc, f| kron(&acc, f))
}

/// `exp(-i·h·t)` for Hermitian `h`, via eigendecomposition.
pub fn matrix_exp_hermitian(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix, LinalgError> {
    let deviation = h.hermitian_deviation();
    if deviation > DEFAULT_TOL {
        return Err(LinalgError::NonHermitian { deviation });
    }
    let n = h.dim;
    // Symmetrise so roundoff in the input cannot leak into the eigenvectors.
    let sym = (h + &h.dagger()).scale(C64::new(0.5, 0.0));
    let eig = sym.to_nalgebra().symmetric_eigen();
    let v = &eig.eigenvectors;
    let phases: Vec<C64> = eig
        .eigenvalues
        .iter()
        .map(|&lambda| C64::from_polar(1.0, -lambda * t))
        .collect();
    let mut out = ComplexMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = ZERO;
            for (k, ph) in phases.iter().enumerate() {
                acc += v[(i, k)] * ph * v[(j, k)].conj();
            }
            out[(i, j)] = acc;
        }
    }
    Ok(out)
}

/// Eigenvalues (ascending) and column eigenvectors of a Hermitian matrix.
pub fn hermitian_eigen(h: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix), LinalgError> {
    let deviation = h.hermitian_deviation();
    if deviation > DEFAULT_TOL {
        return Err(LinalgError::NonHermitian { deviation });
    }
    let n = h.dim;
    let sym = (h + &h.dagger()).scale(C64::new(0.5, 0.0));
    let eig = sym.to_nalgebra().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = ComplexMatrix::zeros(n);
    for (col, &k) in order.iter().enumerate() {
        for row in 0..n {
            vectors[(row, col)] = eig.eigenvectors[(row, k)];
        }
    }
    Ok((values, vectors))
}

/// Single-qubit Pauli by letter (`I`, `X`, `Y`, `Z`).
pub fn pauli(letter: char) -> ComplexMatrix {
    match letter {
        'I' => ComplexMatrix::identity(2),
        'X' => ComplexMatrix::from_rows(&[[ZERO, ONE], [ONE, ZERO]]),
        'Y' => ComplexMatrix::from_rows(&[[ZERO, -I], [I, ZERO]]),
        'Z' => ComplexMatrix::from_rows(&[[ONE, ZERO], [ZERO, -ONE]]),
        other => panic!("not a Pauli letter: {other:?}"),
    }
}

/// Tensor product of Paulis named by a string such as `"ZX"` (qubit 0 first).
pub fn pauli_string(label: &str) -> ComplexMatrix {
    let factors: Vec<ComplexMatrix> = label.chars().map(pauli).collect();
    kron_all(&factors)
}

const PAULI_LETTERS: [char; 4] = ['I', 'X', 'Y', 'Z'];

/// Expansion `u = Σ_P c_P · P` over Pauli strings.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliDecomposition {
    pub n_qubits: usize,
    pub coefficients: BTreeMap<String, C64>,
}

impl PauliDecomposition {
    /// Coefficient of `label`; zero for unknown labels.
    pub fn coefficient(&self, label: &str) -> C64 {
        self.coefficients.get(label).copied().unwrap_or(ZERO)
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        let dim = 1usize << self.n_qubits;
        let mut acc = ComplexMatrix::zeros(dim);
        for (label, &c) in &self.coefficients {
            if c != ZERO {
                acc = &acc + &pauli_string(label).scale(c);
            }
        }
        acc
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coefficients.values().map(|c| c.norm_sqr()).sum()
    }

    /// Largest coefficient magnitude among labels not in `allowed`.
    pub fn max_outside(&self, allowed: &[&str]) -> f64 {
        self.coefficients
            .iter()
            .filter(|(label, _)| !allowed.contains(&label.as_str()))
            .map(|(_, c)| c.norm())
            .fold(0.0, f64::max)
    }
}

fn pauli_label(index: usize, n: usize) -> String {
    (0..n)
        .map(|q| PAULI_LETTERS[(index >> (2 * (n - 1 - q))) & 3])
        .collect()
}

/// Entry `P[row][row ^ xmask]` of a Pauli string, the only nonzero in its row.
fn pauli_row_entry(label: &[u8], row: usize) -> (usize, C64) {
    let n = label.len();
    let mut col = row;
    let mut value = ONE;
    for (q, &letter) in label.iter().enumerate() {
        let bit = (row >> (n - 1 - q)) & 1;
        match letter {
            b'I' => {}
            b'X' => col ^= 1 << (n - 1 - q),
            b'Y' => {
                col ^= 1 << (n - 1 - q);
                value *= if bit == 0 { -I } else { I };
            }
            b'Z' => {
                if bit == 1 {
                    value = -value;
                }
            }
            _ => unreachable!(),
        }
    }
    (col, value)
}

/// Coefficients `c_P = tr(P† u) / 2ⁿ` for every n-qubit Pauli string.
pub fn pauli_decompose(u: &ComplexMatrix) -> Result<PauliDecomposition, LinalgError> {
    let dim = u.dim;
    if !dim.is_power_of_two() {
        return Err(LinalgError::NotPowerOfTwo(dim));
    }
    let n = dim.trailing_zeros() as usize;
    let norm = 1.0 / dim as f64;
    let mut coefficients = BTreeMap::new();
    for index in 0..(1usize << (2 * n)) {
        let label = pauli_label(index, n);
        let bytes = label.as_bytes();
        // tr(P† u) = Σ_r conj(P[r][c]) · u[r][c]
        let mut acc = ZERO;
        for r in 0..dim {
            let (c, p) = pauli_row_entry(bytes, r);
            acc += p.conj() * u[(r, c)];
        }
        coefficients.insert(label, acc * norm);
    }
    Ok(PauliDecomposition {
        n_qubits: n,
        coefficients,
    })
}

fn check_same_dim(u: &ComplexMatrix, v: &ComplexMatrix) -> Result<(), LinalgError> {
    if u.dim != v.dim {
        return Err(LinalgError::DimMismatch {
            left: u.dim,
            right: v.dim,
        });
    }
    Ok(())
}

/// `tr(u† v)` without forming the product.
pub fn hilbert_schmidt(u: &ComplexMatrix, v: &ComplexMatrix) -> Result<C64, LinalgError> {
    check_same_dim(u, v)?;
    Ok(u.data.iter().zip(&v.data).map(|(a, b)| a.conj() * b).sum())
}

/// `|tr(u† v)| / dim`, equal to 1 exactly when `v = e^{iφ} u`.
pub fn phase_insensitive_overlap(u: &ComplexMatrix, v: &ComplexMatrix) -> Result<f64, LinalgError> {
    Ok(hilbert_schmidt(u, v)?.norm() / u.dim as f64)
}

/// True iff `|tr(u† v)| ≥ dim·(1 - tol)`.
pub fn equiv_up_to_global_phase(
    u: &ComplexMatrix,
    v: &ComplexMatrix,
    tol: f64,
) -> Result<bool, LinalgError> {
    Ok(phase_insensitive_overlap(u, v)? >= 1.0 - tol)
}

/// Average gate fidelity `(|tr(u† v)|² + d) / (d² + d)`.
pub fn avg_gate_fidelity(u: &ComplexMatrix, v: &ComplexMatrix) -> Result<f64, LinalgError> {
    let d = u.dim as f64;
    let tr = hilbert_schmidt(u, v)?;
    Ok((tr.norm_sqr() + d) / (d * d + d))
}

/// Local invariants of a two-qubit unitary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MakhlinInvariants {
    pub g1: C64,
    pub g2: f64,
}

impl MakhlinInvariants {
    pub fn distance(&self, other: &Self) -> f64 {
        (self.g1 - other.g1).norm().max((self.g2 - other.g2).abs())
    }
}

/// Bell ("magic") basis change used for the invariants:
///
/// ```text
///           [ 1  0  0  i ]
///  Q = 1/√2 [ 0  i  1  0 ]
///           [ 0  i -1  0 ]
///           [ 1  0  0 -i ]
/// ```
pub fn magic_basis() -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let r = C64::new(s, 0.0);
    let i = C64::new(0.0, s);
    ComplexMatrix::from_rows(&[
        [r, ZERO, ZERO, i],
        [ZERO, i, r, ZERO],
        [ZERO, i, -r, ZERO],
        [r, ZERO, ZERO, -i],
    ])
}

/// Makhlin invariants `(g1, g2)` of a 4×4 unitary.
///
/// With `m = (Q†uQ)ᵀ(Q†uQ)`: `g1 = tr²(m) / (16·det u)` and
/// `g2 = (tr²(m) - tr(m²)) / (4·det u)`. Both are unchanged by single-qubit
/// gates before or after `u`.
pub fn makhlin_invariants(u: &ComplexMatrix) -> Result<MakhlinInvariants, LinalgError> {
    if u.dim != 4 {
        return Err(LinalgError::DimMismatch {
            left: u.dim,
            right: 4,
        });
    }
    let deviation = u.unitary_deviation();
    if deviation > DEFAULT_TOL {
        return Err(LinalgError::NotUnitary { deviation });
    }
    let q = magic_basis();
    let ub = &(&q.dagger() * u) * &q;
    let m = &ub.transpose() * &ub;
    let det = u.det();
    let tr = m.trace();
    let tr_sq = (&m * &m).trace();
    Ok(MakhlinInvariants {
        g1: tr * tr / (det * 16.0),
        g2: ((tr * tr - tr_sq) / (det * 4.0)).re,
    })
}

/// Haar-random unitary via Gram-Schmidt (QR) of a complex Gaussian matrix.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let mut cols: Vec<Vec<C64>> = (0..dim)
        .map(|_| {
            (0..dim)
                .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect()
        })
        .collect();
    for k in 0..dim {
        for j in 0..k {
            let proj: C64 = (0..dim).map(|r| cols[j][r].conj() * cols[k][r]).sum();
            let (head, tail) = cols.split_at_mut(k);
            for (x, v) in tail[0].iter_mut().zip(&head[j]) {
                *x -= proj * v;
            }
        }
        let norm = cols[k].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in &mut cols[k] {
            *z /= norm;
        }
    }
    let mut out = ComplexMatrix::zeros(dim);
    for (c, col) in cols.iter().enumerate() {
        for (r, &z) in col.iter().enumerate() {
            out[(r, c)] = z;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::SeedableRng;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn ecr_by_hand() -> ComplexMatrix {
        let s = FRAC_1_SQRT_2;
        ComplexMatrix::from_rows(&[
            [c(0., 0.), c(s, 0.), c(0., 0.), c(0., s)],
            [c(s, 0.), c(0., 0.), c(0., -s), c(0., 0.)],
            [c(0., 0.), c(0., s), c(0., 0.), c(s, 0.)],
            [c(0., -s), c(0., 0.), c(s, 0.), c(0., 0.)],
        ])
    }

    fn ecr_rev_by_hand() -> ComplexMatrix {
        let s = FRAC_1_SQRT_2;
        ComplexMatrix::from_rows(&[
            [c(0., 0.), c(0., 0.), c(s, 0.), c(0., s)],
            [c(0., 0.), c(0., 0.), c(0., s), c(s, 0.)],
            [c(s, 0.), c(0., -s), c(0., 0.), c(0., 0.)],
            [c(0., -s), c(s, 0.), c(0., 0.), c(0., 0.)],
        ])
    }

    fn cnot() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[
            [1., 0., 0., 0.],
            [0., 1., 0., 0.],
            [0., 0., 0., 1.],
            [0., 0., 1., 0.],
        ])
    }

    fn random_hermitian(dim: usize, rng: &mut StdRng) -> ComplexMatrix {
        let mut h = ComplexMatrix::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                h[(i, j)] = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            }
        }
        (&h + &h.dagger()).scale(c(0.5, 0.0))
    }

    #[test]
    fn kron_identity_x_is_block_diagonal() {
        let m = kron(&pauli('I'), &pauli('X'));
        let expected = ComplexMatrix::from_real_rows(&[
            [0., 1., 0., 0.],
            [1., 0., 0., 0.],
            [0., 0., 0., 1.],
            [0., 0., 1., 0.],
        ]);
        assert_eq!(m, expected);
    }

    #[test]
    fn kron_index_formula() {
        let mut rng = StdRng::seed_from_u64(3);
        let a = haar_unitary(2, &mut rng);
        let b = haar_unitary(4, &mut rng);
        let ab = kron(&a, &b);
        assert_eq!(ab.dim(), 8);
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..4 {
                    for l in 0..4 {
                        assert_eq!(ab[(i * 4 + k, j * 4 + l)], a[(i, j)] * b[(k, l)]);
                    }
                }
            }
        }
    }

    #[test]
    fn ecr_matrices_from_pauli_tensors() {
        let s = c(FRAC_1_SQRT_2, 0.0);
        let fwd = (&kron(&pauli('I'), &pauli('X')) - &kron(&pauli('X'), &pauli('Y'))).scale(s);
        assert!(fwd.max_abs_diff(&ecr_by_hand()) <= 1e-12);
        let rev = (&kron(&pauli('X'), &pauli('I')) - &kron(&pauli('Y'), &pauli('X'))).scale(s);
        assert!(rev.max_abs_diff(&ecr_rev_by_hand()) <= 1e-12);
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let u = matrix_exp_hermitian(&ComplexMatrix::zeros(4), 1.7).unwrap();
        assert!(u.max_abs_diff(&ComplexMatrix::identity(4)) < 1e-15);
    }

    #[test]
    fn exp_of_z() {
        let u = matrix_exp_hermitian(&pauli('Z'), PI / 2.0).unwrap();
        let expected = ComplexMatrix::diagonal(&[c(0., -1.), c(0., 1.)]);
        assert!(u.max_abs_diff(&expected) < 1e-14);
    }

    #[test]
    fn exp_of_half_zx_is_zx_rotation() {
        let zx = pauli_string("ZX");
        let angle = 0.731;
        let u = matrix_exp_hermitian(&zx.scale(c(0.5, 0.0)), angle).unwrap();
        let expected = &ComplexMatrix::identity(4).scale(c((angle / 2.0).cos(), 0.0))
            + &zx.scale(c(0.0, -(angle / 2.0).sin()));
        assert!(u.max_abs_diff(&expected) < 1e-13);
    }

    #[test]
    fn exp_rejects_non_hermitian() {
        let mut h = ComplexMatrix::zeros(2);
        h[(0, 1)] = ONE;
        assert!(matches!(
            matrix_exp_hermitian(&h, 1.0),
            Err(LinalgError::NonHermitian { .. })
        ));
    }

    #[test]
    fn exp_forward_backward_is_identity() {
        let mut rng = StdRng::seed_from_u64(11);
        for dim in [2, 4, 8, 25] {
            for _ in 0..20 {
                let h = random_hermitian(dim, &mut rng);
                let t = rng.random_range(-3.0..3.0);
                let fwd = matrix_exp_hermitian(&h, t).unwrap();
                let back = matrix_exp_hermitian(&h, -t).unwrap();
                assert!(fwd.is_unitary(1e-10));
                assert!((&fwd * &back).max_abs_diff(&ComplexMatrix::identity(dim)) <= 1e-10);
            }
        }
    }

    #[test]
    fn pauli_decompose_identity_and_ecr() {
        let d = pauli_decompose(&ComplexMatrix::identity(4)).unwrap();
        assert_eq!(d.coefficients.len(), 16);
        assert!((d.coefficient("II") - ONE).norm() < 1e-15);
        assert!(d.max_outside(&["II"]) < 1e-15);

        let d = pauli_decompose(&ecr_by_hand()).unwrap();
        assert!((d.coefficient("IX") - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert!((d.coefficient("XY") - c(-FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert!(d.max_outside(&["IX", "XY"]) < 1e-15);
    }

    #[test]
    fn pauli_decompose_zx_rotation() {
        let w: f64 = 1.234;
        let u = &ComplexMatrix::identity(4).scale(c((w / 2.0).cos(), 0.0))
            + &pauli_string("ZX").scale(c(0.0, -(w / 2.0).sin()));
        let d = pauli_decompose(&u).unwrap();
        assert!((d.coefficient("II") - c((w / 2.0).cos(), 0.0)).norm() < 1e-15);
        assert!((d.coefficient("ZX") - c(0.0, -(w / 2.0).sin())).norm() < 1e-15);
    }

    #[test]
    fn pauli_decompose_rejects_odd_dims() {
        assert_eq!(
            pauli_decompose(&ComplexMatrix::identity(3)),
            Err(LinalgError::NotPowerOfTwo(3))
        );
    }

    #[test]
    fn pauli_round_trip_and_unit_norm() {
        let mut rng = StdRng::seed_from_u64(5);
        for dim in [2, 4, 8] {
            for _ in 0..10 {
                let u = haar_unitary(dim, &mut rng);
                let d = pauli_decompose(&u).unwrap();
                assert!(d.reconstruct().max_abs_diff(&u) <= 1e-12);
                assert!((d.norm_sqr() - 1.0).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn global_phase_equivalence() {
        let mut rng = StdRng::seed_from_u64(9);
        for _ in 0..100 {
            let u = haar_unitary(4, &mut rng);
            let phi: f64 = rng.random_range(-PI..PI);
            let v = u.scale(C64::from_polar(1.0, phi));
            assert!(equiv_up_to_global_phase(&u, &v, 1e-10).unwrap());
            assert!(equiv_up_to_global_phase(&v, &u, 1e-10).unwrap());
        }
        assert!(!equiv_up_to_global_phase(&pauli('I'), &pauli('X'), 1e-10).unwrap());
        assert!(matches!(
            equiv_up_to_global_phase(&pauli('I'), &ComplexMatrix::identity(4), 1e-10),
            Err(LinalgError::DimMismatch { left: 2, right: 4 })
        ));
    }

    #[test]
    fn fidelity_values() {
        let mut rng = StdRng::seed_from_u64(1);
        let u = haar_unitary(8, &mut rng);
        assert!((avg_gate_fidelity(&u, &u).unwrap() - 1.0).abs() < 1e-12);
        let f = avg_gate_fidelity(&pauli('I'), &pauli('X')).unwrap();
        assert!((f - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn makhlin_known_values() {
        let cx = makhlin_invariants(&cnot()).unwrap();
        assert!(cx.g1.norm() < 1e-12);
        assert!((cx.g2 - 1.0).abs() < 1e-12);
        let id = makhlin_invariants(&ComplexMatrix::identity(4)).unwrap();
        assert!((id.g1 - ONE).norm() < 1e-12);
        assert!((id.g2 - 3.0).abs() < 1e-12);
        let ecr = makhlin_invariants(&ecr_by_hand()).unwrap();
        assert!(ecr.distance(&cx) <= 1e-12);
        assert!(ecr.distance(&id) > 0.5);
    }

    #[test]
    fn makhlin_local_invariance() {
        let mut rng = StdRng::seed_from_u64(21);
        for _ in 0..100 {
            let u = haar_unitary(4, &mut rng);
            let base = makhlin_invariants(&u).unwrap();
            let pre = kron(&haar_unitary(2, &mut rng), &haar_unitary(2, &mut rng));
            let post = kron(&haar_unitary(2, &mut rng), &haar_unitary(2, &mut rng));
            let moved = makhlin_invariants(&(&(&post * &u) * &pre)).unwrap();
            assert!(base.distance(&moved) <= 1e-12, "{base:?} vs {moved:?}");
        }
        let local = kron(&haar_unitary(2, &mut rng), &haar_unitary(2, &mut rng));
        let id = makhlin_invariants(&ComplexMatrix::identity(4)).unwrap();
        assert!(makhlin_invariants(&local).unwrap().distance(&id) <= 1e-12);
    }

    #[test]
    fn makhlin_errors() {
        assert!(matches!(
            makhlin_invariants(&ComplexMatrix::identity(2)),
            Err(LinalgError::DimMismatch { .. })
        ));
        assert!(matches!(
            makhlin_invariants(&ComplexMatrix::zeros(4)),
            Err(LinalgError::NotUnitary { .. })
        ));
    }

    #[test]
    fn det_matches_product_of_diagonal() {
        let d = ComplexMatrix::diagonal(&[c(2., 0.), c(0., 1.), c(-1., 1.)]);
        assert!((d.det() - c(2., 0.) * c(0., 1.) * c(-1., 1.)).norm() < 1e-15);
        let mut rng = StdRng::seed_from_u64(2);
        let u = haar_unitary(4, &mut rng);
        assert!((u.det().norm() - 1.0).abs() < 1e-12);
    }
}
