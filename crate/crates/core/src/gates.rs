//! Gate registry. Names double as the mnemonics of the `.qc` text format.
//!
//! Conventions:
//! - `rz(θ) = diag(e^{-iθ/2}, e^{iθ/2})`, so `t` and `s` (projector forms
//!   `diag(1, e^{iπ/4})`, `diag(1, i)`) equal `rz(π/4)`, `rz(π/2)` only up to
//!   global phase.
//! - `sx = ((1+i)/2)·[[1, -i], [-i, 1]]`, which squares to `x` exactly.
//! - `ecr a b` is `(I⊗X - X⊗Y)/√2` with `a` as the first tensor factor;
//!   `ecr_rev a b` is `(X⊗I - Y⊗X)/√2`, i.e. the same interaction as `ecr b a`.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};
use std::fmt;

use thiserror::Error;

use crate::linalg::{ComplexMatrix, C64, I, ONE, ZERO};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GateError {
    #[error("unknown gate `{0}`")]
    UnknownGate(String),
    #[error("gate `{gate}` takes {expected} parameter(s), got {got}")]
    WrongParamCount {
        gate: &'static str,
        expected: usize,
        got: usize,
    },
}

/// A named gate with its unitary generator.
pub struct GateDef {
    pub name: &'static str,
    pub arity: usize,
    pub param_count: usize,
    matrix_fn: fn(&[f64]) -> ComplexMatrix,
}

impl GateDef {
    pub fn matrix(&self, params: &[f64]) -> Result<ComplexMatrix, GateError> {
        if params.len() != self.param_count {
            return Err(GateError::WrongParamCount {
                gate: self.name,
                expected: self.param_count,
                got: params.len(),
            });
        }
        Ok((self.matrix_fn)(params))
    }

    pub fn is_two_qubit(&self) -> bool {
        self.arity == 2
    }
}

impl fmt::Debug for GateDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GateDef")
            .field("name", &self.name)
            .field("arity", &self.arity)
            .field("param_count", &self.param_count)
            .finish()
    }
}

impl PartialEq for GateDef {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
    }
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn m2(a: C64, b: C64, cc: C64, d: C64) -> ComplexMatrix {
    ComplexMatrix::from_rows(&[[a, b], [cc, d]])
}

fn id(_: &[f64]) -> ComplexMatrix {
    ComplexMatrix::identity(2)
}
fn x(_: &[f64]) -> ComplexMatrix {
    m2(ZERO, ONE, ONE, ZERO)
}
fn y(_: &[f64]) -> ComplexMatrix {
    m2(ZERO, -I, I, ZERO)
}
fn z(_: &[f64]) -> ComplexMatrix {
    m2(ONE, ZERO, ZERO, -ONE)
}
fn h(_: &[f64]) -> ComplexMatrix {
    let s = c(FRAC_1_SQRT_2, 0.0);
    m2(s, s, s, -s)
}
fn s(_: &[f64]) -> ComplexMatrix {
    m2(ONE, ZERO, ZERO, I)
}
fn sdg(_: &[f64]) -> ComplexMatrix {
    m2(ONE, ZERO, ZERO, -I)
}
fn t(_: &[f64]) -> ComplexMatrix {
    m2(ONE, ZERO, ZERO, C64::from_polar(1.0, FRAC_PI_4))
}
fn tdg(_: &[f64]) -> ComplexMatrix {
    m2(ONE, ZERO, ZERO, C64::from_polar(1.0, -FRAC_PI_4))
}
fn sx(_: &[f64]) -> ComplexMatrix {
    let a = c(0.5, 0.5);
    let b = c(0.5, -0.5);
    m2(a, b, b, a)
}
fn rz(p: &[f64]) -> ComplexMatrix {
    let theta = p[0];
    m2(
        C64::from_polar(1.0, -theta / 2.0),
        ZERO,
        ZERO,
        C64::from_polar(1.0, theta / 2.0),
    )
}
fn cx(_: &[f64]) -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[
        [1., 0., 0., 0.],
        [0., 1., 0., 0.],
        [0., 0., 0., 1.],
        [0., 0., 1., 0.],
    ])
}
fn cz(_: &[f64]) -> ComplexMatrix {
    ComplexMatrix::diagonal(&[ONE, ONE, ONE, -ONE])
}
fn ecr(_: &[f64]) -> ComplexMatrix {
    let r = c(FRAC_1_SQRT_2, 0.0);
    let i = c(0.0, FRAC_1_SQRT_2);
    ComplexMatrix::from_rows(&[
        [ZERO, r, ZERO, i],
        [r, ZERO, -i, ZERO],
        [ZERO, i, ZERO, r],
        [-i, ZERO, r, ZERO],
    ])
}
fn ecr_rev(_: &[f64]) -> ComplexMatrix {
    let r = c(FRAC_1_SQRT_2, 0.0);
    let i = c(0.0, FRAC_1_SQRT_2);
    ComplexMatrix::from_rows(&[
        [ZERO, ZERO, r, i],
        [ZERO, ZERO, i, r],
        [r, -i, ZERO, ZERO],
        [-i, r, ZERO, ZERO],
    ])
}
fn ccx(_: &[f64]) -> ComplexMatrix {
    let mut m = ComplexMatrix::identity(8);
    m[(6, 6)] = ZERO;
    m[(7, 7)] = ZERO;
    m[(6, 7)] = ONE;
    m[(7, 6)] = ONE;
    m
}
fn ccz(_: &[f64]) -> ComplexMatrix {
    let mut m = ComplexMatrix::identity(8);
    m[(7, 7)] = -ONE;
    m
}

macro_rules! gate {
    ($name:literal, $arity:expr, $params:expr, $f:expr) => {
        GateDef {
            name: $name,
            arity: $arity,
            param_count: $params,
            matrix_fn: $f,
        }
    };
}

static REGISTRY: [GateDef; 17] = [
    gate!("id", 1, 0, id),
    gate!("x", 1, 0, x),
    gate!("y", 1, 0, y),
    gate!("z", 1, 0, z),
    gate!("h", 1, 0, h),
    gate!("s", 1, 0, s),
    gate!("sdg", 1, 0, sdg),
    gate!("t", 1, 0, t),
    gate!("tdg", 1, 0, tdg),
    gate!("sx", 1, 0, sx),
    gate!("rz", 1, 1, rz),
    gate!("cx", 2, 0, cx),
    gate!("cz", 2, 0, cz),
    gate!("ecr", 2, 0, ecr),
    gate!("ecr_rev", 2, 0, ecr_rev),
    gate!("ccx", 3, 0, ccx),
    gate!("ccz", 3, 0, ccz),
];

/// All gates, in a stable order.
pub fn registry() -> &'static [GateDef] {
    &REGISTRY
}

pub fn lookup(name: &str) -> Result<&'static GateDef, GateError> {
    REGISTRY
        .iter()
        .find(|g| g.name == name)
        .ok_or_else(|| GateError::UnknownGate(name.to_string()))
}

/// Unitary of the gate called `name`.
pub fn matrix_of(name: &str, params: &[f64]) -> Result<ComplexMatrix, GateError> {
    lookup(name)?.matrix(params)
}

/// Shorthand for parameter-free gates known to exist.
pub(crate) fn fixed(name: &str) -> ComplexMatrix {
    matrix_of(name, &[]).expect("registry gate")
}

pub fn rz_matrix(theta: f64) -> ComplexMatrix {
    rz(&[theta])
}
