//! Circuit IR: instructions on indexed qubits, metrics, full-unitary
//! evaluation and coupling-map checks.
//!
//! Instruction order is temporal: the first instruction acts first, so the
//! circuit unitary is `U_last · … · U_first`.

mod text;

use std::collections::{BTreeMap, BTreeSet};

use serde::Deserialize;
use thiserror::Error;

use crate::gates::{self, GateDef, GateError};
use crate::linalg::{ComplexMatrix, C64, ZERO};

pub use text::{emit, format_angle, parse, parse_angle, ParseError};

/// Largest circuit width the IR accepts.
pub const MAX_QUBITS: usize = 16;
/// Largest width `unitary_of` will build a dense matrix for.
pub const MAX_UNITARY_QUBITS: usize = 12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CircuitError {
    #[error(transparent)]
    Gate(#[from] GateError),
    #[error("circuit width must be between 1 and {MAX_QUBITS}, got {0}")]
    BadWidth(usize),
    #[error("qubit {qubit} out of range for a {n_qubits}-qubit circuit")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },
    #[error("qubit {0} used twice in one instruction")]
    DuplicateQubit(usize),
    #[error("gate `{gate}` acts on {expected} qubit(s), got {got}")]
    WrongQubitCount {
        gate: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("unitary construction limited to {MAX_UNITARY_QUBITS} qubits, circuit has {0}")]
    TooManyQubits(usize),
    #[error("coupling edge ({0}, {1}) is invalid")]
    InvalidEdge(usize, usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instruction {
    pub gate: &'static GateDef,
    pub qubits: Vec<usize>,
    pub params: Vec<f64>,
}

impl Instruction {
    pub fn name(&self) -> &'static str {
        self.gate.name
    }

    pub fn matrix(&self) -> ComplexMatrix {
        self.gate
            .matrix(&self.params)
            .expect("instruction validated on construction")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    instructions: Vec<Instruction>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Result<Self, CircuitError> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(CircuitError::BadWidth(n_qubits));
        }
        Ok(Self {
            n_qubits,
            instructions: Vec::new(),
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    /// Appends a gate after validating it against the registry and the width.
    pub fn push(
        &mut self,
        gate: &str,
        qubits: &[usize],
        params: &[f64],
    ) -> Result<(), CircuitError> {
        let def = gates::lookup(gate)?;
        if params.len() != def.param_count {
            return Err(GateError::WrongParamCount {
                gate: def.name,
                expected: def.param_count,
                got: params.len(),
            }
            .into());
        }
        if qubits.len() != def.arity {
            return Err(CircuitError::WrongQubitCount {
                gate: def.name,
                expected: def.arity,
                got: qubits.len(),
            });
        }
        for (i, &q) in qubits.iter().enumerate() {
            if q >= self.n_qubits {
                return Err(CircuitError::QubitOutOfRange {
                    qubit: q,
                    n_qubits: self.n_qubits,
                });
            }
            if qubits[..i].contains(&q) {
                return Err(CircuitError::DuplicateQubit(q));
            }
        }
        self.instructions.push(Instruction {
            gate: def,
            qubits: qubits.to_vec(),
            params: params.to_vec(),
        });
        Ok(())
    }

    /// Builder-style `push` for gates known to be valid; panics otherwise.
    pub fn with(mut self, gate: &str, qubits: &[usize], params: &[f64]) -> Self {
        self.push(gate, qubits, params)
            .unwrap_or_else(|e| panic!("invalid instruction {gate} {qubits:?}: {e}"));
        self
    }

    /// `self` followed by `other`, widened to the larger of the two.
    pub fn concat(&self, other: &Circuit) -> Circuit {
        let mut out = Circuit {
            n_qubits: self.n_qubits.max(other.n_qubits),
            instructions: self.instructions.clone(),
        };
        out.instructions.extend(other.instructions.iter().cloned());
        out
    }

    /// Relabels qubit `q` as `mapping[q]`, keeping the same width.
    pub fn remap(&self, mapping: &[usize]) -> Result<Circuit, CircuitError> {
        let mut out = Circuit::new(self.n_qubits)?;
        for inst in &self.instructions {
            let qubits: Vec<usize> = inst.qubits.iter().map(|&q| mapping[q]).collect();
            out.push(inst.name(), &qubits, &inst.params)?;
        }
        Ok(out)
    }

    /// Structural equality with parameters compared to within
    /// `tol·max(1, |θ|)`, which is what survives a text round trip.
    pub fn approx_eq(&self, other: &Circuit, tol: f64) -> bool {
        self.n_qubits == other.n_qubits
            && self.instructions.len() == other.instructions.len()
            && self
                .instructions
                .iter()
                .zip(&other.instructions)
                .all(|(a, b)| {
                    a.gate == b.gate
                        && a.qubits == b.qubits
                        && a.params.len() == b.params.len()
                        && a.params
                            .iter()
                            .zip(&b.params)
                            .all(|(x, y)| (x - y).abs() <= tol * x.abs().max(1.0))
                })
    }
}

/// Applies a `k`-qubit gate to every column of `state` (a `2ⁿ`-row matrix).
fn apply_gate(state: &mut ComplexMatrix, n: usize, qubits: &[usize], gate: &ComplexMatrix) {
    let dim = 1usize << n;
    let k = qubits.len();
    let local = 1usize << k;
    // Bit of the global index that carries local bit `b` (local bit 0 is the
    // least significant, i.e. the last listed qubit).
    let masks: Vec<usize> = (0..k)
        .map(|b| 1usize << (n - 1 - qubits[k - 1 - b]))
        .collect();
    let all: usize = masks.iter().sum();
    let spread = |l: usize| -> usize {
        masks
            .iter()
            .enumerate()
            .filter(|(b, _)| l >> b & 1 == 1)
            .map(|(_, m)| m)
            .sum()
    };
    let offsets: Vec<usize> = (0..local).map(spread).collect();
    let data = state.as_mut_slice();
    let mut rows: Vec<Vec<C64>> = vec![vec![ZERO; dim]; local];
    for base in 0..dim {
        if base & all != 0 {
            continue;
        }
        for (l, row) in rows.iter_mut().enumerate() {
            let r = base | offsets[l];
            row.copy_from_slice(&data[r * dim..(r + 1) * dim]);
        }
        for l in 0..local {
            let r = base | offsets[l];
            let out = &mut data[r * dim..(r + 1) * dim];
            out.fill(ZERO);
            for (m, row) in rows.iter().enumerate() {
                let g = gate[(l, m)];
                if g == ZERO {
                    continue;
                }
                for (o, v) in out.iter_mut().zip(row) {
                    *o += g * v;
                }
            }
        }
    }
}

/// Embeds a gate acting on `qubits` into the full `2ⁿ`-dimensional space.
pub fn embed(gate: &ComplexMatrix, qubits: &[usize], n_qubits: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::identity(1 << n_qubits);
    apply_gate(&mut m, n_qubits, qubits, gate);
    m
}

/// Full unitary of a circuit, qubit 0 most significant.
pub fn unitary_of(c: &Circuit) -> Result<ComplexMatrix, CircuitError> {
    if c.n_qubits > MAX_UNITARY_QUBITS {
        return Err(CircuitError::TooManyQubits(c.n_qubits));
    }
    let mut u = ComplexMatrix::identity(1 << c.n_qubits);
    for inst in &c.instructions {
        apply_gate(&mut u, c.n_qubits, &inst.qubits, &inst.matrix());
    }
    Ok(u)
}

/// Number of layers under greedy as-soon-as-possible scheduling.
pub fn depth(c: &Circuit) -> usize {
    let mut level = vec![0usize; c.n_qubits];
    for inst in &c.instructions {
        let layer = inst.qubits.iter().map(|&q| level[q]).max().unwrap_or(0) + 1;
        for &q in &inst.qubits {
            level[q] = layer;
        }
    }
    level.into_iter().max().unwrap_or(0)
}

pub fn gate_counts(c: &Circuit) -> BTreeMap<String, usize> {
    let mut counts = BTreeMap::new();
    for inst in &c.instructions {
        *counts.entry(inst.name().to_string()).or_insert(0) += 1;
    }
    counts
}

pub fn two_qubit_count(c: &Circuit) -> usize {
    c.instructions.iter().filter(|i| i.gate.arity == 2).count()
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCouplingMap {
    n_qubits: usize,
    edges: Vec<(usize, usize)>,
}

/// Undirected graph of qubit pairs allowed to host two-qubit gates.
///
/// JSON form: `{"n_qubits": 3, "edges": [[0, 1], [1, 2]]}`.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(try_from = "RawCouplingMap")]
pub struct CouplingMap {
    n_qubits: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl TryFrom<RawCouplingMap> for CouplingMap {
    type Error = CircuitError;
    fn try_from(raw: RawCouplingMap) -> Result<Self, Self::Error> {
        CouplingMap::new(raw.n_qubits, raw.edges)
    }
}

impl CouplingMap {
    pub fn new(
        n_qubits: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, CircuitError> {
        if n_qubits == 0 {
            return Err(CircuitError::BadWidth(0));
        }
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b || a >= n_qubits || b >= n_qubits {
                return Err(CircuitError::InvalidEdge(a, b));
            }
            set.insert((a.min(b), a.max(b)));
        }
        Ok(Self {
            n_qubits,
            edges: set,
        })
    }

    /// Chain `0 - 1 - … - (n-1)`.
    pub fn linear(n_qubits: usize) -> Result<Self, CircuitError> {
        Self::new(n_qubits, (1..n_qubits).map(|i| (i - 1, i)))
    }

    pub fn full(n_qubits: usize) -> Result<Self, CircuitError> {
        Self::new(
            n_qubits,
            (0..n_qubits).flat_map(|a| (a + 1..n_qubits).map(move |b| (a, b))),
        )
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Edges as ordered `(low, high)` pairs.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }
}

/// A two-qubit interaction the coupling map does not allow.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Violation {
    pub instruction: usize,
    pub qubits: (usize, usize),
}

/// Every instruction pair missing from `m`. A 3-qubit instruction yields one
/// record per missing pair.
pub fn validate_connectivity(c: &Circuit, m: &CouplingMap) -> Vec<Violation> {
    let mut out = Vec::new();
    for (index, inst) in c.instructions.iter().enumerate() {
        let qs = &inst.qubits;
        for i in 0..qs.len() {
            for j in i + 1..qs.len() {
                if !m.contains(qs[i], qs[j]) {
                    out.push(Violation {
                        instruction: index,
                        qubits: (qs[i], qs[j]),
                    });
                }
            }
        }
    }
    out
}
