//! CNOT expressed with a single ECR plus single-qubit Clifford corrections.
//!
//! The corrections depend on the `rz`/`sx` phase conventions, so they are
//! searched for rather than written down: every word of at most three letters
//! over `{rz(π/2), rz(π), rz(-π/2), sx, x}` is enumerated, duplicates up to
//! global phase are removed (leaving the 24 single-qubit Cliffords), and the
//! first combination `(A0 ⊗ A1)·ECR·(B0 ⊗ B1) ≡ CNOT` with the fewest gates
//! is kept.

use std::collections::HashSet;
use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::OnceLock;

use super::TranspileError;
use crate::circuit::Circuit;
use crate::gates::{fixed, matrix_of};
use crate::linalg::{kron, ComplexMatrix, C64, ZERO};

/// One single-qubit step of a correction word.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Step {
    pub gate: &'static str,
    pub param: Option<f64>,
}

impl Step {
    pub fn matrix(&self) -> ComplexMatrix {
        match self.param {
            Some(p) => matrix_of(self.gate, &[p]).expect("registry gate"),
            None => fixed(self.gate),
        }
    }
}

const ALPHABET: [Step; 5] = [
    Step {
        gate: "rz",
        param: Some(FRAC_PI_2),
    },
    Step {
        gate: "rz",
        param: Some(PI),
    },
    Step {
        gate: "rz",
        param: Some(-FRAC_PI_2),
    },
    Step {
        gate: "sx",
        param: None,
    },
    Step {
        gate: "x",
        param: None,
    },
];

/// Temporal word (first step acts first) and its matrix.
#[derive(Debug, Clone)]
pub struct Word {
    pub steps: Vec<Step>,
    pub matrix: ComplexMatrix,
}

/// `CNOT(c, t) ≡ (post[0] ⊗ post[1]) · ECR(c, t) · (pre[0] ⊗ pre[1])`,
/// index 0 on the control wire.
#[derive(Debug, Clone)]
pub struct EcrTemplate {
    pub pre: [Word; 2],
    pub post: [Word; 2],
}

impl EcrTemplate {
    pub fn gate_count(&self) -> usize {
        1 + self
            .pre
            .iter()
            .chain(&self.post)
            .map(|w| w.steps.len())
            .sum::<usize>()
    }
}

fn phase_key(m: &ComplexMatrix) -> Vec<i64> {
    let pivot = m
        .as_slice()
        .iter()
        .find(|z| z.norm() > 1e-6)
        .copied()
        .unwrap_or(ZERO);
    let unphase = C64::from_polar(1.0, -pivot.arg());
    m.as_slice()
        .iter()
        .flat_map(|&z| {
            let z = z * unphase;
            [(z.re * 1e8).round() as i64, (z.im * 1e8).round() as i64]
        })
        .collect()
}

/// Distinct-up-to-phase words, shortest first.
fn clifford_words() -> Vec<Word> {
    let mut words = vec![Word {
        steps: vec![],
        matrix: ComplexMatrix::identity(2),
    }];
    let mut frontier = words.clone();
    for _ in 0..3 {
        let mut next = Vec::new();
        for w in &frontier {
            for step in ALPHABET {
                let mut steps = w.steps.clone();
                steps.push(step);
                next.push(Word {
                    matrix: &step.matrix() * &w.matrix,
                    steps,
                });
            }
        }
        words.extend(next.iter().cloned());
        frontier = next;
    }
    let mut seen = HashSet::new();
    words.retain(|w| seen.insert(phase_key(&w.matrix)));
    words
}

fn search() -> Result<EcrTemplate, TranspileError> {
    let words = clifford_words();
    let ecr = fixed("ecr");
    let cnot = fixed("cx");
    let cnot_dag = cnot.dagger();
    let n = words.len();

    // |tr(CNOT† · P · M)| = |Σ N[i][j]·P[j][i]| with N = M·CNOT†
    let mut best: Option<(usize, [usize; 4])> = None;
    for i0 in 0..n {
        for i1 in 0..n {
            let m = &ecr * &kron(&words[i0].matrix, &words[i1].matrix);
            let nm = &m * &cnot_dag;
            for j0 in 0..n {
                for j1 in 0..n {
                    let cost = words[i0].steps.len()
                        + words[i1].steps.len()
                        + words[j0].steps.len()
                        + words[j1].steps.len();
                    if best.is_some_and(|(c, _)| cost >= c) {
                        continue;
                    }
                    let p = kron(&words[j0].matrix, &words[j1].matrix);
                    let mut tr = ZERO;
                    for r in 0..4 {
                        for c in 0..4 {
                            tr += nm[(r, c)] * p[(c, r)];
                        }
                    }
                    if tr.norm() >= 4.0 * (1.0 - 1e-12) {
                        best = Some((cost, [i0, i1, j0, j1]));
                    }
                }
            }
        }
    }
    let (_, [i0, i1, j0, j1]) = best.ok_or(TranspileError::SearchFailed)?;
    Ok(EcrTemplate {
        pre: [words[i0].clone(), words[i1].clone()],
        post: [words[j0].clone(), words[j1].clone()],
    })
}

/// The cached CNOT-to-ECR correction template.
pub fn ecr_template() -> Result<&'static EcrTemplate, TranspileError> {
    static TEMPLATE: OnceLock<Result<EcrTemplate, TranspileError>> = OnceLock::new();
    TEMPLATE.get_or_init(search).as_ref().map_err(Clone::clone)
}

/// A circuit with exactly one `ecr` equal to `cx control target` up to phase.
pub fn cnot_to_ecr(control: usize, target: usize) -> Result<Circuit, TranspileError> {
    let tpl = ecr_template()?;
    let mut c = Circuit::new(control.max(target) + 1)?;
    let wires = [control, target];
    let push_word = |c: &mut Circuit, word: &Word, q: usize| -> Result<(), TranspileError> {
        for s in &word.steps {
            let params: Vec<f64> = s.param.into_iter().collect();
            c.push(s.gate, &[q], &params)?;
        }
        Ok(())
    };
    for (w, &q) in tpl.pre.iter().zip(&wires) {
        push_word(&mut c, w, q)?;
    }
    c.push("ecr", &[control, target], &[])?;
    for (w, &q) in tpl.post.iter().zip(&wires) {
        push_word(&mut c, w, q)?;
    }
    Ok(c)
}
