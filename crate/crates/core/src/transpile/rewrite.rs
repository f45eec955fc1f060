use std::collections::BTreeSet;

use super::ecr::{ecr_template, EcrTemplate};
use super::euler::{euler_decompose_1q, wrap_angle};
use super::TranspileError;
use crate::circuit::Circuit;
use crate::gates::{fixed, lookup};
use crate::linalg::ComplexMatrix;

const DROP_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwoQubitBasis {
    Ecr,
    Cx,
}

impl TwoQubitBasis {
    pub fn gate_name(self) -> &'static str {
        match self {
            TwoQubitBasis::Ecr => "ecr",
            TwoQubitBasis::Cx => "cx",
        }
    }
}

/// Target gate set for `rewrite_to_basis`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisSpec {
    two_qubit_gate: TwoQubitBasis,
    one_qubit_gates: BTreeSet<&'static str>,
}

impl BasisSpec {
    pub fn new<'a>(
        two_qubit_gate: &str,
        one_qubit_gates: impl IntoIterator<Item = &'a str>,
    ) -> Result<Self, TranspileError> {
        let two = match two_qubit_gate {
            "ecr" => TwoQubitBasis::Ecr,
            "cx" => TwoQubitBasis::Cx,
            other => {
                lookup(other)?;
                return Err(TranspileError::UnsupportedBasis(format!(
                    "two-qubit gate must be ecr or cx, got {other}"
                )));
            }
        };
        let mut ones = BTreeSet::new();
        for name in one_qubit_gates {
            let g = lookup(name)?;
            if g.arity != 1 {
                return Err(TranspileError::UnsupportedBasis(format!(
                    "{name} is not a one-qubit gate"
                )));
            }
            ones.insert(g.name);
        }
        for needed in ["rz", "sx"] {
            if !ones.contains(needed) {
                return Err(TranspileError::UnsupportedBasis(format!(
                    "one-qubit set must contain {needed}"
                )));
            }
        }
        Ok(Self {
            two_qubit_gate: two,
            one_qubit_gates: ones,
        })
    }

    /// `{ecr, rz, sx}`.
    pub fn ecr() -> Self {
        Self::new("ecr", ["rz", "sx"]).expect("valid basis")
    }

    /// `{cx, rz, sx}`.
    pub fn cx() -> Self {
        Self::new("cx", ["rz", "sx"]).expect("valid basis")
    }

    pub fn two_qubit_gate(&self) -> TwoQubitBasis {
        self.two_qubit_gate
    }

    pub fn one_qubit_gates(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.one_qubit_gates.iter().copied()
    }
}

enum Step {
    One(usize, ComplexMatrix),
    Two(&'static str, usize, usize),
}

fn template_steps(tpl: &EcrTemplate, a: usize, b: usize, inverse: bool) -> Vec<Step> {
    let wires = [a, b];
    let mut out = Vec::new();
    let fix = |m: &ComplexMatrix| if inverse { m.dagger() } else { m.clone() };
    for (w, &q) in tpl.pre.iter().zip(&wires) {
        out.push(Step::One(q, fix(&w.matrix)));
    }
    out.push(Step::Two(if inverse { "cx" } else { "ecr" }, a, b));
    for (w, &q) in tpl.post.iter().zip(&wires) {
        out.push(Step::One(q, fix(&w.matrix)));
    }
    out
}

/// Expresses one two-qubit instruction in the target entangler.
fn lower(
    name: &str,
    a: usize,
    b: usize,
    basis: TwoQubitBasis,
) -> Result<Vec<Step>, TranspileError> {
    Ok(match (name, basis) {
        ("cx", TwoQubitBasis::Cx) => vec![Step::Two("cx", a, b)],
        ("cx", TwoQubitBasis::Ecr) => template_steps(ecr_template()?, a, b, false),
        ("ecr", TwoQubitBasis::Ecr) => vec![Step::Two("ecr", a, b)],
        // ECR = (A0⊗A1)†·CX·(B0⊗B1)†
        ("ecr", TwoQubitBasis::Cx) => template_steps(ecr_template()?, a, b, true),
        ("ecr_rev", _) => lower("ecr", b, a, basis)?,
        ("cz", _) => {
            let mut v = vec![Step::One(b, fixed("h"))];
            v.extend(lower("cx", a, b, basis)?);
            v.push(Step::One(b, fixed("h")));
            v
        }
        (other, _) => return Err(TranspileError::UnsupportedGate(other.to_string())),
    })
}

/// Appends the shortest `{rz, sx}` form of `u` on wire `q`.
fn emit_1q(out: &mut Circuit, q: usize, u: &ComplexMatrix) -> Result<(), TranspileError> {
    let off_diag = u[(0, 1)].norm().max(u[(1, 0)].norm());
    if off_diag <= DROP_TOL {
        let theta = wrap_angle(u[(1, 1)].arg() - u[(0, 0)].arg());
        if theta.abs() > DROP_TOL {
            out.push("rz", &[q], &[theta])?;
        }
        return Ok(());
    }
    let e = euler_decompose_1q(u)?;
    for (gate, angle) in [
        ("rz", Some(e.gamma)),
        ("sx", None),
        ("rz", Some(e.beta)),
        ("sx", None),
        ("rz", Some(e.alpha)),
    ] {
        match angle {
            Some(a) if a.abs() > DROP_TOL => out.push(gate, &[q], &[a])?,
            Some(_) => {}
            None => out.push(gate, &[q], &[])?,
        }
    }
    Ok(())
}

/// Lowers every gate to `basis`, merging maximal single-qubit runs per wire
/// into at most five `rz`/`sx` gates.
pub fn rewrite_to_basis(c: &Circuit, basis: &BasisSpec) -> Result<Circuit, TranspileError> {
    let n = c.n_qubits();
    let mut out = Circuit::new(n)?;
    let mut pending: Vec<Option<ComplexMatrix>> = vec![None; n];

    fn absorb(pending: &mut [Option<ComplexMatrix>], q: usize, m: ComplexMatrix) {
        pending[q] = Some(match pending[q].take() {
            Some(acc) => &m * &acc,
            None => m,
        });
    }
    fn flush(
        out: &mut Circuit,
        pending: &mut [Option<ComplexMatrix>],
        q: usize,
    ) -> Result<(), TranspileError> {
        if let Some(u) = pending[q].take() {
            emit_1q(out, q, &u)?;
        }
        Ok(())
    }

    for inst in c.instructions() {
        match *inst.qubits.as_slice() {
            [q] => {
                if inst.name() != "id" {
                    absorb(&mut pending, q, inst.matrix());
                }
            }
            [a, b] => {
                for step in lower(inst.name(), a, b, basis.two_qubit_gate)? {
                    match step {
                        Step::One(q, m) => absorb(&mut pending, q, m),
                        Step::Two(name, x, y) => {
                            flush(&mut out, &mut pending, x)?;
                            flush(&mut out, &mut pending, y)?;
                            out.push(name, &[x, y], &[])?;
                        }
                    }
                }
            }
            _ => return Err(TranspileError::UnsupportedGate(inst.name().to_string())),
        }
    }
    for q in 0..n {
        flush(&mut out, &mut pending, q)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{gate_counts, two_qubit_count, unitary_of};
    use crate::linalg::equiv_up_to_global_phase;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn assert_equiv(a: &Circuit, b: &Circuit, tol: f64) {
        let ua = unitary_of(a).unwrap();
        let ub = unitary_of(b).unwrap();
        assert!(equiv_up_to_global_phase(&ua, &ub, tol).unwrap());
    }

    fn random_circuit(rng: &mut StdRng, n: usize, len: usize) -> Circuit {
        let mut c = Circuit::new(n).unwrap();
        for _ in 0..len {
            let gate = ["h", "t", "tdg", "s", "cx"][rng.random_range(0..5)];
            let a = rng.random_range(0..n);
            if gate == "cx" {
                let b = (a + rng.random_range(1..n)) % n;
                c.push(gate, &[a, b], &[]).unwrap();
            } else {
                c.push(gate, &[a], &[]).unwrap();
            }
        }
        c
    }

    #[test]
    fn basis_validation() {
        assert!(BasisSpec::new("ecr", ["rz", "sx", "x"]).is_ok());
        assert!(matches!(
            BasisSpec::new("cz", ["rz", "sx"]),
            Err(TranspileError::UnsupportedBasis(_))
        ));
        assert!(matches!(
            BasisSpec::new("nope", ["rz", "sx"]),
            Err(TranspileError::Gate(_))
        ));
        assert!(matches!(
            BasisSpec::new("ecr", ["rz"]),
            Err(TranspileError::UnsupportedBasis(_))
        ));
        assert!(matches!(
            BasisSpec::new("ecr", ["rz", "sx", "cx"]),
            Err(TranspileError::UnsupportedBasis(_))
        ));
    }

    #[test]
    fn one_qubit_runs_collapse() {
        let c = Circuit::new(2)
            .unwrap()
            .with("h", &[0], &[])
            .with("t", &[0], &[])
            .with("s", &[0], &[])
            .with("h", &[0], &[])
            .with("x", &[0], &[])
            .with("t", &[1], &[])
            .with("tdg", &[1], &[]);
        let r = rewrite_to_basis(&c, &BasisSpec::ecr()).unwrap();
        for q in 0..2 {
            let on_q = r.instructions().iter().filter(|i| i.qubits == [q]).count();
            assert!(on_q <= 5);
        }
        assert!(r.instructions().iter().all(|i| i.qubits == [0]));
        assert_equiv(&c, &r, 1e-12);
    }

    #[test]
    fn diagonal_runs_become_one_rz() {
        let c = Circuit::new(1)
            .unwrap()
            .with("t", &[0], &[])
            .with("s", &[0], &[]);
        let r = rewrite_to_basis(&c, &BasisSpec::ecr()).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r.instructions()[0].name(), "rz");
        assert!((r.instructions()[0].params[0] - 3.0 * std::f64::consts::PI / 4.0).abs() < 1e-12);
    }

    #[test]
    fn three_qubit_gates_rejected() {
        let c = Circuit::new(3).unwrap().with("ccx", &[0, 1, 2], &[]);
        assert_eq!(
            rewrite_to_basis(&c, &BasisSpec::ecr()),
            Err(TranspileError::UnsupportedGate("ccx".into()))
        );
    }

    #[test]
    fn every_two_qubit_gate_in_both_bases() {
        for gate in ["cx", "cz", "ecr", "ecr_rev"] {
            for (a, b) in [(0, 1), (1, 0)] {
                let c = Circuit::new(2).unwrap().with(gate, &[a, b], &[]);
                for basis in [BasisSpec::ecr(), BasisSpec::cx()] {
                    let r = rewrite_to_basis(&c, &basis).unwrap();
                    assert_equiv(&c, &r, 1e-12);
                    assert_eq!(two_qubit_count(&r), 1);
                    let allowed = [basis.two_qubit_gate().gate_name(), "rz", "sx"];
                    assert!(r.instructions().iter().all(|i| allowed.contains(&i.name())));
                }
            }
        }
    }

    #[test]
    fn random_circuits_preserved() {
        let mut rng = StdRng::seed_from_u64(21);
        for trial in 0..100 {
            let n = 2 + trial % 2;
            let c = random_circuit(&mut rng, n, 25);
            let r = rewrite_to_basis(&c, &BasisSpec::ecr()).unwrap();
            assert_equiv(&c, &r, 1e-9);
            let cx = gate_counts(&c).get("cx").copied().unwrap_or(0);
            assert_eq!(gate_counts(&r).get("ecr").copied().unwrap_or(0), cx);
            assert!(two_qubit_count(&r) <= two_qubit_count(&c));
            assert!(r
                .instructions()
                .iter()
                .all(|i| ["rz", "sx", "ecr"].contains(&i.name())));
        }
    }
}
