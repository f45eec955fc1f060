use super::catalog::{catalog, h_conjugate, verify, Target};
use super::rewrite::{rewrite_to_basis, BasisSpec};
use super::TranspileError;
use crate::circuit::{
    depth, gate_counts, two_qubit_count, validate_connectivity, Circuit, CouplingMap,
};

const PERMUTATIONS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

const CONTROL_SWAPS: [[usize; 3]; 2] = [[0, 1, 2], [1, 0, 2]];

/// Result of `synthesize_toffoli_ecr`.
#[derive(Debug, Clone)]
pub struct Synthesis {
    pub circuit: Circuit,
    /// Golden file the decomposition came from.
    pub source: &'static str,
    /// Qubit relabeling applied to the source before lowering.
    pub relabeling: [usize; 3],
    pub ecr_count: usize,
}

/// Two-qubit count, depth, source file, permutation index.
type RankKey = (usize, usize, &'static str, usize);

/// Lowers the best catalog Toffoli that fits `coupling` to the ECR basis.
///
/// Candidates are the CCX entries (controls may be swapped) and the CCZ
/// entry under any relabeling, conjugated into a CCX on qubit 2. Ties are
/// broken by fewest two-qubit gates, then depth, then file name.
pub fn synthesize_toffoli_ecr(coupling: &CouplingMap) -> Result<Synthesis, TranspileError> {
    if coupling.n_qubits() < 3 {
        return Err(TranspileError::NoFeasibleDecomposition(format!(
            "coupling map has {} qubit(s), need 3",
            coupling.n_qubits()
        )));
    }
    let inner = [(0, 1), (0, 2), (1, 2)]
        .iter()
        .filter(|&&(a, b)| coupling.contains(a, b))
        .count();
    if inner < 2 {
        return Err(TranspileError::NoFeasibleDecomposition(
            "qubits 0, 1, 2 are not connected".into(),
        ));
    }

    let basis = BasisSpec::ecr();
    let mut best: Option<(RankKey, Synthesis)> = None;
    for entry in catalog() {
        if entry.file == "toffoli_ecr9.qc" {
            continue;
        }
        let source = entry.circuit();
        let perms: &[[usize; 3]] = match entry.target {
            Target::Ccx => &CONTROL_SWAPS,
            Target::Ccz => &PERMUTATIONS,
        };
        for (pi, perm) in perms.iter().enumerate() {
            let mut cand = source.remap(perm)?;
            if entry.target == Target::Ccz {
                cand = h_conjugate(&cand, 2)?;
            }
            if !validate_connectivity(&cand, coupling).is_empty() {
                continue;
            }
            let lowered = rewrite_to_basis(&cand, &basis)?;
            let key = (two_qubit_count(&lowered), depth(&lowered), entry.file, pi);
            if best.as_ref().is_some_and(|(k, _)| *k <= key) {
                continue;
            }
            let ecr_count = gate_counts(&lowered).get("ecr").copied().unwrap_or(0);
            best = Some((
                key,
                Synthesis {
                    circuit: lowered,
                    source: entry.file,
                    relabeling: *perm,
                    ecr_count,
                },
            ));
        }
    }
    let (_, synth) = best.ok_or_else(|| {
        TranspileError::NoFeasibleDecomposition("no catalog entry fits the coupling map".into())
    })?;
    verify(&synth.circuit, &Target::Ccx.matrix(), synth.source)?;
    Ok(synth)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_needs_eight() {
        let s = synthesize_toffoli_ecr(&CouplingMap::linear(3).unwrap()).unwrap();
        assert_eq!(s.ecr_count, 8);
        assert!(validate_connectivity(&s.circuit, &CouplingMap::linear(3).unwrap()).is_empty());
    }

    #[test]
    fn full_map_needs_six() {
        let s = synthesize_toffoli_ecr(&CouplingMap::full(3).unwrap()).unwrap();
        assert_eq!(s.ecr_count, 6);
        assert!(s.source.starts_with("toffoli_6cnot"));
    }

    #[test]
    fn star_centered_on_target() {
        // 0 - 2 - 1: only the relabeled CCZ chain fits
        let m = CouplingMap::new(3, [(0, 2), (1, 2)]).unwrap();
        let s = synthesize_toffoli_ecr(&m).unwrap();
        assert_eq!(s.ecr_count, 8);
        assert!(validate_connectivity(&s.circuit, &m).is_empty());
    }

    #[test]
    fn deterministic() {
        let m = CouplingMap::linear(3).unwrap();
        let a = synthesize_toffoli_ecr(&m).unwrap();
        let b = synthesize_toffoli_ecr(&m).unwrap();
        assert_eq!(a.circuit, b.circuit);
        assert_eq!(a.source, b.source);
    }

    #[test]
    fn infeasible_maps() {
        for m in [
            CouplingMap::new(3, [(0, 1)]).unwrap(),
            CouplingMap::linear(2).unwrap(),
            CouplingMap::new(4, [(0, 3), (1, 3), (2, 3)]).unwrap(),
        ] {
            assert!(matches!(
                synthesize_toffoli_ecr(&m),
                Err(TranspileError::NoFeasibleDecomposition(_))
            ));
        }
    }
}
