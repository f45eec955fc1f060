//! Golden Toffoli/CCZ decompositions shipped under `circuits/`.

use std::sync::OnceLock;

use super::TranspileError;
use crate::circuit::{embed, gate_counts, parse, unitary_of, Circuit};
use crate::gates::fixed;
use crate::linalg::{phase_insensitive_overlap, ComplexMatrix};

pub const VERIFY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    /// Controls 0 and 1, target 2.
    Ccx,
    Ccz,
}

impl Target {
    pub fn matrix(self) -> ComplexMatrix {
        match self {
            Target::Ccx => fixed("ccx"),
            Target::Ccz => fixed("ccz"),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Target::Ccx => "ccx",
            Target::Ccz => "ccz",
        }
    }
}

#[derive(Debug)]
pub struct CatalogEntry {
    /// Command-line name, e.g. `toffoli-linear`.
    pub name: &'static str,
    /// File name under `circuits/`.
    pub file: &'static str,
    pub target: Target,
    pub text: &'static str,
}

impl CatalogEntry {
    /// The parsed circuit; parsing happens once per process.
    pub fn circuit(&self) -> Circuit {
        let index = CATALOG
            .iter()
            .position(|e| std::ptr::eq(e, self))
            .expect("entry from the static catalog");
        parsed()[index].clone()
    }
}

static CATALOG: [CatalogEntry; 5] = [
    CatalogEntry {
        name: "ccz-linear8",
        file: "ccz_linear8.qc",
        target: Target::Ccz,
        text: include_str!("../../../../circuits/ccz_linear8.qc"),
    },
    CatalogEntry {
        name: "toffoli-6cnot-ibm",
        file: "toffoli_6cnot_ibm.qc",
        target: Target::Ccx,
        text: include_str!("../../../../circuits/toffoli_6cnot_ibm.qc"),
    },
    CatalogEntry {
        name: "toffoli-6cnot-nc",
        file: "toffoli_6cnot_nc.qc",
        target: Target::Ccx,
        text: include_str!("../../../../circuits/toffoli_6cnot_nc.qc"),
    },
    CatalogEntry {
        name: "toffoli-ecr9",
        file: "toffoli_ecr9.qc",
        target: Target::Ccx,
        text: include_str!("../../../../circuits/toffoli_ecr9.qc"),
    },
    CatalogEntry {
        name: "toffoli-linear",
        file: "toffoli_linear.qc",
        target: Target::Ccx,
        text: include_str!("../../../../circuits/toffoli_linear.qc"),
    },
];

fn parsed() -> &'static [Circuit] {
    static PARSED: OnceLock<Vec<Circuit>> = OnceLock::new();
    PARSED.get_or_init(|| {
        CATALOG
            .iter()
            .map(|e| parse(e.text).unwrap_or_else(|err| panic!("{}: {err}", e.file)))
            .collect()
    })
}

/// All entries, ordered by file name.
pub fn catalog() -> &'static [CatalogEntry] {
    &CATALOG
}

/// Looks up an entry by its command-line name or file name.
pub fn catalog_entry(name: &str) -> Result<&'static CatalogEntry, TranspileError> {
    CATALOG
        .iter()
        .find(|e| e.name == name || e.file == name)
        .ok_or_else(|| TranspileError::UnknownCatalogEntry(name.to_string()))
}

fn by_file(file: &str) -> Circuit {
    catalog_entry(file).expect("static catalog").circuit()
}

pub fn toffoli_linear() -> Circuit {
    by_file("toffoli_linear.qc")
}

pub fn toffoli_6cnot_nc() -> Circuit {
    by_file("toffoli_6cnot_nc.qc")
}

pub fn toffoli_6cnot_ibm() -> Circuit {
    by_file("toffoli_6cnot_ibm.qc")
}

pub fn ccz_linear8() -> Circuit {
    by_file("ccz_linear8.qc")
}

/// The nine-ECR Toffoli, checked on every call.
pub fn toffoli_ecr9() -> Result<Circuit, TranspileError> {
    let c = by_file("toffoli_ecr9.qc");
    let ecr = gate_counts(&c).get("ecr").copied().unwrap_or(0);
    if ecr != 9 {
        return Err(TranspileError::VerificationFailed {
            what: format!("toffoli_ecr9.qc has {ecr} ecr gates, expected 9"),
            overlap: f64::NAN,
        });
    }
    if let Some(bad) = c
        .instructions()
        .iter()
        .find(|i| !["rz", "sx", "x", "ecr"].contains(&i.name()))
    {
        return Err(TranspileError::VerificationFailed {
            what: format!("toffoli_ecr9.qc uses non-native gate {}", bad.name()),
            overlap: f64::NAN,
        });
    }
    verify(&c, &Target::Ccx.matrix(), "toffoli_ecr9.qc")?;
    Ok(c)
}

/// Fails unless `unitary_of(c) ≡ want` up to global phase at `VERIFY_TOL`.
pub fn verify(c: &Circuit, want: &ComplexMatrix, what: &str) -> Result<(), TranspileError> {
    let u = unitary_of(c)?;
    let overlap = phase_insensitive_overlap(&u, want)?;
    if overlap >= 1.0 - VERIFY_TOL {
        Ok(())
    } else {
        Err(TranspileError::VerificationFailed {
            what: format!("{what} does not match the target unitary"),
            overlap,
        })
    }
}

/// `h q ++ c ++ h q`.
pub fn h_conjugate(c: &Circuit, q: usize) -> Result<Circuit, TranspileError> {
    let mut out = Circuit::new(c.n_qubits())?;
    out.push("h", &[q], &[])?;
    let mut out = out.concat(c);
    out.push("h", &[q], &[])?;
    Ok(out)
}

/// Turns a verified 3-qubit CCZ circuit into a CCX on `target` by
/// conjugating that wire with Hadamards.
pub fn ccx_from_ccz(ccz_circuit: &Circuit, target: usize) -> Result<Circuit, TranspileError> {
    if ccz_circuit.n_qubits() != 3 {
        return Err(TranspileError::VerificationFailed {
            what: format!(
                "expected a 3-qubit circuit, got {} qubits",
                ccz_circuit.n_qubits()
            ),
            overlap: f64::NAN,
        });
    }
    verify(ccz_circuit, &Target::Ccz.matrix(), "input circuit (as ccz)")?;
    let out = h_conjugate(ccz_circuit, target)?;
    let mut wires: Vec<usize> = (0..3).filter(|&q| q != target).collect();
    wires.push(target);
    verify(
        &out,
        &embed(&Target::Ccx.matrix(), &wires, 3),
        "conjugated circuit (as ccx)",
    )?;
    Ok(out)
}
