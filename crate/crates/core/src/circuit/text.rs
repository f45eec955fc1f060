//! The `.qc` plain-text circuit format.
//!
//! ```text
//! # comment
//! qubits 3
//! h 2
//! rz(-pi/4) 1
//! cx 0 1
//! ```
//!
//! Angles are decimal literals or multiples of pi (`pi`, `-pi/2`, `3pi/4`,
//! `3*pi/4`). Emission prints each angle as the shorter of its 12-significant
//! digit decimal form and its `k·pi/d` form (when within 1e-12 of one, d ≤ 8).

use std::f64::consts::PI;
use std::fmt::Write;

use thiserror::Error;

use super::{Circuit, CircuitError};
use crate::gates::GateError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("line {line}: syntax error: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown gate `{name}`")]
    UnknownGate { line: usize, name: String },
    #[error("line {line}: qubit {qubit} out of range for {n_qubits} qubit(s)")]
    QubitOutOfRange {
        line: usize,
        qubit: usize,
        n_qubits: usize,
    },
    #[error("line {line}: qubit {qubit} repeated")]
    DuplicateQubit { line: usize, qubit: usize },
}

impl ParseError {
    pub fn line(&self) -> usize {
        match self {
            ParseError::Syntax { line, .. }
            | ParseError::UnknownGate { line, .. }
            | ParseError::QubitOutOfRange { line, .. }
            | ParseError::DuplicateQubit { line, .. } => *line,
        }
    }
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        message: message.into(),
    }
}

/// Parses an angle literal; `None` if it is not one.
pub fn parse_angle(text: &str) -> Option<f64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let Some(pos) = s.find("pi") else {
        return s.parse::<f64>().ok().filter(|x| x.is_finite());
    };
    let (head, tail) = (&s[..pos], &s[pos + 2..]);
    let head = head.strip_suffix('*').unwrap_or(head);
    let coef = match head {
        "" | "+" => 1.0,
        "-" => -1.0,
        h => h.parse::<f64>().ok().filter(|x| x.is_finite())?,
    };
    let den = match tail {
        "" => 1.0,
        t => t
            .strip_prefix('/')?
            .parse::<f64>()
            .ok()
            .filter(|d| d.is_finite() && *d != 0.0)?,
    };
    Some(coef * PI / den)
}

fn decimal_12(theta: f64) -> String {
    let rounded: f64 = format!("{theta:.11e}").parse().expect("formatted float");
    if rounded == 0.0 {
        "0".to_string()
    } else {
        format!("{rounded}")
    }
}

fn pi_fraction(theta: f64) -> Option<String> {
    for den in 1..=8i64 {
        let k = (theta * den as f64 / PI).round();
        if (theta - k * PI / den as f64).abs() <= 1e-12 {
            let k = k as i64;
            let num = match k {
                0 => return Some("0".to_string()),
                1 => "pi".to_string(),
                -1 => "-pi".to_string(),
                k => format!("{k}pi"),
            };
            return Some(if den == 1 {
                num
            } else {
                format!("{num}/{den}")
            });
        }
    }
    None
}

/// Canonical text for an angle.
pub fn format_angle(theta: f64) -> String {
    let dec = decimal_12(theta);
    match pi_fraction(theta) {
        Some(p) if p.len() <= dec.len() => p,
        _ => dec,
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

pub fn parse(text: &str) -> Result<Circuit, ParseError> {
    let mut circuit: Option<Circuit> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some(c) = circuit.as_mut() else {
            let mut tokens = content.split_whitespace();
            if tokens.next() != Some("qubits") {
                return Err(syntax(line, "expected `qubits N` header"));
            }
            let n = tokens
                .next()
                .and_then(|t| t.parse::<usize>().ok())
                .ok_or_else(|| syntax(line, "expected qubit count after `qubits`"))?;
            if tokens.next().is_some() {
                return Err(syntax(line, "trailing tokens after qubit count"));
            }
            circuit = Some(Circuit::new(n).map_err(|e| syntax(line, e.to_string()))?);
            continue;
        };

        let name_end = content
            .find(|ch: char| !is_ident_char(ch))
            .unwrap_or(content.len());
        let name = &content[..name_end];
        if name.is_empty() {
            return Err(syntax(line, "expected gate name"));
        }
        let mut rest = content[name_end..].trim_start();
        let mut params = Vec::new();
        if let Some(after) = rest.strip_prefix('(') {
            let close = after
                .find(')')
                .ok_or_else(|| syntax(line, "unclosed parameter list"))?;
            for p in after[..close].split(',') {
                let value = parse_angle(p)
                    .ok_or_else(|| syntax(line, format!("bad angle `{}`", p.trim())))?;
                params.push(value);
            }
            rest = &after[close + 1..];
        }
        let qubits = rest
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| syntax(line, format!("bad qubit index `{t}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        c.push(name, &qubits, &params).map_err(|e| match e {
            CircuitError::Gate(GateError::UnknownGate(name)) => {
                ParseError::UnknownGate { line, name }
            }
            CircuitError::QubitOutOfRange { qubit, n_qubits } => ParseError::QubitOutOfRange {
                line,
                qubit,
                n_qubits,
            },
            CircuitError::DuplicateQubit(qubit) => ParseError::DuplicateQubit { line, qubit },
            other => syntax(line, other.to_string()),
        })?;
    }
    circuit.ok_or_else(|| syntax(text.lines().count().max(1), "missing `qubits N` header"))
}

pub fn emit(c: &Circuit) -> String {
    let mut out = format!("qubits {}\n", c.n_qubits());
    for inst in c.instructions() {
        out.push_str(inst.name());
        if !inst.params.is_empty() {
            let ps: Vec<String> = inst.params.iter().map(|&p| format_angle(p)).collect();
            let _ = write!(out, "({})", ps.join(","));
        }
        for q in &inst.qubits {
            let _ = write!(out, " {q}");
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::unitary_of;
    use crate::gates::registry;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn minimal() {
        let c = parse("qubits 1\nh 0").unwrap();
        assert_eq!(c.n_qubits(), 1);
        assert_eq!(c.len(), 1);
        assert_eq!(c.instructions()[0].name(), "h");
        assert_eq!(c.instructions()[0].qubits, vec![0]);
    }

    #[test]
    fn comments_whitespace_and_angles() {
        let text =
            "# header comment\n\n  qubits   2  # two\nrz ( pi/4 ) 0\nrz(-pi/2) 1\nrz(3pi/4) 0\n\
                    rz(3*pi/4) 0\nrz(0.5) 1\nrz(-1e-3) 1\n   ecr   0    1   # done\n";
        let c = parse(text).unwrap();
        let ps: Vec<f64> = c
            .instructions()
            .iter()
            .flat_map(|i| i.params.clone())
            .collect();
        let want = [
            FRAC_PI_4,
            -PI / 2.0,
            3.0 * PI / 4.0,
            3.0 * PI / 4.0,
            0.5,
            -1e-3,
        ];
        for (a, b) in ps.iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }
        assert_eq!(c.len(), 7);
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert_eq!(
            parse("qubits 2\nh 0\nfoo 1").unwrap_err(),
            ParseError::UnknownGate {
                line: 3,
                name: "foo".into()
            }
        );
        assert_eq!(
            parse("qubits 2\ncx 0 2").unwrap_err(),
            ParseError::QubitOutOfRange {
                line: 2,
                qubit: 2,
                n_qubits: 2
            }
        );
        assert_eq!(
            parse("qubits 2\ncx 1 1").unwrap_err(),
            ParseError::DuplicateQubit { line: 2, qubit: 1 }
        );
        for bad in [
            "h 0",
            "qubits",
            "qubits x",
            "qubits 2 3",
            "qubits 1\nrz(pi/4 0",
            "qubits 1\nrz(abc) 0",
            "qubits 1\nh a",
            "qubits 1\nrz 0",
            "qubits 1\n(pi) 0",
            "",
            "qubits 0",
        ] {
            assert!(
                matches!(parse(bad), Err(ParseError::Syntax { .. })),
                "{bad:?}"
            );
        }
        assert_eq!(parse("qubits 1\n\nh 0\nrz 0").unwrap_err().line(), 4);
    }

    #[test]
    fn ccx_line_is_toffoli() {
        let c = parse("qubits 3\nccx 0 1 2").unwrap();
        let u = unitary_of(&c).unwrap();
        assert!(u.max_abs_diff(&crate::gates::matrix_of("ccx", &[]).unwrap()) < 1e-15);
    }

    #[test]
    fn angle_formatting() {
        assert_eq!(format_angle(0.0), "0");
        assert_eq!(format_angle(-0.0), "0");
        assert_eq!(format_angle(PI), "pi");
        assert_eq!(format_angle(-PI / 2.0), "-pi/2");
        assert_eq!(format_angle(3.0 * PI / 4.0), "3pi/4");
        assert_eq!(format_angle(-7.0 * PI / 8.0), "-7pi/8");
        assert_eq!(format_angle(2.0 * PI), "2pi");
        assert_eq!(format_angle(PI / 3.0 + 1e-13), "pi/3");
        assert_eq!(format_angle(0.5), "0.5");
        assert_eq!(format_angle(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_angle(PI / 9.0), "0.349065850399");
        assert_eq!(format_angle(1e-20), "0");
        assert_eq!(format_angle(1e-5), "0.00001");
    }

    #[test]
    fn empty_circuit_emits_header_only() {
        assert_eq!(emit(&Circuit::new(4).unwrap()), "qubits 4\n");
    }

    fn arb_circuit() -> impl Strategy<Value = Circuit> {
        (1usize..=5).prop_flat_map(|n| {
            let gates: Vec<&'static str> = registry()
                .iter()
                .filter(|g| g.arity <= n)
                .map(|g| g.name)
                .collect();
            let inst = (
                prop::sample::select(gates),
                Just((0..n).collect::<Vec<usize>>()).prop_shuffle(),
                prop_oneof![
                    (-20.0f64..20.0),
                    (-16i32..=16, 1i32..=8).prop_map(|(k, d)| k as f64 * PI / d as f64)
                ],
            );
            prop::collection::vec(inst, 0..20).prop_map(move |items| {
                let mut c = Circuit::new(n).unwrap();
                for (name, qs, angle) in items {
                    let g = crate::gates::lookup(name).unwrap();
                    let params = vec![angle; g.param_count];
                    c.push(name, &qs[..g.arity], &params).unwrap();
                }
                c
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn emit_parse_round_trip(c in arb_circuit()) {
            let text = emit(&c);
            let back = parse(&text).unwrap();
            prop_assert!(back.approx_eq(&c, 1e-11), "{text}");
            prop_assert_eq!(emit(&back), text);
        }
    }
}
