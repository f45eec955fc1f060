//! `crossres` command-line front end.
//!
//! Exit codes: 0 success or PASS, 1 verification FAIL (including coupling
//! violations), 2 usage error, 3 input error (parse or IO).

use std::fmt::Write as _;
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Parser, Subcommand};
use serde_json::json;

use crossres::circuit::{
    depth, emit, gate_counts, parse, two_qubit_count, unitary_of, validate_connectivity, Circuit,
    CouplingMap,
};
use crossres::gates::{lookup, matrix_of};
use crossres::linalg::{makhlin_invariants, phase_insensitive_overlap, ComplexMatrix};
use crossres::pulse::{calibrate_time, gate_error_report, PauliCoeffs};
use crossres::transpile::{
    catalog, catalog_entry, rewrite_to_basis, toffoli_ecr9, BasisSpec, Target,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "crossres",
    version,
    about = "Toffoli/ECR circuit toolkit and echoed cross-resonance model"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a catalog circuit
    Emit {
        /// Catalog name, e.g. toffoli-linear or toffoli-ecr9
        #[arg(long)]
        target: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rewrite a circuit into a native basis
    Transpile {
        /// ecr or cx
        #[arg(long, default_value = "ecr")]
        basis: String,
        /// Built-in coupling map, e.g. linear:3
        #[arg(long)]
        coupling: Option<String>,
        /// JSON coupling map: {"n_qubits": N, "edges": [[a, b], ...]}
        #[arg(long, conflicts_with = "coupling")]
        coupling_file: Option<PathBuf>,
        /// Input circuit, `-` for stdin
        file: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a circuit against ccx, ccz or another circuit, up to global phase
    Verify {
        file: String,
        /// ccx, ccz, or a circuit file
        #[arg(long)]
        against: String,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Depth and gate counts
    Stats {
        /// Input circuit; stdin when omitted or `-`
        file: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Echoed cross-resonance error report
    Pulse {
        /// JSON with l_ix, l_zi, l_iz, l_zz, l_zx
        #[arg(long)]
        coeffs: PathBuf,
        /// Duration of each echo half
        #[arg(long)]
        time: f64,
        /// Also search (0, T_MAX] for the best duration
        #[arg(long, value_name = "T_MAX")]
        calibrate: Option<f64>,
        #[arg(long)]
        json: bool,
    },
    /// Makhlin invariants of a two-qubit circuit or gate
    #[command(group(ArgGroup::new("source").required(true).args(["file", "gate"])))]
    Invariants {
        file: Option<String>,
        #[arg(long)]
        gate: Option<String>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Input(String),
}

type CmdResult = Result<i32, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn input(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

/// Runs with the process's stdio.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdin = std::io::stdin();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(
        argv,
        &mut stdin.lock(),
        &mut stdout.lock(),
        &mut stderr.lock(),
    )
}

/// Runs with explicit streams; `argv[0]` is the program name.
pub fn run_with<I, T>(
    argv: I,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{text}");
                EXIT_OK
            };
        }
    };
    let mut ctx = Ctx {
        stdin,
        stdout,
        stderr,
    };
    match execute(cli.command, &mut ctx) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(
                ctx.stderr,
                "error: {msg}\n\nFor more information, try '--help'."
            );
            EXIT_USAGE
        }
        Err(CliError::Input(msg)) => {
            let _ = writeln!(ctx.stderr, "error: {msg}");
            EXIT_INPUT
        }
    }
}

struct Ctx<'a> {
    stdin: &'a mut dyn Read,
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn read(&mut self, path: &str) -> Result<String, CliError> {
        if path == "-" {
            let mut s = String::new();
            self.stdin
                .read_to_string(&mut s)
                .map_err(|e| input(format!("reading stdin: {e}")))?;
            Ok(s)
        } else {
            fs::read_to_string(path).map_err(|e| input(format!("{path}: {e}")))
        }
    }

    fn circuit(&mut self, path: &str) -> Result<Circuit, CliError> {
        let text = self.read(path)?;
        parse(&text).map_err(|e| input(format!("{path}: {e}")))
    }

    fn write_out(&mut self, out: Option<&Path>, text: &str) -> Result<(), CliError> {
        match out {
            Some(p) => fs::write(p, text).map_err(|e| input(format!("{}: {e}", p.display()))),
            None => self
                .stdout
                .write_all(text.as_bytes())
                .map_err(|e| input(format!("writing output: {e}"))),
        }
    }

    fn print(&mut self, text: &str) -> Result<i32, CliError> {
        self.write_out(None, text)?;
        Ok(EXIT_OK)
    }
}

/// 12 significant digits, trailing zeros trimmed.
pub fn fmt_num(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float");
    if rounded == 0.0 {
        "0".to_string()
    } else {
        format!("{rounded}")
    }
}

fn execute(cmd: Command, ctx: &mut Ctx) -> CmdResult {
    match cmd {
        Command::Emit { target, out } => cmd_emit(ctx, &target, out.as_deref()),
        Command::Transpile {
            basis,
            coupling,
            coupling_file,
            file,
            out,
        } => cmd_transpile(
            ctx,
            &basis,
            coupling.as_deref(),
            coupling_file.as_deref(),
            &file,
            out.as_deref(),
        ),
        Command::Verify { file, against, tol } => cmd_verify(ctx, &file, &against, tol),
        Command::Stats { file, json } => cmd_stats(ctx, file.as_deref().unwrap_or("-"), json),
        Command::Pulse {
            coeffs,
            time,
            calibrate,
            json,
        } => cmd_pulse(ctx, &coeffs, time, calibrate, json),
        Command::Invariants { file, gate, json } => {
            cmd_invariants(ctx, file.as_deref(), gate.as_deref(), json)
        }
    }
}

fn cmd_emit(ctx: &mut Ctx, target: &str, out: Option<&Path>) -> CmdResult {
    let entry = catalog_entry(target).map_err(|_| {
        let names: Vec<&str> = catalog().iter().map(|e| e.name).collect();
        usage(format!(
            "unknown target `{target}`; expected one of: {}",
            names.join(", ")
        ))
    })?;
    let circuit = if entry.name == "toffoli-ecr9" {
        toffoli_ecr9().map_err(|e| input(e.to_string()))?
    } else {
        entry.circuit()
    };
    ctx.write_out(out, &emit(&circuit))?;
    Ok(EXIT_OK)
}

/// `linear:N`.
fn parse_coupling(spec: &str) -> Result<CouplingMap, CliError> {
    let n = spec
        .strip_prefix("linear:")
        .and_then(|n| n.parse::<usize>().ok())
        .ok_or_else(|| usage(format!("bad --coupling `{spec}`; expected linear:N")))?;
    CouplingMap::linear(n).map_err(|e| usage(format!("bad --coupling `{spec}`: {e}")))
}

fn cmd_transpile(
    ctx: &mut Ctx,
    basis: &str,
    coupling: Option<&str>,
    coupling_file: Option<&Path>,
    file: &str,
    out: Option<&Path>,
) -> CmdResult {
    let basis = match basis {
        "ecr" => BasisSpec::ecr(),
        "cx" => BasisSpec::cx(),
        other => {
            return Err(usage(format!(
                "unknown --basis `{other}`; expected ecr or cx"
            )))
        }
    };
    let map = match (coupling, coupling_file) {
        (Some(spec), _) => Some(parse_coupling(spec)?),
        (None, Some(path)) => {
            let text =
                fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
            Some(
                serde_json::from_str::<CouplingMap>(&text)
                    .map_err(|e| input(format!("{}: {e}", path.display())))?,
            )
        }
        (None, None) => None,
    };
    let circuit = ctx.circuit(file)?;
    let lowered = rewrite_to_basis(&circuit, &basis).map_err(|e| input(format!("{file}: {e}")))?;
    if let Some(map) = map {
        let violations = validate_connectivity(&lowered, &map);
        if !violations.is_empty() {
            for v in &violations {
                let _ = writeln!(
                    ctx.stderr,
                    "coupling violation: instruction {} acts on ({}, {})",
                    v.instruction, v.qubits.0, v.qubits.1
                );
            }
            return Ok(EXIT_FAIL);
        }
    }
    ctx.write_out(out, &emit(&lowered))?;
    Ok(EXIT_OK)
}

fn cmd_verify(ctx: &mut Ctx, file: &str, against: &str, tol: f64) -> CmdResult {
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(usage(format!(
            "--tol must be a non-negative number, got {tol}"
        )));
    }
    let circuit = ctx.circuit(file)?;
    let u = unitary_of(&circuit).map_err(|e| input(format!("{file}: {e}")))?;
    let want: ComplexMatrix = match against {
        "ccx" => Target::Ccx.matrix(),
        "ccz" => Target::Ccz.matrix(),
        path => {
            let other = ctx.circuit(path)?;
            unitary_of(&other).map_err(|e| input(format!("{path}: {e}")))?
        }
    };
    if want.dim() != u.dim() {
        return Err(input(format!(
            "{file} acts on {} qubit(s) but `{against}` on {}",
            circuit.n_qubits(),
            want.dim().trailing_zeros()
        )));
    }
    let overlap = phase_insensitive_overlap(&u, &want).expect("same dimension");
    let pass = overlap >= 1.0 - tol;
    let verdict = if pass { "PASS" } else { "FAIL" };
    ctx.print(&format!("{verdict} |tr(U†V)|/dim = {}\n", fmt_num(overlap)))?;
    Ok(if pass { EXIT_OK } else { EXIT_FAIL })
}

fn cmd_stats(ctx: &mut Ctx, file: &str, as_json: bool) -> CmdResult {
    let c = ctx.circuit(file)?;
    let counts = gate_counts(&c);
    if as_json {
        let doc = json!({
            "qubits": c.n_qubits(),
            "instructions": c.len(),
            "depth": depth(&c),
            "two_qubit": two_qubit_count(&c),
            "gates": counts,
        });
        return ctx.print(&format!("{doc:#}\n"));
    }
    let mut s = String::new();
    let _ = writeln!(s, "qubits        {}", c.n_qubits());
    let _ = writeln!(s, "instructions  {}", c.len());
    let _ = writeln!(s, "depth         {}", depth(&c));
    let _ = writeln!(s, "two-qubit     {}", two_qubit_count(&c));
    let _ = writeln!(s, "gates");
    let width = counts.keys().map(|k| k.len()).max().unwrap_or(0);
    for (name, n) in &counts {
        let _ = writeln!(s, "  {name:<width$}  {n}");
    }
    ctx.print(&s)
}

fn cmd_pulse(
    ctx: &mut Ctx,
    coeffs: &Path,
    time: f64,
    calibrate: Option<f64>,
    as_json: bool,
) -> CmdResult {
    if !(time.is_finite() && time >= 0.0) {
        return Err(usage(format!(
            "--time must be finite and non-negative, got {time}"
        )));
    }
    if let Some(t_max) = calibrate {
        if !(t_max.is_finite() && t_max > 0.0) {
            return Err(usage(format!("--calibrate must be positive, got {t_max}")));
        }
    }
    let text =
        fs::read_to_string(coeffs).map_err(|e| input(format!("{}: {e}", coeffs.display())))?;
    let c: PauliCoeffs =
        serde_json::from_str(&text).map_err(|e| input(format!("{}: {e}", coeffs.display())))?;
    c.validate().map_err(|e| input(e.to_string()))?;

    let report = gate_error_report(&c, time).map_err(|e| input(e.to_string()))?;
    let cal = match calibrate {
        Some(t_max) => Some(calibrate_time(&c, t_max).map_err(|e| input(e.to_string()))?),
        None => None,
    };
    if as_json {
        let doc = json!({ "coeffs": c, "report": report, "calibration": cal });
        return ctx.print(&format!("{doc:#}\n"));
    }
    let cx = |z: crossres::C64| {
        format!(
            "{} {} {}i",
            fmt_num(z.re),
            if z.im < 0.0 { "-" } else { "+" },
            fmt_num(z.im.abs())
        )
    };
    let e = &report.coeffs;
    let rows: Vec<(&str, String)> = vec![
        ("time", fmt_num(report.time)),
        ("zeta", fmt_num(e.zeta)),
        ("xi", fmt_num(e.xi)),
        ("z_ii", cx(e.z_ii)),
        ("z_iz", cx(e.z_iz)),
        ("z_iy", cx(e.z_iy)),
        ("z_zx", cx(e.z_zx)),
        ("fidelity_zx90", fmt_num(report.fidelity)),
        ("residual_iz", fmt_num(report.residual_iz)),
        ("residual_iy", fmt_num(report.residual_iy)),
    ];
    let mut s = String::from("# echoed cross-resonance (angular units, hbar = 1)\n");
    for (k, v) in rows {
        let _ = writeln!(s, "{k:<14} {v}");
    }
    if let Some(cal) = cal {
        let _ = writeln!(s, "{:<14} {}", "t_star", fmt_num(cal.t_star));
        let _ = writeln!(s, "{:<14} {}", "t_star_fid", fmt_num(cal.fidelity));
    }
    ctx.print(&s)
}

fn cmd_invariants(
    ctx: &mut Ctx,
    file: Option<&str>,
    gate: Option<&str>,
    as_json: bool,
) -> CmdResult {
    let (label, u) = match (file, gate) {
        (_, Some(name)) => {
            let g = lookup(name).map_err(|e| usage(e.to_string()))?;
            if g.arity != 2 || g.param_count != 0 {
                return Err(usage(format!(
                    "--gate needs a fixed two-qubit gate, `{name}` is not"
                )));
            }
            (
                name.to_string(),
                matrix_of(name, &[]).expect("checked gate"),
            )
        }
        (Some(path), None) => {
            let c = ctx.circuit(path)?;
            if c.n_qubits() != 2 {
                return Err(input(format!(
                    "{path}: need a 2-qubit circuit, got {}",
                    c.n_qubits()
                )));
            }
            (
                path.to_string(),
                unitary_of(&c).map_err(|e| input(e.to_string()))?,
            )
        }
        (None, None) => unreachable!("clap requires one source"),
    };
    let inv = makhlin_invariants(&u).map_err(|e| input(e.to_string()))?;
    if as_json {
        let doc = json!({ "source": label, "g1": [inv.g1.re, inv.g1.im], "g2": inv.g2 });
        return ctx.print(&format!("{doc:#}\n"));
    }
    ctx.print(&format!(
        "source  {label}\ng1      {} {} {}i\ng2      {}\n",
        fmt_num(inv.g1.re),
        if inv.g1.im < 0.0 { "-" } else { "+" },
        fmt_num(inv.g1.im.abs()),
        fmt_num(inv.g2)
    ))
}
