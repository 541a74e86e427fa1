//! The `lueq` command line.
//!
//! Exit codes: 0 success (or Equivalent), 1 usage, IO or range error,
//! 2 invalid state, 3 NotEquivalent, 4 Undecided.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::error::Error;
use crate::io::{mat2_json, read_state, render_unitaries, report_json, write_text, FileError, StateFile};
use crate::linalg::{kron_all, Complex64, Mat2};
use crate::oracle::{random_local_unitary, random_pure_amplitudes, random_state};
use crate::pauli::to_pauli_coefficients;
use crate::protocol::{apply_local_unitary, decide_lu_equivalence, DecisionConfig, OracleMode, Verdict};
use crate::reduction::{marginal, partial_trace};
use crate::reference::reference_form;
use crate::spectral::diagonalize_qubit;
use crate::state::MultiQubitState;
use crate::tolerance::Tolerances;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INVALID_STATE: i32 = 2;
pub const EXIT_NOT_EQUIVALENT: i32 = 3;
pub const EXIT_UNDECIDED: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "lueq", version, about = "Local-unitary equivalence of multi-qubit states")]
pub struct Cli {
    /// Relative residual accepted by the final verification.
    #[arg(long, global = true, env = "LUEQ_TOL_VERIFY")]
    pub tol_verify: Option<f64>,
    /// Magnitude below which a correlation coefficient counts as null.
    #[arg(long, global = true)]
    pub tol_coef: Option<f64>,
    /// Brute-force fallback; auto runs it for at most three qubits.
    #[arg(long, global = true, value_enum, default_value_t = OracleArg::Auto)]
    pub oracle: OracleArg,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Machine-readable output.
    #[arg(long, global = true)]
    pub json: bool,
    /// Print the pipeline trace.
    #[arg(long, global = true)]
    pub trace: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleArg {
    On,
    Off,
    Auto,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether two state files are LU-equivalent.
    Decide { a: PathBuf, b: PathBuf },
    /// Partial trace onto the listed qubits (1-based, increasing).
    Reduce {
        file: PathBuf,
        #[arg(long, required = true, value_delimiter = ',')]
        keep: Vec<usize>,
    },
    /// Reference form and the diagonalizers of every marginal.
    Refform { file: PathBuf },
    /// Random state; with --apply-lu also a locally conjugated partner.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        rank: usize,
        /// Seed for the local unitaries of the partner.
        #[arg(long)]
        apply_lu: Option<u64>,
        /// Output file. The partner and unitaries go next to it with
        /// `.partner.json` and `.unitaries.json` suffixes.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Invalid(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidState(_) | Error::NotAState(_) | Error::NonHermitianInput { .. } => Self::Invalid(e.to_string()),
            _ => Self::Usage(e.to_string()),
        }
    }
}

impl From<FileError> for Failure {
    fn from(e: FileError) -> Self {
        match e {
            FileError::State(e) => e.into(),
            other => Self::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self::Usage(e.to_string())
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Invalid(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INVALID_STATE
        }
    }
}

impl Cli {
    fn config(&self) -> DecisionConfig {
        let mut tolerances = Tolerances::default();
        if let Some(v) = self.tol_verify {
            tolerances.verify = v;
        }
        if let Some(c) = self.tol_coef {
            tolerances.coef = c;
        }
        DecisionConfig {
            tolerances,
            oracle: match self.oracle {
                OracleArg::On => OracleMode::On,
                OracleArg::Off => OracleMode::Off,
                OracleArg::Auto => OracleMode::Auto,
            },
            seed: self.seed,
            ..DecisionConfig::default()
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    let config = cli.config();
    let tol = &config.tolerances;
    match &cli.command {
        Command::Decide { a, b } => decide(cli, &config, a, b, out),
        Command::Reduce { file, keep } => {
            let state = read_state(file, tol)?;
            let zero_based = keep
                .iter()
                .map(|&k| {
                    k.checked_sub(1)
                        .filter(|&q| q < state.n())
                        .ok_or_else(|| Failure::Usage(format!("qubit {k} out of range 1..={}", state.n())))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let reduced = partial_trace(&state, &zero_based)?;
            out.write_all(StateFile::density(&reduced.state).render().as_bytes())?;
            Ok(EXIT_OK)
        }
        Command::Refform { file } => refform(cli, &read_state(file, tol)?, tol, out),
        Command::Gen { n, rank, apply_lu, out: path } => gen(cli.seed, *n, *rank, *apply_lu, path.as_deref(), out),
    }
}

fn entry(z: Complex64) -> String {
    format!("{:+.12}{:+.12}i", z.re, z.im)
}

fn mat2_text(u: &Mat2) -> String {
    format!(
        "[[{}, {}], [{}, {}]]",
        entry(u[(0, 0)]),
        entry(u[(0, 1)]),
        entry(u[(1, 0)]),
        entry(u[(1, 1)])
    )
}

fn decide(cli: &Cli, config: &DecisionConfig, a: &Path, b: &Path, out: &mut dyn Write) -> Result<i32, Failure> {
    let rho = read_state(a, &config.tolerances)?;
    let rho_prime = read_state(b, &config.tolerances)?;
    let (verdict, trace) = decide_lu_equivalence(&rho, &rho_prime, config)?;
    if cli.json {
        let text = serde_json::to_string_pretty(&report_json(&verdict, &trace)).expect("report serializes");
        writeln!(out, "{text}")?;
    } else {
        match &verdict {
            Verdict::Equivalent { unitaries, residual } => {
                writeln!(out, "verdict: Equivalent")?;
                writeln!(out, "residual: {residual:.3e}")?;
                for (q, u) in unitaries.iter().enumerate() {
                    writeln!(out, "U{} = {}", q + 1, mat2_text(u))?;
                }
            }
            Verdict::NotEquivalent(w) => {
                writeln!(out, "verdict: NotEquivalent")?;
                writeln!(out, "witness: {w}")?;
            }
            Verdict::Undecided(r) => writeln!(out, "verdict: Undecided ({r})")?,
        }
        if cli.trace {
            for q in &trace.qubits {
                let d = &q.diagonalization;
                write!(out, "qubit {}: lambda = ({:.12}, {:.12})", q.qubit + 1, d.lambda[0], d.lambda[1])?;
                if let Some(c) = q.class {
                    write!(out, ", class {c:?}")?;
                }
                if let Some(note) = &q.note {
                    write!(out, ", solved by {} at order {}", note.method, note.order)?;
                    if let Some(p) = note.partner {
                        write!(out, " with qubit {}", p + 1)?;
                    }
                }
                writeln!(out)?;
            }
            if let Some(o) = &trace.oracle {
                writeln!(out, "oracle: residual {:.3e} from start {}", o.residual, o.start)?;
            }
            for line in &trace.log {
                writeln!(out, "log: {line}")?;
            }
        }
    }
    Ok(match verdict {
        Verdict::Equivalent { .. } => EXIT_OK,
        Verdict::NotEquivalent(_) => EXIT_NOT_EQUIVALENT,
        Verdict::Undecided(_) => EXIT_UNDECIDED,
    })
}

fn refform(cli: &Cli, state: &MultiQubitState, tol: &Tolerances, out: &mut dyn Write) -> Result<i32, Failure> {
    let diagonalizers = (0..state.n())
        .map(|q| diagonalize_qubit(&marginal(state, q), tol).map(|d| d.v))
        .collect::<Result<Vec<_>, _>>()?;
    let reference = reference_form(state, &diagonalizers)?;
    let coefficients = to_pauli_coefficients(&reference, tol)?;
    let nonzero = coefficients.nonzero(tol.coef);
    if cli.json {
        let report = json!({
            "reference": serde_json::from_str::<serde_json::Value>(&StateFile::density(&reference).render())
                .expect("state file is JSON"),
            "diagonalizers": diagonalizers.iter().map(mat2_json).collect::<Vec<_>>(),
            "coefficients": nonzero.iter().map(|(idx, v)| json!({"index": idx.to_string(), "value": v})).collect::<Vec<_>>(),
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("report serializes"))?;
    } else {
        out.write_all(StateFile::density(&reference).render().as_bytes())?;
        for (q, v) in diagonalizers.iter().enumerate() {
            writeln!(out, "V{} = {}", q + 1, mat2_text(v))?;
        }
        for (idx, v) in &nonzero {
            writeln!(out, "r_{idx} = {v:.17e}")?;
        }
    }
    Ok(EXIT_OK)
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}{suffix}"))
}

type PartnerOf = Box<dyn Fn(&[Mat2]) -> Result<StateFile, Failure>>;

fn gen(seed: u64, n: usize, rank: usize, apply_lu: Option<u64>, path: Option<&Path>, out: &mut dyn Write) -> Result<i32, Failure> {
    if n == 0 || n > crate::io::MAX_FILE_QUBITS {
        return Err(Failure::Usage(format!("n = {n} outside 1..={}", crate::io::MAX_FILE_QUBITS)));
    }
    let (state, partner_of): (StateFile, PartnerOf) = if rank == 1 {
        let psi = random_pure_amplitudes(n, seed);
        let file = StateFile::pure(psi.clone());
        let partner = move |us: &[Mat2]| {
            let u = kron_all(us);
            let moved: Vec<Complex64> = (0..psi.len())
                .map(|r| (0..psi.len()).map(|c| u[(r, c)] * psi[c]).sum())
                .collect();
            Ok(StateFile::pure(moved))
        };
        (file, Box::new(partner))
    } else {
        let rho = random_state(n, rank, seed)?;
        let file = StateFile::density(&rho);
        let partner = move |us: &[Mat2]| Ok(StateFile::density(&apply_local_unitary(&rho, us)?));
        (file, Box::new(partner))
    };
    let extra = match apply_lu {
        Some(lu_seed) => {
            let us = random_local_unitary(n, lu_seed);
            Some((partner_of(&us)?, us))
        }
        None => None,
    };
    match (path, extra) {
        (Some(p), None) => write_text(p, &state.render())?,
        (Some(p), Some((partner, us))) => {
            write_text(p, &state.render())?;
            write_text(&sibling(p, ".partner.json"), &partner.render())?;
            write_text(&sibling(p, ".unitaries.json"), &render_unitaries(&us))?;
        }
        (None, None) => out.write_all(state.render().as_bytes())?,
        (None, Some((partner, us))) => {
            let indent = |s: String| s.trim_end().replace('\n', "\n  ");
            write!(
                out,
                "{{\n  \"state\": {},\n  \"partner\": {},\n  \"unitaries\": {}\n}}\n",
                indent(state.render()),
                indent(partner.render()),
                indent(render_unitaries(&us))
            )?;
        }
    }
    Ok(EXIT_OK)
}
