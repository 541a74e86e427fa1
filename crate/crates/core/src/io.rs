//! State files and machine-readable decision reports.
//!
//! A state file is a JSON document
//!
//! ```json
//! {"n": 1, "kind": "density", "matrix": [[[0.5, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.5, 0.0]]]}
//! ```
//!
//! or, for pure states, `"kind": "pure"` with an `"amplitudes"` list of
//! `[re, im]` pairs. Numbers are written with 17 significant digits, so every
//! emitted file parses back to the identical matrix.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::error::{Error, StateViolation};
use crate::linalg::{Complex64, ComplexMatrix, Mat2};
use crate::protocol::{PipelineTrace, QubitRecord, Verdict, Witness};
use crate::solver::{ResidualUnitary, SymmetryClass};
use crate::state::MultiQubitState;
use crate::tolerance::Tolerances;

/// Largest qubit count a file may declare.
pub const MAX_FILE_QUBITS: usize = 14;

#[derive(Debug, Error)]
pub enum FileError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("malformed state file: {0}")]
    Syntax(String),
    #[error(transparent)]
    State(#[from] Error),
}

#[derive(Debug, Clone, PartialEq)]
pub enum StateData {
    Pure(Vec<Complex64>),
    Density(ComplexMatrix),
}

/// The contents of a state file, before validation.
#[derive(Debug, Clone, PartialEq)]
pub struct StateFile {
    pub n: usize,
    pub data: StateData,
}

#[derive(Deserialize)]
#[serde(rename_all = "lowercase")]
enum Kind {
    Pure,
    Density,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    n: usize,
    kind: Kind,
    amplitudes: Option<Vec<[f64; 2]>>,
    matrix: Option<Vec<Vec<[f64; 2]>>>,
}

fn shape(msg: String) -> FileError {
    FileError::State(StateViolation::Shape(msg).into())
}

fn complex(p: [f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

impl StateFile {
    pub fn density(state: &MultiQubitState) -> Self {
        Self {
            n: state.n(),
            data: StateData::Density(state.matrix().clone()),
        }
    }

    pub fn pure(amplitudes: Vec<Complex64>) -> Self {
        Self {
            n: amplitudes.len().trailing_zeros() as usize,
            data: StateData::Pure(amplitudes),
        }
    }

    pub fn parse(text: &str) -> Result<Self, FileError> {
        let raw: RawFile = serde_json::from_str(text).map_err(|e| FileError::Syntax(e.to_string()))?;
        if raw.n == 0 || raw.n > MAX_FILE_QUBITS {
            return Err(shape(format!("n = {} outside 1..={MAX_FILE_QUBITS}", raw.n)));
        }
        let dim = 1usize << raw.n;
        let data = match (raw.kind, raw.amplitudes, raw.matrix) {
            (Kind::Pure, Some(a), None) => {
                if a.len() != dim {
                    return Err(shape(format!("{} amplitudes for n = {}", a.len(), raw.n)));
                }
                StateData::Pure(a.into_iter().map(complex).collect())
            }
            (Kind::Density, None, Some(rows)) => {
                if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
                    return Err(shape(format!("matrix is not {dim}×{dim} for n = {}", raw.n)));
                }
                StateData::Density(ComplexMatrix::from_fn(dim, dim, |r, c| complex(rows[r][c])))
            }
            (Kind::Pure, _, _) => return Err(FileError::Syntax("pure state needs exactly the field amplitudes".into())),
            (Kind::Density, _, _) => return Err(FileError::Syntax("density state needs exactly the field matrix".into())),
        };
        Ok(Self { n: raw.n, data })
    }

    /// Validates the contents as a state.
    pub fn to_state(&self, tol: &Tolerances) -> Result<MultiQubitState, Error> {
        match &self.data {
            StateData::Pure(a) => MultiQubitState::from_pure(a, tol),
            StateData::Density(m) => MultiQubitState::new(m.clone(), tol),
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        match &self.data {
            StateData::Pure(a) => {
                let _ = write!(out, "{{\n  \"n\": {},\n  \"kind\": \"pure\",\n  \"amplitudes\": [\n", self.n);
                for (k, z) in a.iter().enumerate() {
                    let sep = if k + 1 < a.len() { "," } else { "" };
                    let _ = writeln!(out, "    {}{sep}", pair(*z));
                }
                out.push_str("  ]\n}\n");
            }
            StateData::Density(m) => {
                let _ = write!(out, "{{\n  \"n\": {},\n  \"kind\": \"density\",\n  \"matrix\": [\n", self.n);
                for r in 0..m.nrows() {
                    let row: Vec<String> = (0..m.ncols()).map(|c| pair(m[(r, c)])).collect();
                    let sep = if r + 1 < m.nrows() { "," } else { "" };
                    let _ = writeln!(out, "    [{}]{sep}", row.join(", "));
                }
                out.push_str("  ]\n}\n");
            }
        }
        out
    }
}

fn number(x: f64) -> String {
    format!("{x:.16e}")
}

fn pair(z: Complex64) -> String {
    format!("[{}, {}]", number(z.re), number(z.im))
}

/// A list of 2×2 matrices in the state-file number format.
pub fn render_unitaries(unitaries: &[Mat2]) -> String {
    let mut out = format!("{{\n  \"n\": {},\n  \"unitaries\": [\n", unitaries.len());
    for (k, u) in unitaries.iter().enumerate() {
        let sep = if k + 1 < unitaries.len() { "," } else { "" };
        let _ = writeln!(
            out,
            "    [[{}, {}], [{}, {}]]{sep}",
            pair(u[(0, 0)]),
            pair(u[(0, 1)]),
            pair(u[(1, 0)]),
            pair(u[(1, 1)])
        );
    }
    out.push_str("  ]\n}\n");
    out
}

pub fn read_state_file(path: &Path) -> Result<StateFile, FileError> {
    let text = std::fs::read_to_string(path).map_err(|source| FileError::Read {
        path: path.to_owned(),
        source,
    })?;
    StateFile::parse(&text)
}

pub fn read_state(path: &Path, tol: &Tolerances) -> Result<MultiQubitState, FileError> {
    Ok(read_state_file(path)?.to_state(tol)?)
}

pub fn write_text(path: &Path, text: &str) -> Result<(), FileError> {
    std::fs::write(path, text).map_err(|source| FileError::Write {
        path: path.to_owned(),
        source,
    })
}

fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

pub fn mat2_json(u: &Mat2) -> Value {
    json!([
        [complex_json(u[(0, 0)]), complex_json(u[(0, 1)])],
        [complex_json(u[(1, 0)]), complex_json(u[(1, 1)])]
    ])
}

fn matrix_json(m: &ComplexMatrix) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|r| Value::Array((0..m.ncols()).map(|c| complex_json(m[(r, c)])).collect()))
            .collect(),
    )
}

fn residual_json(r: &ResidualUnitary) -> Value {
    match r {
        ResidualUnitary::DiagonalPhase { omega } => json!({"kind": "diagonal-phase", "omega": omega}),
        ResidualUnitary::General(p) => json!({"kind": "general", "phi": p.phi, "theta": p.theta, "phi_az": p.phi_az}),
    }
}

fn qubit_json(q: &QubitRecord) -> Value {
    json!({
        "qubit": q.qubit + 1,
        "lambda": q.diagonalization.lambda,
        "lambda_prime": q.diagonalization_prime.lambda,
        "diagonalizer": mat2_json(&q.diagonalization.v),
        "diagonalizer_prime": mat2_json(&q.diagonalization_prime.v),
        "class": q.class.map(|c| match c {
            SymmetryClass::Weak => "weak",
            SymmetryClass::Strong => "strong",
        }),
        "residual_unitary": q.residual.as_ref().map(residual_json),
        "method": q.note.as_ref().map(|n| n.method.to_string()),
        "partner": q.note.as_ref().and_then(|n| n.partner).map(|p| p + 1),
        "order": q.note.as_ref().map(|n| n.order),
    })
}

fn witness_json(w: &Witness) -> Value {
    match w {
        Witness::SpectrumMismatch { qubit, d, d_prime } => json!({
            "kind": "SpectrumMismatch",
            "qubit": qubit + 1,
            "d": d,
            "d_prime": d_prime,
            "text": w.to_string(),
        }),
        Witness::VerificationFailure { residual } => json!({
            "kind": "VerificationFailure",
            "residual": residual,
            "text": w.to_string(),
        }),
        Witness::SolverEvidence(s) => json!({
            "kind": "SolverEvidence",
            "detail": s,
            "text": w.to_string(),
        }),
    }
}

pub fn trace_json(trace: &PipelineTrace) -> Value {
    json!({
        "qubits": trace.qubits.iter().map(qubit_json).collect::<Vec<_>>(),
        "reference": trace.reference.as_ref().map(|r| json!({
            "rho": matrix_json(r.rho.matrix()),
            "rho_prime": matrix_json(r.rho_prime.matrix()),
        })),
        "oracle": trace.oracle.as_ref().map(|o| json!({"residual": o.residual, "start": o.start})),
        "log": trace.log,
    })
}

/// Verdict, unitaries (qubit 1 first), residual and trace.
pub fn report_json(verdict: &Verdict, trace: &PipelineTrace) -> Value {
    let (name, unitaries, residual, witness, reason) = match verdict {
        Verdict::Equivalent { unitaries, residual } => (
            "Equivalent",
            Value::Array(unitaries.iter().map(mat2_json).collect()),
            json!(residual),
            Value::Null,
            Value::Null,
        ),
        Verdict::NotEquivalent(w) => {
            let residual = match w {
                Witness::VerificationFailure { residual } => json!(residual),
                _ => Value::Null,
            };
            ("NotEquivalent", Value::Null, residual, witness_json(w), Value::Null)
        }
        Verdict::Undecided(r) => ("Undecided", Value::Null, Value::Null, Value::Null, json!(r.to_string())),
    };
    json!({
        "verdict": name,
        "unitaries": unitaries,
        "residual": residual,
        "witness": witness,
        "reason": reason,
        "trace": trace_json(trace),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{random_pure_amplitudes, random_state};

    #[test]
    fn density_files_round_trip_bit_exactly() {
        for seed in 0..20 {
            let rho = random_state(1 + seed as usize % 3, 1 + seed as usize % 2, seed).unwrap();
            let file = StateFile::density(&rho);
            let back = StateFile::parse(&file.render()).unwrap();
            assert_eq!(back, file);
            assert_eq!(back.to_state(&Tolerances::default()).unwrap(), rho);
        }
    }

    #[test]
    fn pure_files_round_trip_bit_exactly() {
        let file = StateFile::pure(random_pure_amplitudes(3, 4));
        assert_eq!(file.n, 3);
        assert_eq!(StateFile::parse(&file.render()).unwrap(), file);
    }

    #[test]
    fn shape_errors_are_state_errors() {
        let text = r#"{"n": 2, "kind": "pure", "amplitudes": [[1, 0], [0, 0]]}"#;
        assert!(matches!(
            StateFile::parse(text),
            Err(FileError::State(Error::InvalidState(StateViolation::Shape(_))))
        ));
        let text = r#"{"n": 1, "kind": "density", "amplitudes": [[1, 0], [0, 0]]}"#;
        assert!(matches!(StateFile::parse(text), Err(FileError::Syntax(_))));
        assert!(matches!(StateFile::parse("{"), Err(FileError::Syntax(_))));
    }

    #[test]
    fn normalization_is_checked_for_pure_files() {
        let text = r#"{"n": 1, "kind": "pure", "amplitudes": [[0.8, 0], [0.5, 0]]}"#;
        let err = StateFile::parse(text).unwrap().to_state(&Tolerances::default()).unwrap_err();
        assert!(matches!(err, Error::InvalidState(StateViolation::NotNormalized { .. })));
    }
}
