//! The decision procedure.
//!
//! 1. Reduce to one-qubit marginals and diagonalize them.
//! 2. Reject on mismatched marginal spectra.
//! 3. Classify each qubit as weak or strong.
//! 4. Bring both states to reference form.
//! 5. Solve for the residual unitaries relating the reference forms.
//! 6. Assemble `U_i = V′_i Ū_i V_i†` and verify on the full states.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{conjugate_local, frobenius, normalize_global_phase, Mat2};
use crate::oracle::{brute_force_lu_search, EQUIVALENCE_THRESHOLD, MAX_QUBITS};
use crate::pauli::to_pauli_coefficients;
use crate::reduction::marginal;
use crate::reference::{check_unitaries, reference_form};
use crate::rotation::su2_to_so3;
use crate::solver::{plan, polish, ResidualUnitary, SolveContext, SolveMethod, SolveNote, SymmetryClass};
use crate::spectral::{diagonalize_qubit, is_maximally_mixed, Diagonalization};
use crate::state::MultiQubitState;
use crate::tolerance::Tolerances;

const POLISH_STARTS: usize = 16;

/// When to consult the brute-force search after the closed-form pass fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMode {
    On,
    Off,
    /// On for at most three qubits.
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecisionConfig {
    pub tolerances: Tolerances,
    pub oracle: OracleMode,
    /// Number of oracle starts.
    pub oracle_budget: usize,
    /// Seeds the refinement perturbations and the oracle.
    pub seed: u64,
}

impl Default for DecisionConfig {
    fn default() -> Self {
        Self {
            tolerances: Tolerances::default(),
            oracle: OracleMode::Auto,
            oracle_budget: 64,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    /// Ascending marginal spectra of `qubit` differ beyond the degeneracy gate.
    SpectrumMismatch { qubit: usize, d: [f64; 2], d_prime: [f64; 2] },
    /// Best relative Frobenius residual reached on the full states.
    VerificationFailure { residual: f64 },
    /// A relation no residual unitary can satisfy.
    SolverEvidence(String),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::SpectrumMismatch { qubit, d, d_prime } => write!(
                f,
                "SpectrumMismatch qubit {}: D = ({:.12}, {:.12}), D' = ({:.12}, {:.12})",
                qubit + 1,
                d[0],
                d[1],
                d_prime[0],
                d_prime[1]
            ),
            Self::VerificationFailure { residual } => write!(f, "VerificationFailure residual {residual:.6e}"),
            Self::SolverEvidence(s) => write!(f, "SolverEvidence {s}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UndecidedReason {
    /// Some qubit is not determined by correlations through order 3.
    OrderLimitExceeded,
    /// The oracle was requested but cannot run at this size.
    OracleDisabled,
}

impl fmt::Display for UndecidedReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::OrderLimitExceeded => "OrderLimitExceeded",
            Self::OracleDisabled => "OracleDisabled",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    /// `ρ′ = (⊗U_i) ρ (⊗U_i†)` with relative Frobenius residual `residual`.
    Equivalent { unitaries: Vec<Mat2>, residual: f64 },
    NotEquivalent(Witness),
    Undecided(UndecidedReason),
}

impl Verdict {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Self::Equivalent { .. })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QubitRecord {
    pub qubit: usize,
    pub reduced: MultiQubitState,
    pub reduced_prime: MultiQubitState,
    pub diagonalization: Diagonalization,
    pub diagonalization_prime: Diagonalization,
    /// Unset when the spectrum gate rejected the pair.
    pub class: Option<SymmetryClass>,
    pub residual: Option<ResidualUnitary>,
    pub note: Option<SolveNote>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceForms {
    pub rho: MultiQubitState,
    pub rho_prime: MultiQubitState,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleRecord {
    pub residual: f64,
    pub start: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineTrace {
    pub qubits: Vec<QubitRecord>,
    pub reference: Option<ReferenceForms>,
    pub oracle: Option<OracleRecord>,
    pub log: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpectrumGate {
    Pass,
    Mismatch { qubit: usize, d: [f64; 2], d_prime: [f64; 2] },
}

fn check_arity(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::ArityMismatch { left, right });
    }
    Ok(())
}

fn gate(pairs: &[(Diagonalization, Diagonalization)], tol: &Tolerances) -> SpectrumGate {
    for (qubit, (d, dp)) in pairs.iter().enumerate() {
        if (0..2).any(|k| (d.lambda[k] - dp.lambda[k]).abs() > tol.degen) {
            return SpectrumGate::Mismatch {
                qubit,
                d: d.lambda,
                d_prime: dp.lambda,
            };
        }
    }
    SpectrumGate::Pass
}

/// Compares the ascending spectra of all one-qubit marginals.
pub fn spectrum_gate(rho: &MultiQubitState, rho_prime: &MultiQubitState, tol: &Tolerances) -> Result<SpectrumGate> {
    check_arity(rho.n(), rho_prime.n())?;
    let pairs = (0..rho.n())
        .map(|q| {
            Ok((
                diagonalize_qubit(&marginal(rho, q), tol)?,
                diagonalize_qubit(&marginal(rho_prime, q), tol)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(gate(&pairs, tol))
}

/// `(⊗U_i) ρ (⊗U_i†)`.
pub fn apply_local_unitary(rho: &MultiQubitState, unitaries: &[Mat2]) -> Result<MultiQubitState> {
    check_arity(rho.n(), unitaries.len())?;
    check_unitaries(unitaries)?;
    let us: Vec<Option<Mat2>> = unitaries.iter().copied().map(Some).collect();
    Ok(MultiQubitState::from_matrix_unchecked(rho.n(), conjugate_local(rho.matrix(), &us)))
}

/// `‖ρ′^(r) − (⊗Ū_i) ρ^(r) (⊗Ū_i†)‖_F`, unthresholded.
pub fn verify_equivalence(
    reference: &MultiQubitState,
    reference_prime: &MultiQubitState,
    residuals: &[Mat2],
) -> Result<f64> {
    check_arity(reference.n(), reference_prime.n())?;
    check_arity(reference.n(), residuals.len())?;
    let us: Vec<Option<Mat2>> = residuals.iter().copied().map(Some).collect();
    Ok(frobenius(&(reference_prime.matrix() - conjugate_local(reference.matrix(), &us))))
}

struct Candidate {
    residuals: Vec<ResidualUnitary>,
    unitaries: Vec<Mat2>,
    residual: f64,
}

/// Decides whether `rho_prime` is a local-unitary conjugate of `rho`.
///
/// `Equivalent` is only returned after the assembled unitaries reproduce
/// `rho_prime` from `rho` within `tolerances.verify`, relative to `‖ρ‖_F`.
pub fn decide_lu_equivalence(
    rho: &MultiQubitState,
    rho_prime: &MultiQubitState,
    config: &DecisionConfig,
) -> Result<(Verdict, PipelineTrace)> {
    let n = rho.n();
    check_arity(n, rho_prime.n())?;
    let tol = &config.tolerances;
    let mut log = Vec::new();

    let mut records = Vec::with_capacity(n);
    for q in 0..n {
        let reduced = marginal(rho, q);
        let reduced_prime = marginal(rho_prime, q);
        let diagonalization = diagonalize_qubit(&reduced, tol)?;
        let diagonalization_prime = diagonalize_qubit(&reduced_prime, tol)?;
        log.push(format!(
            "qubit {}: D = ({:.12}, {:.12}), D' = ({:.12}, {:.12})",
            q + 1,
            diagonalization.lambda[0],
            diagonalization.lambda[1],
            diagonalization_prime.lambda[0],
            diagonalization_prime.lambda[1]
        ));
        records.push(QubitRecord {
            qubit: q,
            reduced,
            reduced_prime,
            diagonalization,
            diagonalization_prime,
            class: None,
            residual: None,
            note: None,
        });
    }
    let pairs: Vec<_> = records
        .iter()
        .map(|r| (r.diagonalization, r.diagonalization_prime))
        .collect();
    if let SpectrumGate::Mismatch { qubit, d, d_prime } = gate(&pairs, tol) {
        log.push(format!("spectra of qubit {} differ; not LU-equivalent", qubit + 1));
        let trace = PipelineTrace {
            qubits: records,
            reference: None,
            oracle: None,
            log,
        };
        return Ok((Verdict::NotEquivalent(Witness::SpectrumMismatch { qubit, d, d_prime }), trace));
    }

    let mut classes = Vec::with_capacity(n);
    for rec in &mut records {
        let class = if is_maximally_mixed(&rec.reduced, tol.degen)? {
            SymmetryClass::Strong
        } else {
            SymmetryClass::Weak
        };
        rec.class = Some(class);
        classes.push(class);
    }
    log.push(format!(
        "classes: {}",
        classes
            .iter()
            .map(|c| match c {
                SymmetryClass::Weak => "weak",
                SymmetryClass::Strong => "strong",
            })
            .collect::<Vec<_>>()
            .join(", ")
    ));

    let v: Vec<Mat2> = records.iter().map(|r| r.diagonalization.v).collect();
    let v_prime: Vec<Mat2> = records.iter().map(|r| r.diagonalization_prime.v).collect();
    let forms = ReferenceForms {
        rho: reference_form(rho, &v)?,
        rho_prime: reference_form(rho_prime, &v_prime)?,
    };
    let r = to_pauli_coefficients(&forms.rho, tol)?;
    let r_prime = to_pauli_coefficients(&forms.rho_prime, tol)?;
    let ctx = SolveContext {
        n,
        r: r.as_slice(),
        r_prime: r_prime.as_slice(),
        classes: &classes,
        tol,
    };

    let scale = rho.purity().sqrt();
    let assemble = |residuals: Vec<ResidualUnitary>| -> Candidate {
        let unitaries: Vec<Mat2> = (0..n)
            .map(|q| normalize_global_phase(&(v_prime[q] * residuals[q].matrix() * v[q].adjoint())))
            .collect();
        let us: Vec<Option<Mat2>> = unitaries.iter().copied().map(Some).collect();
        let residual = frobenius(&(rho_prime.matrix() - conjugate_local(rho.matrix(), &us))) / scale;
        Candidate {
            residuals,
            unitaries,
            residual,
        }
    };

    let plan = plan(&ctx);
    log.extend(plan.log.iter().cloned());
    let mut notes = plan.notes.clone();
    let mut best = assemble(plan.residuals.clone());
    log.push(format!(
        "closed form: coefficient residual {:.3e}, verification residual {:.3e}",
        plan.residual, best.residual
    ));
    if best.residual > tol.verify {
        let (polished, _) = polish(&ctx, &plan.residuals, config.seed, POLISH_STARTS);
        let cand = assemble(polished);
        log.push(format!("joint refinement: verification residual {:.3e}", cand.residual));
        if cand.residual < best.residual {
            best = cand;
            if best.residual <= tol.verify {
                notes = polished_notes(&notes);
            }
        }
    }

    let mut oracle_record = None;
    if best.residual > tol.verify {
        let runs = match config.oracle {
            OracleMode::Off => false,
            OracleMode::On | OracleMode::Auto => n <= MAX_QUBITS,
        };
        if runs {
            let found = brute_force_lu_search(rho, rho_prime, config.oracle_budget, config.seed)?;
            log.push(format!(
                "closed form missed; oracle best residual {:.3e} from start {}",
                found.residual, found.start
            ));
            oracle_record = Some(OracleRecord {
                residual: found.residual,
                start: found.start,
            });
            if found.residual <= EQUIVALENCE_THRESHOLD {
                let seeds: Vec<ResidualUnitary> = (0..n)
                    .map(|q| {
                        let bar = v_prime[q].adjoint() * found.unitaries[q] * v[q];
                        ResidualUnitary::from_rotation(&su2_to_so3(&bar), classes[q])
                    })
                    .collect();
                let (polished, _) = polish(&ctx, &seeds, config.seed, 1);
                let cand = assemble(polished);
                log.push(format!("oracle result refined: verification residual {:.3e}", cand.residual));
                if cand.residual < best.residual {
                    best = cand;
                    if best.residual <= tol.verify {
                        notes = notes
                            .iter()
                            .map(|_| SolveNote {
                                method: SolveMethod::Oracle,
                                partner: None,
                                order: 0,
                            })
                            .collect();
                    }
                }
            }
        }
    }

    for (q, rec) in records.iter_mut().enumerate() {
        rec.residual = Some(best.residuals[q]);
        rec.note = Some(notes[q]);
    }
    let verdict = if best.residual <= tol.verify {
        log.push("verified: LU-equivalent".to_string());
        Verdict::Equivalent {
            unitaries: best.unitaries,
            residual: best.residual,
        }
    } else if plan.order_limited && oracle_record.is_none() {
        if config.oracle == OracleMode::On {
            log.push(format!("oracle requested but limited to {MAX_QUBITS} qubits"));
            Verdict::Undecided(UndecidedReason::OracleDisabled)
        } else {
            Verdict::Undecided(UndecidedReason::OrderLimitExceeded)
        }
    } else if let Some(ev) = plan.evidence.first() {
        log.push("not LU-equivalent".to_string());
        Verdict::NotEquivalent(Witness::SolverEvidence(ev.clone()))
    } else {
        log.push("not LU-equivalent".to_string());
        Verdict::NotEquivalent(Witness::VerificationFailure { residual: best.residual })
    };
    let trace = PipelineTrace {
        qubits: records,
        reference: Some(forms),
        oracle: oracle_record,
        log,
    };
    Ok((verdict, trace))
}

fn polished_notes(notes: &[SolveNote]) -> Vec<SolveNote> {
    notes
        .iter()
        .map(|nt| SolveNote {
            method: SolveMethod::Polish,
            ..*nt
        })
        .collect()
}
