//! Residual unitaries relating two reference forms.
//!
//! Every solver works on the SO(3) images of the residual unitaries: a weak
//! qubit's `U(ω)` rotates its Pauli axes about z by `2ω`, a strong qubit's
//! residual is an arbitrary rotation. Solvers only propose; the protocol
//! verifies on the full states.

mod block;
mod refine;
mod search;
mod strong;
mod weak;

use std::f64::consts::PI;

use thiserror::Error;

use crate::linalg::Mat2;
use crate::rotation::{rotation_z, so3_to_su2, su2_to_so3, Rot3};
use crate::spectral::{diagonal_phase, su2_matrix, Su2Params};

pub use block::CorrelationBlock;
pub use search::{escalate_order, SolveMethod, SolveNote};
pub(crate) use search::{plan, polish, SolveContext};
pub use strong::{solve_all_strong, solve_rotation_for_strong_qubit};
pub use weak::{linear_system_matrix, solve_omega_linear_system, solve_omega_pairwise};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("denominator {value:.3e} is below the null-coefficient gate")]
    VanishingDenominator { value: f64 },
    #[error("coefficients cannot be related by a local conjugation: {0}")]
    InconsistentCoefficients(String),
    #[error("phase equations have no consistent solution: {0}")]
    NoConsistentSolution(String),
    #[error("all correlation coefficients of the block vanish")]
    AllCoefficientsVanish,
    #[error("correlation slice has norm {norm:.3e}, below the null-coefficient gate")]
    VanishingSlice { norm: f64 },
    #[error("rotation cannot map a slice of norm {norm} onto one of norm {norm_prime}")]
    NormMismatch { norm: f64, norm_prime: f64 },
    #[error("no rotation pair found; best residual {residual:.3e}")]
    NoSolutionFound { residual: f64 },
    #[error("all correlations through order 3 vanish for qubits {unsolved:?}")]
    OrderLimitExceeded { unsolved: Vec<usize> },
    #[error("qubit {qubit} is not part of the block")]
    NotInBlock { qubit: usize },
    #[error("rotation check failed: residual {residual:.3e}")]
    RotationCheckFailed { residual: f64 },
}

impl SolverError {
    /// Whether the error compares invariants of the residual group, so that
    /// it rules out equivalence on its own.
    pub fn is_certificate(&self) -> bool {
        matches!(
            self,
            Self::InconsistentCoefficients(_) | Self::NormMismatch { .. } | Self::NoConsistentSolution(_)
        )
    }
}

/// Weak: the one-qubit marginal is not maximally mixed, so only diagonal
/// phases preserve its reference form. Strong: maximally mixed marginal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmetryClass {
    Weak,
    Strong,
}

/// The per-qubit factor `Ū_i` relating two reference forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ResidualUnitary {
    /// `U(ω) = diag(e^{−iω}, e^{iω})`.
    DiagonalPhase { omega: f64 },
    General(Su2Params),
}

impl ResidualUnitary {
    pub fn identity(class: SymmetryClass) -> Self {
        match class {
            SymmetryClass::Weak => Self::DiagonalPhase { omega: 0.0 },
            SymmetryClass::Strong => Self::General(Su2Params::IDENTITY),
        }
    }

    pub fn matrix(&self) -> Mat2 {
        match self {
            Self::DiagonalPhase { omega } => diagonal_phase(*omega),
            Self::General(p) => su2_matrix(p),
        }
    }

    /// The induced rotation of the Pauli axes.
    pub fn rotation(&self) -> Rot3 {
        match self {
            Self::DiagonalPhase { omega } => rotation_z(2.0 * omega),
            Self::General(p) => su2_to_so3(&su2_matrix(p)),
        }
    }

    pub(crate) fn phase(omega: f64) -> Self {
        Self::DiagonalPhase {
            omega: omega.rem_euclid(PI),
        }
    }

    /// Reads a rotation back as a residual of the given class. Weak qubits
    /// only ever receive rotations about z.
    pub(crate) fn from_rotation(r: &Rot3, class: SymmetryClass) -> Self {
        match class {
            SymmetryClass::Weak => Self::phase(r[(1, 0)].atan2(r[(0, 0)]) / 2.0),
            SymmetryClass::Strong => Self::General(Su2Params::from_unitary(&so3_to_su2(r))),
        }
    }
}
