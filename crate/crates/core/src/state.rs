use crate::error::{Result, StateViolation};
use crate::linalg::{frobenius, Complex64, ComplexMatrix, ONE, ZERO};
use crate::tolerance::Tolerances;

/// A validated n-qubit density matrix (Hermitian, unit trace, positive
/// semidefinite), basis index with qubit 0 as the most significant bit.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiQubitState {
    n: usize,
    matrix: ComplexMatrix,
}

impl MultiQubitState {
    /// Validates `matrix` against the state invariants.
    pub fn new(matrix: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        let n = qubits_for_dim(matrix.nrows(), matrix.ncols())?;
        check_state(&matrix, tol)?;
        Ok(Self { n, matrix })
    }

    /// `|ψ⟩⟨ψ|`, after checking that the amplitudes are normalized within the
    /// trace tolerance. The amplitudes are used as given.
    pub fn from_pure(amplitudes: &[Complex64], tol: &Tolerances) -> Result<Self> {
        let n = qubits_for_dim(amplitudes.len(), amplitudes.len())?;
        let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > tol.trace {
            return Err(StateViolation::NotNormalized { norm_sqr }.into());
        }
        let dim = amplitudes.len();
        let matrix = ComplexMatrix::from_fn(dim, dim, |r, c| amplitudes[r] * amplitudes[c].conj());
        Ok(Self { n, matrix })
    }

    pub fn maximally_mixed(n: usize) -> Self {
        let dim = 1usize << n;
        let matrix = ComplexMatrix::from_diagonal_element(dim, dim, Complex64::from(1.0 / dim as f64));
        Self { n, matrix }
    }

    /// Computational basis state `|bits⟩`, qubit 0 first.
    pub fn basis(bits: &[u8]) -> Self {
        let n = bits.len();
        let index = bits.iter().fold(0usize, |acc, &b| (acc << 1) | (b & 1) as usize);
        let dim = 1usize << n;
        let mut matrix = ComplexMatrix::from_element(dim, dim, ZERO);
        matrix[(index, index)] = ONE;
        Self { n, matrix }
    }

    /// Wraps a matrix produced by an operation that preserves the invariants.
    pub(crate) fn from_matrix_unchecked(n: usize, matrix: ComplexMatrix) -> Self {
        debug_assert_eq!(matrix.nrows(), 1 << n);
        Self { n, matrix }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// `Tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        frobenius(&self.matrix).powi(2)
    }

    /// Eigenvalues in ascending order.
    pub fn spectrum(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = hermitian_part(&self.matrix).symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }
}

fn qubits_for_dim(rows: usize, cols: usize) -> Result<usize> {
    if rows != cols {
        return Err(StateViolation::Shape(format!("matrix is {rows}×{cols}, not square")).into());
    }
    if rows < 2 || !rows.is_power_of_two() {
        return Err(StateViolation::Shape(format!("dimension {rows} is not 2^n with n ≥ 1")).into());
    }
    Ok(rows.trailing_zeros() as usize)
}

fn hermitian_part(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.adjoint()) * Complex64::from(0.5)
}

/// Hermiticity, trace and positivity checks, in that order.
pub(crate) fn check_state(m: &ComplexMatrix, tol: &Tolerances) -> Result<(), StateViolation> {
    let scale = frobenius(m).max(f64::MIN_POSITIVE);
    let deviation = frobenius(&(m - m.adjoint())) / scale;
    if deviation > tol.herm {
        return Err(StateViolation::NotHermitian { deviation });
    }
    let trace = m.trace();
    if (trace.re - 1.0).abs() > tol.trace || trace.im.abs() > tol.trace {
        return Err(StateViolation::TraceNotUnit { trace: trace.re });
    }
    let min_eigenvalue = hermitian_part(m)
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    if min_eigenvalue < -tol.psd {
        return Err(StateViolation::NotPositive { min_eigenvalue });
    }
    Ok(())
}
