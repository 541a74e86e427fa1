//! The generalized Pauli (Bloch) basis.
//!
//! Coefficients are `r_α = Tr(σ_α ρ) / 2^n`, stored flat in base 4 with qubit 0
//! as the most significant digit, so `ρ = Σ_α r_α σ_α`.

use crate::error::{Error, Result};
use crate::linalg::{kron_all, pauli2, Complex64, ComplexMatrix, I, ZERO};
use crate::state::{check_state, MultiQubitState};
use crate::tolerance::Tolerances;

/// A tensor product of single-qubit Pauli labels, `0` standing for the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliIndex(Vec<u8>);

impl PauliIndex {
    pub fn new(alphas: Vec<u8>) -> Result<Self> {
        if alphas.is_empty() {
            return Err(Error::WrongArity { expected: 1, got: 0 });
        }
        if let Some(&bad) = alphas.iter().find(|&&a| a > 3) {
            return Err(Error::InvalidAxis(bad));
        }
        Ok(Self(alphas))
    }

    pub fn identity(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn from_offset(n: usize, mut offset: usize) -> Self {
        let mut alphas = vec![0u8; n];
        for a in alphas.iter_mut().rev() {
            *a = (offset % 4) as u8;
            offset /= 4;
        }
        Self(alphas)
    }

    pub fn alphas(&self) -> &[u8] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    /// Position in the flat coefficient vector.
    pub fn offset(&self) -> usize {
        self.0.iter().fold(0, |acc, &a| acc * 4 + a as usize)
    }

    /// Number of non-identity factors.
    pub fn weight(&self) -> usize {
        self.0.iter().filter(|&&a| a != 0).count()
    }
}

impl std::fmt::Display for PauliIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let labels: Vec<String> = self.0.iter().map(|a| a.to_string()).collect();
        write!(f, "({})", labels.join(","))
    }
}

/// `σ_{α_1} ⊗ … ⊗ σ_{α_n}`.
pub fn pauli_matrix(idx: &PauliIndex) -> ComplexMatrix {
    let factors: Vec<_> = idx.alphas().iter().map(|&a| pauli2(a)).collect();
    kron_all(&factors)
}

/// Real Pauli coefficients of an n-qubit operator.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliCoefficients {
    n: usize,
    r: Vec<f64>,
}

impl PauliCoefficients {
    pub fn new(n: usize, r: Vec<f64>) -> Result<Self> {
        let expected = 1usize << (2 * n);
        if n == 0 {
            return Err(Error::WrongArity { expected: 1, got: 0 });
        }
        if r.len() != expected {
            return Err(Error::CoefficientLength { expected, got: r.len() });
        }
        Ok(Self { n, r })
    }

    /// Builds a coefficient vector from sparse `(index, value)` entries.
    pub fn from_entries(n: usize, entries: &[(&[u8], f64)]) -> Result<Self> {
        let mut r = vec![0.0; 1 << (2 * n)];
        for (alphas, value) in entries {
            let idx = PauliIndex::new(alphas.to_vec())?;
            if idx.n() != n {
                return Err(Error::WrongArity { expected: n, got: idx.n() });
            }
            r[idx.offset()] = *value;
        }
        Ok(Self { n, r })
    }

    pub(crate) fn from_vec_unchecked(n: usize, r: Vec<f64>) -> Self {
        debug_assert_eq!(r.len(), 1 << (2 * n));
        Self { n, r }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.r
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.r
    }

    pub fn get(&self, idx: &PauliIndex) -> Result<f64> {
        if idx.n() != self.n {
            return Err(Error::WrongArity { expected: self.n, got: idx.n() });
        }
        Ok(self.r[idx.offset()])
    }

    /// `Σ_α r_α²`, which equals `Tr(ρ²) / 2^n`.
    pub fn sum_of_squares(&self) -> f64 {
        self.r.iter().map(|x| x * x).sum()
    }

    /// Non-negligible entries as `(index, value)` pairs in offset order.
    pub fn nonzero(&self, threshold: f64) -> Vec<(PauliIndex, f64)> {
        self.r
            .iter()
            .enumerate()
            .filter(|(_, v)| v.abs() > threshold)
            .map(|(k, &v)| (PauliIndex::from_offset(self.n, k), v))
            .collect()
    }
}

/// Complex coefficients `Tr(σ_α M) / 2^n` of any `2^n × 2^n` matrix, by a
/// fast per-qubit transform.
pub(crate) fn complex_coefficients(m: &ComplexMatrix) -> Vec<Complex64> {
    let dim = m.nrows();
    let n = dim.trailing_zeros() as usize;
    let mut v = vec![ZERO; dim * dim];
    for row in 0..dim {
        for col in 0..dim {
            v[interleave(row, col, n)] = m[(row, col)];
        }
    }
    for q in 0..n {
        let stride = 1usize << (2 * (n - 1 - q));
        for base in 0..v.len() {
            if !(base / stride).is_multiple_of(4) {
                continue;
            }
            let m00 = v[base];
            let m01 = v[base + stride];
            let m10 = v[base + 2 * stride];
            let m11 = v[base + 3 * stride];
            v[base] = (m00 + m11) * 0.5;
            v[base + stride] = (m01 + m10) * 0.5;
            v[base + 2 * stride] = (m01 - m10) * I * 0.5;
            v[base + 3 * stride] = (m00 - m11) * 0.5;
        }
    }
    v
}

/// `Σ_α r_α σ_α` for a real coefficient vector.
pub(crate) fn matrix_from_coefficients(n: usize, r: &[f64]) -> ComplexMatrix {
    let mut v: Vec<Complex64> = r.iter().map(|&x| Complex64::from(x)).collect();
    for q in 0..n {
        let stride = 1usize << (2 * (n - 1 - q));
        for base in 0..v.len() {
            if !(base / stride).is_multiple_of(4) {
                continue;
            }
            let c0 = v[base];
            let c1 = v[base + stride];
            let c2 = v[base + 2 * stride];
            let c3 = v[base + 3 * stride];
            v[base] = c0 + c3;
            v[base + stride] = c1 - I * c2;
            v[base + 2 * stride] = c1 + I * c2;
            v[base + 3 * stride] = c0 - c3;
        }
    }
    let dim = 1usize << n;
    ComplexMatrix::from_fn(dim, dim, |row, col| v[interleave(row, col, n)])
}

/// Base-4 digit `2a + b` per qubit, where `a`, `b` are the row and column bits.
fn interleave(row: usize, col: usize, n: usize) -> usize {
    let mut out = 0;
    for q in 0..n {
        let shift = n - 1 - q;
        let a = (row >> shift) & 1;
        let b = (col >> shift) & 1;
        out = out * 4 + 2 * a + b;
    }
    out
}

pub fn to_pauli_coefficients(state: &MultiQubitState, tol: &Tolerances) -> Result<PauliCoefficients> {
    let c = complex_coefficients(state.matrix());
    let imag = c.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if imag > tol.herm {
        return Err(Error::NonHermitianInput { imag });
    }
    Ok(PauliCoefficients::from_vec_unchecked(state.n(), c.iter().map(|z| z.re).collect()))
}

/// Rebuilds the density matrix; fails with `NotAState` unless the result
/// passes every state check.
pub fn from_pauli_coefficients(coeffs: &PauliCoefficients, tol: &Tolerances) -> Result<MultiQubitState> {
    let m = matrix_from_coefficients(coeffs.n(), coeffs.as_slice());
    check_state(&m, tol).map_err(Error::NotAState)?;
    Ok(MultiQubitState::from_matrix_unchecked(coeffs.n(), m))
}

/// One-qubit Bloch vector, `ρ = ½(1 + r⃗·σ⃗)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BlochVector {
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
}

impl BlochVector {
    pub fn norm(&self) -> f64 {
        (self.r1 * self.r1 + self.r2 * self.r2 + self.r3 * self.r3).sqrt()
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.r1, self.r2, self.r3]
    }
}

pub fn bloch_vector(state: &MultiQubitState) -> Result<BlochVector> {
    if state.n() != 1 {
        return Err(Error::WrongArity { expected: 1, got: state.n() });
    }
    Ok(bloch_of(state.matrix()))
}

pub(crate) fn bloch_of(m: &ComplexMatrix) -> BlochVector {
    let off = m[(0, 1)] + m[(1, 0)].conj();
    BlochVector {
        r1: off.re,
        r2: -off.im,
        r3: (m[(0, 0)] - m[(1, 1)]).re,
    }
}

/// The coefficient with the given axes on the given qubits and the identity
/// everywhere else. An empty placement returns `r_0 = 1/2^n`.
pub fn correlation_coefficient(coeffs: &PauliCoefficients, placements: &[(usize, u8)]) -> Result<f64> {
    let n = coeffs.n();
    let mut alphas = vec![0u8; n];
    for &(qubit, axis) in placements {
        if qubit >= n {
            return Err(Error::IndexOutOfRange { index: qubit, n });
        }
        if axis > 3 {
            return Err(Error::InvalidAxis(axis));
        }
        alphas[qubit] = axis;
    }
    Ok(coeffs.as_slice()[PauliIndex(alphas).offset()])
}
