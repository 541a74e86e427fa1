use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};
use crate::pauli::PauliCoefficients;

/// Two-qubit correlations `r_{a_i, b_j}` (`a, b ∈ {1,2,3}`, identity
/// elsewhere) of both reference forms. Entry `(a−1, b−1)` of `c` is
/// `r_{a_i, b_j}`; `c_prime` holds the primed state's values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationBlock {
    pub qubits: (usize, usize),
    pub c: Matrix3<f64>,
    pub c_prime: Matrix3<f64>,
}

impl CorrelationBlock {
    pub fn from_coefficients(r: &PauliCoefficients, r_prime: &PauliCoefficients, i: usize, j: usize) -> Result<Self> {
        let n = r.n();
        if r_prime.n() != n {
            return Err(Error::ArityMismatch { left: n, right: r_prime.n() });
        }
        for q in [i, j] {
            if q >= n {
                return Err(Error::IndexOutOfRange { index: q, n });
            }
        }
        if i == j {
            return Err(Error::UnorderedKeepSet);
        }
        Ok(Self::from_slices(n, r.as_slice(), r_prime.as_slice(), i, j))
    }

    pub(crate) fn from_slices(n: usize, r: &[f64], r_prime: &[f64], i: usize, j: usize) -> Self {
        Self {
            qubits: (i, j),
            c: block_with_tail(n, r, i, j, &[]),
            c_prime: block_with_tail(n, r_prime, i, j, &[]),
        }
    }

    /// `(r_{a_target, 3_partner})_{a=1,2,3}` for both states, where the
    /// partner is the other qubit of the block.
    pub fn slice(&self, target: usize) -> Option<(Vector3<f64>, Vector3<f64>)> {
        if target == self.qubits.0 {
            Some((self.c.column(2).into_owned(), self.c_prime.column(2).into_owned()))
        } else if target == self.qubits.1 {
            Some((self.c.row(2).transpose(), self.c_prime.row(2).transpose()))
        } else {
            None
        }
    }

    /// The block seen with the roles of the two qubits exchanged.
    pub fn transposed(&self) -> Self {
        Self {
            qubits: (self.qubits.1, self.qubits.0),
            c: self.c.transpose(),
            c_prime: self.c_prime.transpose(),
        }
    }
}

/// Flat offset of the index with the given axes and the identity elsewhere.
pub(crate) fn offset_of(n: usize, placements: &[(usize, u8)]) -> usize {
    placements
        .iter()
        .map(|&(q, a)| (a as usize) << (2 * (n - 1 - q)))
        .sum()
}

/// `r_{a_i, b_j, tail}` for `a, b ∈ {1,2,3}`.
pub(crate) fn block_with_tail(n: usize, r: &[f64], i: usize, j: usize, tail: &[(usize, u8)]) -> Matrix3<f64> {
    let base = offset_of(n, tail);
    Matrix3::from_fn(|a, b| r[base + offset_of(n, &[(i, a as u8 + 1), (j, b as u8 + 1)])])
}

/// `r_{a_q, tail}` for `a ∈ {1,2,3}`.
pub(crate) fn vector_with_tail(n: usize, r: &[f64], q: usize, tail: &[(usize, u8)]) -> Vector3<f64> {
    let base = offset_of(n, tail);
    Vector3::from_fn(|a, _| r[base + offset_of(n, &[(q, a as u8 + 1)])])
}
