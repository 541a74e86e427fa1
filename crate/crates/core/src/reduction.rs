//! Partial traces.
//!
//! The main route works on Pauli coefficients: tracing out a qubit keeps only
//! the coefficients with the identity on it, rescaled by 2. A dense
//! index-summing path is kept for cross-checks.

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ZERO};
use crate::pauli::{complex_coefficients, matrix_from_coefficients};
use crate::state::MultiQubitState;

/// A reduced state whose qubits are relabelled `0..k`; `origin[s]` is the
/// qubit of the parent state that slot `s` came from.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedState {
    pub state: MultiQubitState,
    pub origin: Vec<usize>,
}

fn check_keep(keep: &[usize], n: usize) -> Result<()> {
    if keep.is_empty() {
        return Err(Error::EmptyKeepSet);
    }
    if let Some(&index) = keep.iter().find(|&&q| q >= n) {
        return Err(Error::IndexOutOfRange { index, n });
    }
    if keep.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::UnorderedKeepSet);
    }
    Ok(())
}

/// Traces out every qubit not in `keep` (0-based, strictly increasing).
pub fn partial_trace(state: &MultiQubitState, keep: &[usize]) -> Result<ReducedState> {
    let n = state.n();
    check_keep(keep, n)?;
    let k = keep.len();
    let full = complex_coefficients(state.matrix());
    let scale = (1u64 << (n - k)) as f64;
    let mut reduced = vec![0.0; 1 << (2 * k)];
    for (slot, r) in reduced.iter_mut().enumerate() {
        let mut offset = 0usize;
        for (s, &q) in keep.iter().enumerate() {
            let digit = (slot >> (2 * (k - 1 - s))) & 3;
            offset |= digit << (2 * (n - 1 - q));
        }
        *r = full[offset].re * scale;
    }
    let matrix = matrix_from_coefficients(k, &reduced);
    Ok(ReducedState {
        state: MultiQubitState::from_matrix_unchecked(k, matrix),
        origin: keep.to_vec(),
    })
}

/// The same reduction by summing matrix entries over the traced-out bits.
pub fn partial_trace_dense(state: &MultiQubitState, keep: &[usize]) -> Result<MultiQubitState> {
    let n = state.n();
    check_keep(keep, n)?;
    let k = keep.len();
    let traced: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
    let m = state.matrix();
    let embed = |kept_bits: usize, traced_bits: usize| -> usize {
        let mut full = 0usize;
        for (s, &q) in keep.iter().enumerate() {
            full |= ((kept_bits >> (k - 1 - s)) & 1) << (n - 1 - q);
        }
        for (s, &q) in traced.iter().enumerate() {
            full |= ((traced_bits >> (traced.len() - 1 - s)) & 1) << (n - 1 - q);
        }
        full
    };
    let dk = 1usize << k;
    let mut out = ComplexMatrix::from_element(dk, dk, ZERO);
    for row in 0..dk {
        for col in 0..dk {
            out[(row, col)] = (0..1usize << traced.len()).map(|t| m[(embed(row, t), embed(col, t))]).sum();
        }
    }
    Ok(MultiQubitState::from_matrix_unchecked(k, out))
}

/// One-qubit marginal of qubit `q`.
pub(crate) fn marginal(state: &MultiQubitState, q: usize) -> MultiQubitState {
    partial_trace_dense(state, &[q]).expect("qubit index checked by caller")
}
