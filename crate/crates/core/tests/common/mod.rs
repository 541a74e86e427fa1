#![allow(dead_code)]

use lueq::linalg::{pauli2, Complex64, ComplexMatrix, Mat2};
use lueq::pauli::{from_pauli_coefficients, to_pauli_coefficients, PauliCoefficients};
use lueq::state::MultiQubitState;
use lueq::tolerance::Tolerances;

pub fn tol() -> Tolerances {
    Tolerances::default()
}

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn pure(amplitudes: &[f64]) -> MultiQubitState {
    let norm = amplitudes.iter().map(|a| a * a).sum::<f64>().sqrt();
    let v: Vec<Complex64> = amplitudes.iter().map(|&a| c(a / norm)).collect();
    MultiQubitState::from_pure(&v, &tol()).unwrap()
}

/// `3/5 |00⟩ + 4/5 |11⟩`.
pub fn pure_pair_rho() -> MultiQubitState {
    pure(&[0.6, 0.0, 0.0, 0.8])
}

/// `(|00⟩ − 7|01⟩ − 7|10⟩ + |11⟩)/10`.
pub fn pure_pair_rho_prime() -> MultiQubitState {
    pure(&[0.1, -0.7, -0.7, 0.1])
}

pub fn from_entries(n: usize, entries: &[(&[u8], f64)]) -> MultiQubitState {
    from_pauli_coefficients(&PauliCoefficients::from_entries(n, entries).unwrap(), &tol()).unwrap()
}

pub fn mixed_pair_rho() -> MultiQubitState {
    from_entries(
        2,
        &[
            (&[0, 0], 0.25),
            (&[0, 1], -7.0 / 150.0),
            (&[1, 0], -7.0 / 150.0),
            (&[0, 3], -7.0 / 300.0),
            (&[3, 0], -7.0 / 300.0),
            (&[1, 1], 49.0 / 3750.0),
            (&[3, 3], 49.0 / 7500.0),
        ],
    )
}

pub fn mixed_pair_rho_prime() -> MultiQubitState {
    from_entries(
        2,
        &[
            (&[0, 0], 0.25),
            (&[0, 1], -7.0 / 300.0),
            (&[3, 0], -7.0 / 300.0),
            (&[0, 3], -7.0 / 150.0),
            (&[1, 0], -7.0 / 150.0),
            (&[3, 1], 49.0 / 7500.0),
            (&[1, 3], 49.0 / 3750.0),
        ],
    )
}

/// Expected nonzero reference-form coefficients of the primed mixed state.
pub fn mixed_pair_reference_prime() -> Vec<(Vec<u8>, f64)> {
    let s5 = 5f64.sqrt();
    vec![
        (vec![0, 0], 0.25),
        (vec![0, 3], -7.0 * s5 / 300.0),
        (vec![3, 0], -7.0 * s5 / 300.0),
        (vec![1, 1], -49.0 / 6250.0),
        (vec![1, 3], 49.0 / 18750.0),
        (vec![3, 1], -49.0 / 18750.0),
        (vec![3, 3], 147.0 / 12500.0),
    ]
}

pub fn bell() -> MultiQubitState {
    pure(&[1.0, 0.0, 0.0, 1.0])
}

pub fn ghz(n: usize) -> MultiQubitState {
    let mut a = vec![0.0; 1 << n];
    a[0] = 1.0;
    a[(1 << n) - 1] = 1.0;
    pure(&a)
}

pub fn coefficients(state: &MultiQubitState) -> Vec<f64> {
    to_pauli_coefficients(state, &tol()).unwrap().into_vec()
}

/// `exp(i(a XX + b YY + c ZZ))`; the three terms commute.
pub fn nonlocal_unitary(a: f64, b: f64, c_: f64) -> ComplexMatrix {
    let mut u = ComplexMatrix::identity(4, 4);
    for (axis, t) in [(1u8, a), (2, b), (3, c_)] {
        let p = pauli2(axis).kronecker(&pauli2(axis));
        let factor = ComplexMatrix::identity(4, 4).scale(t.cos()) + ComplexMatrix::from_iterator(4, 4, p.iter().copied()) * Complex64::new(0.0, t.sin());
        u = factor * u;
    }
    u
}

/// Number of nonzero singular values of the realigned operator; a product
/// operator has exactly one.
pub fn operator_schmidt_rank(u: &ComplexMatrix) -> usize {
    let mut realigned = ComplexMatrix::zeros(4, 4);
    for i1 in 0..2 {
        for j1 in 0..2 {
            for i2 in 0..2 {
                for j2 in 0..2 {
                    realigned[(2 * i1 + j1, 2 * i2 + j2)] = u[(2 * i1 + i2, 2 * j1 + j2)];
                }
            }
        }
    }
    realigned.singular_values().iter().filter(|&&s| s > 1e-9).count()
}

pub fn conjugate(u: &ComplexMatrix, rho: &MultiQubitState) -> MultiQubitState {
    let m = u * rho.matrix() * u.adjoint();
    MultiQubitState::new((&m + m.adjoint()).scale(0.5), &tol()).unwrap()
}

/// `(σ1 + σ3)/√2`.
pub fn hadamard() -> Mat2 {
    (pauli2(1) + pauli2(3)).unscale(2f64.sqrt())
}
