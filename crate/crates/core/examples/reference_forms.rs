//! Diagonalize every one-qubit marginal and conjugate the state into its
//! reference form, whose marginals are then diagonal.

use lueq::oracle::random_state;
use lueq::pauli::{bloch_vector, to_pauli_coefficients};
use lueq::reduction::partial_trace;
use lueq::reference::reference_form;
use lueq::spectral::diagonalize_qubit;
use lueq::tolerance::Tolerances;

fn main() {
    let tol = Tolerances::default();
    let rho = random_state(2, 3, 21).unwrap();
    let diagonalizers: Vec<_> = (0..rho.n())
        .map(|q| {
            let d = diagonalize_qubit(&partial_trace(&rho, &[q]).unwrap().state, &tol).unwrap();
            println!("qubit {}: lambda = {:.6?}\nV = {}", q + 1, d.lambda, d.v);
            d.v
        })
        .collect();
    let reference = reference_form(&rho, &diagonalizers).unwrap();
    for q in 0..rho.n() {
        println!("reference marginal {}: {:?}", q + 1, bloch_vector(&partial_trace(&reference, &[q]).unwrap().state).unwrap());
    }
    for (index, value) in to_pauli_coefficients(&reference, &tol).unwrap().nonzero(1e-3) {
        println!("r{index} = {value:+.6}");
    }
}
