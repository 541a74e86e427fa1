//! Pauli expansion of a GHZ state, its Bloch vectors and a correlation lookup.

use lueq::linalg::Complex64;
use lueq::pauli::{bloch_vector, correlation_coefficient, to_pauli_coefficients};
use lueq::reduction::partial_trace;
use lueq::state::MultiQubitState;
use lueq::tolerance::Tolerances;

fn main() {
    let tol = Tolerances::default();
    let s = 0.5f64.sqrt();
    let mut amplitudes = vec![Complex64::from(0.0); 8];
    amplitudes[0] = Complex64::from(s);
    amplitudes[7] = Complex64::from(s);
    let ghz = MultiQubitState::from_pure(&amplitudes, &tol).unwrap();
    let r = to_pauli_coefficients(&ghz, &tol).unwrap();
    for (index, value) in r.nonzero(tol.coef) {
        println!("r{index} = {value:+.6}");
    }
    println!("sum of squares times 2^n = {:.6} (purity)", 8.0 * r.sum_of_squares());
    println!("r(z on 1, z on 3) = {}", correlation_coefficient(&r, &[(0, 3), (2, 3)]).unwrap());
    let marginal = partial_trace(&ghz, &[1]).unwrap().state;
    println!("Bloch vector of qubit 2: {:?}", bloch_vector(&marginal).unwrap());
}
