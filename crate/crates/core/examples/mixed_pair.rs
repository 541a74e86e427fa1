//! A pair of mixed two-qubit states given by their Pauli coefficients. The
//! second qubit is related by a Hadamard-like rotation `(σ1 + σ3)/√2`.

use lueq::pauli::{from_pauli_coefficients, PauliCoefficients};
use lueq::protocol::{decide_lu_equivalence, DecisionConfig, Verdict};
use lueq::solver::ResidualUnitary;
use lueq::tolerance::Tolerances;

fn main() {
    let tol = Tolerances::default();
    let state = |entries: &[(&[u8], f64)]| {
        from_pauli_coefficients(&PauliCoefficients::from_entries(2, entries).unwrap(), &tol).unwrap()
    };
    let rho = state(&[
        (&[0, 0], 0.25),
        (&[0, 1], -7.0 / 150.0),
        (&[1, 0], -7.0 / 150.0),
        (&[0, 3], -7.0 / 300.0),
        (&[3, 0], -7.0 / 300.0),
        (&[1, 1], 49.0 / 3750.0),
        (&[3, 3], 49.0 / 7500.0),
    ]);
    let rho_prime = state(&[
        (&[0, 0], 0.25),
        (&[0, 1], -7.0 / 300.0),
        (&[3, 0], -7.0 / 300.0),
        (&[0, 3], -7.0 / 150.0),
        (&[1, 0], -7.0 / 150.0),
        (&[3, 1], 49.0 / 7500.0),
        (&[1, 3], 49.0 / 3750.0),
    ]);
    let (verdict, trace) = decide_lu_equivalence(&rho, &rho_prime, &DecisionConfig::default()).unwrap();
    for q in &trace.qubits {
        if let Some(ResidualUnitary::DiagonalPhase { omega }) = q.residual {
            println!("qubit {}: omega = {omega:.12}", q.qubit + 1);
        }
    }
    if let Verdict::Equivalent { unitaries, .. } = verdict {
        println!("U1 = {:.6}U2 = {:.6}", unitaries[0], unitaries[1]);
    }
}
