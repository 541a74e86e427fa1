//! The brute-force search over local unitaries: it rediscovers a local
//! conjugation and finds a clear gap for a nonlocal one.

use lueq::linalg::{Complex64, ComplexMatrix};
use lueq::oracle::{brute_force_lu_search, random_local_unitary, random_state};
use lueq::protocol::apply_local_unitary;
use lueq::state::MultiQubitState;
use lueq::tolerance::Tolerances;

fn main() {
    let rho = random_state(2, 2, 8).unwrap();
    let local = apply_local_unitary(&rho, &random_local_unitary(2, 1)).unwrap();
    let found = brute_force_lu_search(&rho, &local, 64, 0).unwrap();
    println!("local partner: residual {:.2e} from start {}", found.residual, found.start);

    // CNOT is not a product of one-qubit gates.
    let mut cnot = ComplexMatrix::zeros(4, 4);
    for (r, c) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
        cnot[(r, c)] = Complex64::from(1.0);
    }
    let moved = &cnot * rho.matrix() * cnot.adjoint();
    let nonlocal = MultiQubitState::new(moved, &Tolerances::default()).unwrap();
    let best = brute_force_lu_search(&rho, &nonlocal, 64, 0).unwrap();
    println!("CNOT partner: best residual {:.4}", best.residual);
}
