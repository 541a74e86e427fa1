//! Bell and GHZ states have maximally mixed marginals, so every qubit carries
//! a full SU(2) of symmetries. The pipeline still recovers random local
//! conjugations.

use lueq::linalg::Complex64;
use lueq::oracle::random_local_unitary;
use lueq::protocol::{apply_local_unitary, decide_lu_equivalence, DecisionConfig, Verdict};
use lueq::state::MultiQubitState;
use lueq::tolerance::Tolerances;

fn ghz(n: usize) -> MultiQubitState {
    let mut a = vec![Complex64::from(0.0); 1 << n];
    a[0] = Complex64::from(0.5f64.sqrt());
    a[(1 << n) - 1] = Complex64::from(0.5f64.sqrt());
    MultiQubitState::from_pure(&a, &Tolerances::default()).unwrap()
}

fn main() {
    for n in 2..=4 {
        let rho = ghz(n);
        let rho_prime = apply_local_unitary(&rho, &random_local_unitary(n, 3)).unwrap();
        let (verdict, trace) = decide_lu_equivalence(&rho, &rho_prime, &DecisionConfig::default()).unwrap();
        let methods: Vec<String> = trace
            .qubits
            .iter()
            .map(|q| q.note.map_or("-".into(), |note| note.method.to_string()))
            .collect();
        match verdict {
            Verdict::Equivalent { residual, .. } => println!("GHZ({n}): equivalent, residual {residual:.2e}, methods {methods:?}"),
            other => println!("GHZ({n}): {other:?}"),
        }
    }
}
