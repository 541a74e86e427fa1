//! Decide whether `3/5|00⟩ + 4/5|11⟩` and `(|00⟩ − 7|01⟩ − 7|10⟩ + |11⟩)/10`
//! are LU-equivalent and print the connecting unitaries.

use lueq::linalg::Complex64;
use lueq::protocol::{decide_lu_equivalence, DecisionConfig, Verdict};
use lueq::state::MultiQubitState;
use lueq::tolerance::Tolerances;

fn pure(amplitudes: &[f64]) -> MultiQubitState {
    let v: Vec<Complex64> = amplitudes.iter().map(|&a| Complex64::from(a)).collect();
    MultiQubitState::from_pure(&v, &Tolerances::default()).expect("normalized amplitudes")
}

fn main() {
    let rho = pure(&[0.6, 0.0, 0.0, 0.8]);
    let rho_prime = pure(&[0.1, -0.7, -0.7, 0.1]);
    let (verdict, trace) = decide_lu_equivalence(&rho, &rho_prime, &DecisionConfig::default()).expect("same size");
    for line in &trace.log {
        println!("  {line}");
    }
    match verdict {
        Verdict::Equivalent { unitaries, residual } => {
            println!("equivalent, relative residual {residual:.2e}");
            for (q, u) in unitaries.iter().enumerate() {
                println!("U{} = {u:.6}", q + 1);
            }
        }
        other => println!("{other:?}"),
    }
}
