//! Round trips on random states: conjugate by random local unitaries and
//! decide the pair.

use std::time::Instant;

use lueq::oracle::{random_local_unitary, random_state};
use lueq::protocol::{apply_local_unitary, decide_lu_equivalence, DecisionConfig, Verdict};

fn main() {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let trials = 60;
    for k in 0..trials {
        let n = 2 + k % 3;
        let rank = [1, 2, 1 << n][(k / 3) % 3];
        let rho = random_state(n, rank, k as u64).unwrap();
        let rho_prime = apply_local_unitary(&rho, &random_local_unitary(n, 100 + k as u64)).unwrap();
        match decide_lu_equivalence(&rho, &rho_prime, &DecisionConfig::default()).unwrap().0 {
            Verdict::Equivalent { residual, .. } => worst = worst.max(residual),
            other => println!("trial {k} (n = {n}, rank {rank}): {other:?}"),
        }
    }
    println!("{trials} pairs, worst residual {worst:.2e}, {:?}", start.elapsed());
}
