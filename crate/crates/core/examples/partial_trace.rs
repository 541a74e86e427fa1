//! Partial traces of a random three-qubit state onto every qubit subset.

use lueq::oracle::random_state;
use lueq::reduction::partial_trace;

fn main() {
    let rho = random_state(3, 2, 5).unwrap();
    for keep in [vec![0], vec![1], vec![2], vec![0, 1], vec![0, 2], vec![1, 2]] {
        let reduced = partial_trace(&rho, &keep).unwrap();
        println!("keep {:?}: purity {:.6}, spectrum {:.6?}", reduced.origin, reduced.state.purity(), reduced.state.spectrum());
    }
}
