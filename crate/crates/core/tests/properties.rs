mod common;

use common::tol;
use lueq::linalg::{frobenius, kron_all, unitarity_defect, Mat2};
use lueq::oracle::{random_local_unitary, random_state};
use lueq::pauli::{from_pauli_coefficients, to_pauli_coefficients};
use lueq::protocol::{apply_local_unitary, decide_lu_equivalence, DecisionConfig};
use lueq::reduction::{partial_trace, partial_trace_dense};
use lueq::spectral::diagonalize_qubit;
use lueq::state::MultiQubitState;
use proptest::prelude::*;

fn state(n: usize, rank_pick: usize, seed: u64) -> MultiQubitState {
    let rank = 1 + rank_pick % (1 << n);
    random_state(n, rank, seed).unwrap()
}

fn subset(n: usize, mask: u32) -> Vec<usize> {
    let keep: Vec<usize> = (0..n).filter(|q| mask & (1 << q) != 0).collect();
    if keep.is_empty() {
        vec![0]
    } else {
        keep
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pauli_round_trip(n in 1usize..=4, rank in 0usize..16, seed in any::<u64>()) {
        let rho = state(n, rank, seed);
        let back = from_pauli_coefficients(&to_pauli_coefficients(&rho, &tol()).unwrap(), &tol()).unwrap();
        prop_assert!(frobenius(&(back.matrix() - rho.matrix())) < 1e-12);
    }

    #[test]
    fn purity_is_the_scaled_sum_of_squares(n in 1usize..=4, rank in 0usize..16, seed in any::<u64>()) {
        let rho = state(n, rank, seed);
        let r = to_pauli_coefficients(&rho, &tol()).unwrap();
        let scaled = (1usize << n) as f64 * r.sum_of_squares();
        prop_assert!((scaled - rho.purity()).abs() < 1e-12);
    }

    #[test]
    fn partial_trace_keeps_unit_trace_and_chains(n in 2usize..=4, rank in 0usize..16, seed in any::<u64>(), mask in 1u32..16) {
        let rho = state(n, rank, seed);
        let keep = subset(n, mask);
        let reduced = partial_trace(&rho, &keep).unwrap();
        prop_assert!((reduced.state.matrix().trace().re - 1.0).abs() < 1e-12);
        prop_assert_eq!(&reduced.origin, &keep);
        let dense = partial_trace_dense(&rho, &keep).unwrap();
        prop_assert!(frobenius(&(dense.matrix() - reduced.state.matrix())) < 1e-13);
        if keep.len() > 1 {
            let inner = vec![keep.len() - 1];
            let chained = partial_trace(&reduced.state, &inner).unwrap();
            let direct = partial_trace(&rho, &[*keep.last().unwrap()]).unwrap();
            prop_assert!(frobenius(&(chained.state.matrix() - direct.state.matrix())) < 1e-13);
        }
    }

    #[test]
    fn reduced_coefficients_are_identity_padded_slices(n in 2usize..=4, rank in 0usize..16, seed in any::<u64>(), mask in 1u32..16) {
        let rho = state(n, rank, seed);
        let keep = subset(n, mask);
        let r = to_pauli_coefficients(&rho, &tol()).unwrap();
        let reduced = to_pauli_coefficients(&partial_trace(&rho, &keep).unwrap().state, &tol()).unwrap();
        let scale = (1usize << (n - keep.len())) as f64;
        for (offset, value) in reduced.as_slice().iter().enumerate() {
            let mut full = 0usize;
            for (slot, &q) in keep.iter().enumerate() {
                let digit = (offset >> (2 * (keep.len() - 1 - slot))) & 3;
                full |= digit << (2 * (n - 1 - q));
            }
            prop_assert!((value - scale * r.as_slice()[full]).abs() < 1e-13);
        }
    }

    #[test]
    fn partial_trace_is_lu_covariant(n in 2usize..=4, rank in 0usize..16, seed in any::<u64>(), mask in 1u32..16) {
        let rho = state(n, rank, seed);
        let keep = subset(n, mask);
        let us = random_local_unitary(n, seed ^ 0x5eed);
        let moved = partial_trace(&apply_local_unitary(&rho, &us).unwrap(), &keep).unwrap().state;
        let kept: Vec<Mat2> = keep.iter().map(|&q| us[q]).collect();
        let u = kron_all(&kept);
        let reduced = partial_trace(&rho, &keep).unwrap().state;
        let expected = &u * reduced.matrix() * u.adjoint();
        prop_assert!(frobenius(&(moved.matrix() - expected)) < 1e-12);
    }

    #[test]
    fn diagonalizers_are_unitary_and_order_the_spectrum(rank in 0usize..2, seed in any::<u64>()) {
        let rho = state(1, rank, seed);
        let d = diagonalize_qubit(&rho, &tol()).unwrap();
        prop_assert!(unitarity_defect(&d.v) < 1e-12);
        let m = Mat2::from_fn(|r, c| rho.matrix()[(r, c)]);
        let diag = d.v.adjoint() * m * d.v;
        prop_assert!(diag[(0, 1)].norm() < 1e-12 && diag[(1, 0)].norm() < 1e-12);
        prop_assert!((diag[(0, 0)].re - d.lambda[0]).abs() < 1e-12);
        prop_assert!((diag[(1, 1)].re - d.lambda[1]).abs() < 1e-12);
        prop_assert!(d.lambda[0] <= d.lambda[1]);
        prop_assert!(d.v[(1, 0)].im == 0.0 && d.v[(1, 0)].re >= 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn decisions_are_deterministic(n in 2usize..=3, rank in 0usize..8, seed in any::<u64>()) {
        let rho = state(n, rank, seed);
        let moved = apply_local_unitary(&rho, &random_local_unitary(n, seed.wrapping_add(1))).unwrap();
        let first = decide_lu_equivalence(&rho, &moved, &DecisionConfig::default()).unwrap();
        let second = decide_lu_equivalence(&rho, &moved, &DecisionConfig::default()).unwrap();
        prop_assert!(first.0.is_equivalent());
        prop_assert_eq!(first, second);
    }
}
