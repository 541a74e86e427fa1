use crate::error::{Error, Result};
use crate::linalg::{conjugate_local, unitarity_defect, Mat2};
use crate::state::MultiQubitState;

const UNITARITY_GATE: f64 = 1e-10;

/// `(⊗V_i†) ρ (⊗V_i)`: the state expressed in the eigenbases of its one-qubit
/// marginals, given the per-qubit diagonalizers.
///
/// Computed one qubit at a time, which agrees with conjugating by the
/// assembled Kronecker product.
pub fn reference_form(state: &MultiQubitState, diagonalizers: &[Mat2]) -> Result<MultiQubitState> {
    if diagonalizers.len() != state.n() {
        return Err(Error::ArityMismatch {
            left: state.n(),
            right: diagonalizers.len(),
        });
    }
    check_unitaries(diagonalizers)?;
    let inverse: Vec<Option<Mat2>> = diagonalizers.iter().map(|v| Some(v.adjoint())).collect();
    let m = conjugate_local(state.matrix(), &inverse);
    Ok(MultiQubitState::from_matrix_unchecked(state.n(), m))
}

pub(crate) fn check_unitaries(unitaries: &[Mat2]) -> Result<()> {
    for (qubit, u) in unitaries.iter().enumerate() {
        let deviation = unitarity_defect(u);
        if deviation.is_nan() || deviation > UNITARITY_GATE {
            return Err(Error::NonUnitaryInput { qubit, deviation });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{Complex64, ComplexMatrix};
    use crate::oracle::{random_local_unitary, random_state};
    use crate::pauli::{bloch_vector, from_pauli_coefficients, to_pauli_coefficients, PauliCoefficients};
    use crate::reduction::partial_trace;
    use crate::spectral::diagonalize_qubit;
    use crate::tolerance::Tolerances;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn diagonalizers(state: &MultiQubitState) -> Vec<Mat2> {
        (0..state.n())
            .map(|q| diagonalize_qubit(&partial_trace(state, &[q]).unwrap().state, &tol()).unwrap().v)
            .collect()
    }

    fn real(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn already_diagonal_marginals_are_unchanged() {
        let amps = [real(0.6), real(0.0), real(0.0), real(0.8)];
        let rho = MultiQubitState::from_pure(&amps, &tol()).unwrap();
        let vs = diagonalizers(&rho);
        assert_eq!(vs, vec![Mat2::identity(); 2]);
        let r = reference_form(&rho, &vs).unwrap();
        assert_eq!(r.matrix(), rho.matrix());
    }

    #[test]
    fn mixed_example_reference_coefficients() {
        let rho_prime = from_pauli_coefficients(
            &PauliCoefficients::from_entries(
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
            .unwrap(),
            &tol(),
        )
        .unwrap();
        let r = to_pauli_coefficients(&reference_form(&rho_prime, &diagonalizers(&rho_prime)).unwrap(), &tol()).unwrap();
        let s5 = 5f64.sqrt();
        let expected = PauliCoefficients::from_entries(
            2,
            &[
                (&[0, 0], 0.25),
                (&[0, 3], -7.0 * s5 / 300.0),
                (&[3, 0], -7.0 * s5 / 300.0),
                (&[1, 1], -49.0 / 6250.0),
                (&[1, 3], 49.0 / 18750.0),
                (&[3, 1], -49.0 / 18750.0),
                (&[3, 3], 147.0 / 12500.0),
            ],
        )
        .unwrap();
        for (a, b) in r.as_slice().iter().zip(expected.as_slice()) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn marginals_become_diagonal() {
        for seed in 0..20 {
            let n = 1 + seed as usize % 4;
            let rho = random_state(n, 1 + seed as usize % 2, seed).unwrap();
            let r = reference_form(&rho, &diagonalizers(&rho)).unwrap();
            for q in 0..n {
                let b = bloch_vector(&partial_trace(&r, &[q]).unwrap().state).unwrap();
                assert!(b.r1.abs() <= 1e-9 && b.r2.abs() <= 1e-9 && b.r3 <= 1e-12);
            }
        }
    }

    #[test]
    fn reduced_reference_forms_commute_with_tracing() {
        for seed in 0..20 {
            let n = 2 + seed as usize % 3;
            let rho = random_state(n, 1 + seed as usize % 4, seed + 40).unwrap();
            let vs = diagonalizers(&rho);
            let full = reference_form(&rho, &vs).unwrap();
            let subsets: Vec<Vec<usize>> = vec![vec![0], vec![0, n - 1], (1..n).collect()];
            for keep in subsets {
                let left = partial_trace(&full, &keep).unwrap().state;
                let restricted: Vec<Mat2> = keep.iter().map(|&q| vs[q]).collect();
                let right = reference_form(&partial_trace(&rho, &keep).unwrap().state, &restricted).unwrap();
                let diff = (left.matrix() - right.matrix()).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                assert!(diff <= 1e-12, "{keep:?}: {diff}");
            }
        }
    }

    #[test]
    fn agrees_with_the_assembled_kronecker_product() {
        let rho = random_state(3, 2, 9).unwrap();
        let vs = random_local_unitary(3, 10);
        let big = crate::linalg::kron_all(&vs);
        let dense: ComplexMatrix = big.adjoint() * rho.matrix() * &big;
        let r = reference_form(&rho, &vs).unwrap();
        assert!((r.matrix() - dense).iter().all(|z| z.norm() < 1e-14));
    }

    #[test]
    fn maximally_mixed_marginals_leave_the_state_alone() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell = MultiQubitState::from_pure(&[real(s), real(0.0), real(0.0), real(s)], &tol()).unwrap();
        let r = reference_form(&bell, &diagonalizers(&bell)).unwrap();
        assert_eq!(r.matrix(), bell.matrix());
    }

    #[test]
    fn argument_checks() {
        let rho = MultiQubitState::maximally_mixed(2);
        assert_eq!(
            reference_form(&rho, &[Mat2::identity()]).unwrap_err(),
            Error::ArityMismatch { left: 2, right: 1 }
        );
        let skew = Mat2::new(real(1.0), real(1e-6), real(0.0), real(1.0));
        assert!(matches!(
            reference_form(&rho, &[Mat2::identity(), skew]),
            Err(Error::NonUnitaryInput { qubit: 1, .. })
        ));
    }
}
