//! Phase angles of weak qubits.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{Complex, Matrix2, Matrix4, Vector4};

use super::{CorrelationBlock, SolverError};
use crate::tolerance::Tolerances;

/// `ω_i` for the target qubit from its slice `r_{a_i, 3_j}` against the
/// partner `j`, the other qubit of the block.
///
/// Rotating the target's axes about z by `2ω` maps `(r_{1_i 3_j}, r_{2_i 3_j})`
/// onto the primed slice, so `cos 2ω` and `sin 2ω` are the normalized dot
/// and cross products of the two slices.
pub fn solve_omega_pairwise(block: &CorrelationBlock, target: usize, tol: &Tolerances) -> Result<f64, SolverError> {
    let (x, y) = block.slice(target).ok_or(SolverError::NotInBlock { qubit: target })?;
    let (r33, r33_prime) = (block.c[(2, 2)], block.c_prime[(2, 2)]);
    if (r33_prime - r33).abs() > tol.coef {
        return Err(SolverError::InconsistentCoefficients(format!(
            "r_33 = {r33} but r'_33 = {r33_prime}; phases cannot change it"
        )));
    }
    let den = x[0] * x[0] + x[1] * x[1];
    if den <= tol.coef * tol.coef {
        return Err(SolverError::VanishingDenominator { value: den });
    }
    let den_prime = y[0] * y[0] + y[1] * y[1];
    if (den_prime.sqrt() - den.sqrt()).abs() > tol.coef {
        return Err(SolverError::InconsistentCoefficients(format!(
            "slice norms {} and {} differ",
            den.sqrt(),
            den_prime.sqrt()
        )));
    }
    let cos = (x[0] * y[0] + x[1] * y[1]) / den;
    let sin = (x[0] * y[1] - x[1] * y[0]) / den;
    Ok((sin.atan2(cos) / 2.0).rem_euclid(PI))
}

/// The 4×4 matrix `M` with `M·x = (r'_{11}, r'_{12}, r'_{21}, r'_{22})` for
/// `x = (cos2ω_i cos2ω_j, cos2ω_i sin2ω_j, sin2ω_i cos2ω_j, sin2ω_i sin2ω_j)`,
/// built from the unprimed `{1,2}×{1,2}` block.
pub fn linear_system_matrix(block: &CorrelationBlock) -> Matrix4<f64> {
    let a = |p: usize, q: usize| block.c[(p - 1, q - 1)];
    Matrix4::new(
        a(1, 1), -a(1, 2), -a(2, 1), a(2, 2),
        a(1, 2), a(1, 1), -a(2, 2), -a(2, 1),
        a(2, 1), -a(2, 2), a(1, 1), -a(1, 2),
        a(2, 2), a(2, 1), a(1, 2), a(1, 1),
    )
}

pub(crate) fn trig_vector(omega_i: f64, omega_j: f64) -> Vector4<f64> {
    let (si, ci) = (2.0 * omega_i).sin_cos();
    let (sj, cj) = (2.0 * omega_j).sin_cos();
    Vector4::new(ci * cj, ci * sj, si * cj, si * sj)
}

/// `(ω_i, ω_j)` for the two weak qubits of the block from the `{1,2}×{1,2}`
/// correlations, for use when the `r_{a_i 3_j}` slices vanish.
///
/// The system only fixes `ω_i + ω_j` or `ω_i − ω_j` when one of the two
/// helicity parts of the block vanishes; the representative with `ω_i = 0`
/// is returned then. Otherwise `ω_i` is reported in `[0, π/2)`: shifting both
/// angles by `π/2` solves the same equations.
pub fn solve_omega_linear_system(block: &CorrelationBlock, tol: &Tolerances) -> Result<(f64, f64), SolverError> {
    linear_system_candidates(block, tol).map(|c| c[0])
}

pub(crate) fn linear_system_candidates(block: &CorrelationBlock, tol: &Tolerances) -> Result<Vec<(f64, f64)>, SolverError> {
    let (r33, r33_prime) = (block.c[(2, 2)], block.c_prime[(2, 2)]);
    if (r33_prime - r33).abs() > tol.coef {
        return Err(SolverError::NoConsistentSolution(format!(
            "r_33 = {r33} but r'_33 = {r33_prime}"
        )));
    }
    let a = block.c.fixed_view::<2, 2>(0, 0).into_owned();
    let a_prime = block.c_prime.fixed_view::<2, 2>(0, 0).into_owned();
    let (sum, diff) = helicity(&a);
    let (sum_p, diff_p) = helicity(&a_prime);
    for (t, tp, name) in [(sum, sum_p, "co-rotating"), (diff, diff_p, "counter-rotating")] {
        if (t.norm() - tp.norm()).abs() > tol.coef {
            return Err(SolverError::NoConsistentSolution(format!(
                "{name} parts have magnitudes {} and {}",
                t.norm(),
                tp.norm()
            )));
        }
    }
    let has_sum = sum.norm() > tol.coef;
    let has_diff = diff.norm() > tol.coef;
    let (alpha_i, alpha_j) = match (has_sum, has_diff) {
        (false, false) => return Err(SolverError::AllCoefficientsVanish),
        (true, false) => (0.0, (sum_p / sum).arg()),
        (false, true) => (0.0, -(diff_p / diff).arg()),
        (true, true) => {
            let s = (sum_p / sum).arg();
            let d = (diff_p / diff).arg();
            ((s + d) / 2.0, (s - d) / 2.0)
        }
    };
    let mut omega_i = alpha_i / 2.0;
    let mut omega_j = alpha_j / 2.0;
    let shift = (omega_i / FRAC_PI_2).floor();
    omega_i -= shift * FRAC_PI_2;
    omega_j -= shift * FRAC_PI_2;
    let first = (omega_i.rem_euclid(PI), omega_j.rem_euclid(PI));
    let second = ((first.0 + FRAC_PI_2).rem_euclid(PI), (first.1 + FRAC_PI_2).rem_euclid(PI));
    let predicted = linear_system_matrix(block) * trig_vector(first.0, first.1);
    let target = Vector4::new(a_prime[(0, 0)], a_prime[(0, 1)], a_prime[(1, 0)], a_prime[(1, 1)]);
    let residual = (predicted - target).amax();
    if residual > tol.coef {
        return Err(SolverError::NoConsistentSolution(format!("best angles leave residual {residual:.3e}")));
    }
    Ok(vec![first, second])
}

/// Parts of a 2×2 block picking up `e^{i(α_i+α_j)}` and `e^{i(α_i−α_j)}`
/// under `A ↦ R(α_i) A R(α_j)ᵀ`.
fn helicity(a: &Matrix2<f64>) -> (Complex<f64>, Complex<f64>) {
    let sum = Complex::new(a[(0, 0)] - a[(1, 1)], a[(0, 1)] + a[(1, 0)]);
    let diff = Complex::new(a[(0, 0)] + a[(1, 1)], a[(1, 0)] - a[(0, 1)]);
    (sum, diff)
}
