//! The SU(2) → SO(3) double cover and rotations of Pauli coefficient tensors.

use nalgebra::{Matrix3, Rotation3, UnitQuaternion, Vector3};

use crate::linalg::{pauli2, Complex64, Mat2, I};

pub type Rot3 = Matrix3<f64>;

/// `R_ab = ½ Tr(σ_a U σ_b U†)`, so that `U (v⃗·σ⃗) U† = (R v⃗)·σ⃗`.
pub fn su2_to_so3(u: &Mat2) -> Rot3 {
    let paulis = [pauli2(1), pauli2(2), pauli2(3)];
    let conj: Vec<Mat2> = paulis.iter().map(|s| u * s * u.adjoint()).collect();
    Matrix3::from_fn(|a, b| (paulis[a] * conj[b]).trace().re / 2.0)
}

/// The SU(2) element `cos(ψ/2) − i sin(ψ/2) m̂·σ⃗` covering the rotation by
/// `ψ` about `m̂`.
pub fn so3_to_su2(r: &Rot3) -> Mat2 {
    let q = UnitQuaternion::from_rotation_matrix(&Rotation3::from_matrix_unchecked(*r));
    let (w, x, y, z) = (q.w, q.i, q.j, q.k);
    let s = pauli2(1) * Complex64::from(x) + pauli2(2) * Complex64::from(y) + pauli2(3) * Complex64::from(z);
    Mat2::identity() * Complex64::from(w) - s * I
}

/// Rotation by `alpha` about the z axis.
pub fn rotation_z(alpha: f64) -> Rot3 {
    let (s, c) = alpha.sin_cos();
    Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
}

/// Rotation by `|v|` about `v̂`.
pub(crate) fn rotation_from_vector(v: Vector3<f64>) -> Rot3 {
    Rotation3::new(v).into_inner()
}

/// Rotation by `angle` about the unit vector `axis`.
pub(crate) fn rotation_about(axis: Vector3<f64>, angle: f64) -> Rot3 {
    rotation_from_vector(axis * angle)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum RotationKind {
    /// Any element of SO(3).
    Free,
    /// Rotations about z only.
    AboutZ,
}

/// The rotation `R` of the given kind maximizing `tr(Rᵀ H)`, i.e. the least
/// squares fit of `y_k ≈ R x_k` for `H = Σ y_k x_kᵀ`.
pub(crate) fn best_rotation(h: &Matrix3<f64>, kind: RotationKind) -> Rot3 {
    match kind {
        RotationKind::AboutZ => rotation_z((h[(1, 0)] - h[(0, 1)]).atan2(h[(0, 0)] + h[(1, 1)])),
        RotationKind::Free => {
            let svd = h.svd(true, true);
            let u = svd.u.expect("requested");
            let v_t = svd.v_t.expect("requested");
            let d = (u * v_t).determinant().signum();
            u * Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, d)) * v_t
        }
    }
}

/// Applies `rots[q]` to the Pauli axis of qubit `q` in a coefficient tensor:
/// the coefficients of `(⊗U_q) ρ (⊗U_q)†` when `rots[q]` covers `U_q`.
pub(crate) fn rotate_coefficients(n: usize, r: &[f64], rots: &[Option<Rot3>]) -> Vec<f64> {
    let mut out = r.to_vec();
    for (q, rot) in rots.iter().enumerate() {
        if let Some(rot) = rot {
            apply_on_qubit(n, &mut out, q, rot);
        }
    }
    out
}

/// In-place action of a 3×3 matrix on qubit `q`'s axes 1..=3.
pub(crate) fn apply_on_qubit(n: usize, r: &mut [f64], q: usize, m: &Matrix3<f64>) {
    let stride = 1usize << (2 * (n - 1 - q));
    for base in 0..r.len() {
        if !(base / stride).is_multiple_of(4) {
            continue;
        }
        let x = [r[base + stride], r[base + 2 * stride], r[base + 3 * stride]];
        for a in 0..3 {
            r[base + (a + 1) * stride] = m[(a, 0)] * x[0] + m[(a, 1)] * x[1] + m[(a, 2)] * x[2];
        }
    }
}

/// Infinitesimal generators `L_k` with `exp(t L_k)` the rotation by `t` about axis `k`.
pub(crate) fn generator(k: usize) -> Matrix3<f64> {
    let mut l = Matrix3::zeros();
    let (a, b) = [(1, 2), (2, 0), (0, 1)][k];
    l[(b, a)] = 1.0;
    l[(a, b)] = -1.0;
    l
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::frobenius2;
    use crate::spectral::diagonal_phase;

    #[test]
    fn diagonal_phase_rotates_about_z_by_twice_the_angle() {
        for k in 0..64 {
            let omega = k as f64 * std::f64::consts::PI / 32.0;
            let r = su2_to_so3(&diagonal_phase(omega));
            assert!((r - rotation_z(2.0 * omega)).abs().max() < 1e-14);
        }
    }

    #[test]
    fn double_cover_round_trip() {
        let r = rotation_about(Vector3::new(1.0, -2.0, 0.5).normalize(), 2.1);
        let u = so3_to_su2(&r);
        assert!((su2_to_so3(&u) - r).abs().max() < 1e-14);
        assert!((u.determinant() - Complex64::from(1.0)).norm() < 1e-14);
        let back = so3_to_su2(&su2_to_so3(&u));
        assert!(frobenius2(&(back - u)) < 1e-14 || frobenius2(&(back + u)) < 1e-14);
    }

    #[test]
    fn generators_match_rotations() {
        for k in 0..3 {
            let mut axis = Vector3::zeros();
            axis[k] = 1.0;
            let t = 1e-7;
            let numeric = (rotation_about(axis, t) - Matrix3::identity()) / t;
            assert!((numeric - generator(k)).abs().max() < 1e-6);
        }
    }

    #[test]
    fn best_rotation_recovers_a_known_rotation() {
        let r = rotation_about(Vector3::new(0.3, 0.4, -0.2).normalize(), 1.3);
        let xs = [Vector3::new(1.0, 0.2, 0.0), Vector3::new(-0.3, 0.5, 0.9)];
        let h: Matrix3<f64> = xs.iter().map(|x| (r * x) * x.transpose()).sum();
        assert!((best_rotation(&h, RotationKind::Free) - r).abs().max() < 1e-12);
        let rz = rotation_z(-2.2);
        let h: Matrix3<f64> = xs.iter().map(|x| (rz * x) * x.transpose()).sum();
        assert!((best_rotation(&h, RotationKind::AboutZ) - rz).abs().max() < 1e-12);
    }
}
