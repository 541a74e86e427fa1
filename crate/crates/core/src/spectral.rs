//! One-qubit spectra, diagonalizers, cyclic operators and the SU(2) parameters.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{pauli2, Complex64, Mat2, I, ZERO};
use crate::pauli::{bloch_of, BlochVector};
use crate::state::MultiQubitState;
use crate::tolerance::Tolerances;

/// `ρ = V diag(λ1, λ2) V†` with `λ1 ≤ λ2`; column `j` of `v` is the
/// eigenvector for `lambda[j]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagonalization {
    pub lambda: [f64; 2],
    pub v: Mat2,
    /// `λ2 − λ1` fell below the degeneracy gate, so `v` is the identity.
    pub degenerate: bool,
}

fn require_one_qubit(rho: &MultiQubitState) -> Result<()> {
    if rho.n() != 1 {
        return Err(Error::WrongArity { expected: 1, got: rho.n() });
    }
    Ok(())
}

/// Closed-form diagonalization from the Bloch vector.
///
/// The eigenvector for `λ1` points along `−r̂`. Each eigenvector has its
/// second entry made real and non-negative (the first entry if the second
/// vanishes).
pub fn diagonalize_qubit(rho: &MultiQubitState, tol: &Tolerances) -> Result<Diagonalization> {
    require_one_qubit(rho)?;
    Ok(diagonalize_bloch(&bloch_of(rho.matrix()), rho.matrix().trace().re, tol))
}

pub(crate) fn diagonalize_bloch(b: &BlochVector, trace: f64, tol: &Tolerances) -> Diagonalization {
    let norm = b.norm();
    let lambda = [(trace - norm) / 2.0, (trace + norm) / 2.0];
    if norm <= tol.degen {
        return Diagonalization {
            lambda,
            v: Mat2::identity(),
            degenerate: true,
        };
    }
    let dir = [b.r1 / norm, b.r2 / norm, b.r3 / norm];
    let low = eigenvector_along([-dir[0], -dir[1], -dir[2]]);
    let high = eigenvector_along(dir);
    Diagonalization {
        lambda,
        v: Mat2::new(low[0], high[0], low[1], high[1]),
        degenerate: false,
    }
}

/// The spinor whose Bloch vector is the unit vector `m`, in the phase
/// convention above.
fn eigenvector_along(m: [f64; 3]) -> [Complex64; 2] {
    let [mx, my, mz] = m;
    let a = [Complex64::from(1.0 + mz), Complex64::new(mx, my)];
    let b = [Complex64::new(mx, -my), Complex64::from(1.0 - mz)];
    let norm = |v: &[Complex64; 2]| (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    let v = if norm(&a) >= norm(&b) { a } else { b };
    let s = norm(&v);
    let v = [v[0] / s, v[1] / s];
    if v[1].norm() > 1e-12 {
        [v[0] * (v[1].conj() / v[1].norm()), Complex64::from(v[1].norm())]
    } else {
        [Complex64::from(v[0].norm()), v[1] * (v[0].conj() / v[0].norm())]
    }
}

/// `‖ρ − ½·1‖_F ≤ tol`.
pub fn is_maximally_mixed(rho: &MultiQubitState, tol: f64) -> Result<bool> {
    require_one_qubit(rho)?;
    // ‖ρ − ½·1‖_F = ‖r⃗‖ / √2.
    Ok(bloch_of(rho.matrix()).norm() / 2f64.sqrt() <= tol)
}

/// `cos ω · 1 + i sin ω · (r̂·σ⃗)`, a unitary commuting with `rho`.
pub fn cyclic_operator(rho: &MultiQubitState, omega: f64, tol: &Tolerances) -> Result<Mat2> {
    require_one_qubit(rho)?;
    let b = bloch_of(rho.matrix());
    let norm = b.norm();
    if norm <= tol.degen {
        return Err(Error::DegenerateState);
    }
    let axis = [b.r1 / norm, b.r2 / norm, b.r3 / norm];
    Ok(axis_exponential(omega, axis))
}

/// `exp(i t n̂·σ⃗) = cos t · 1 + i sin t · n̂·σ⃗`.
pub(crate) fn axis_exponential(t: f64, axis: [f64; 3]) -> Mat2 {
    let ns = pauli2(1) * Complex64::from(axis[0]) + pauli2(2) * Complex64::from(axis[1]) + pauli2(3) * Complex64::from(axis[2]);
    Mat2::identity() * Complex64::from(t.cos()) + ns * (I * t.sin())
}

/// `U(ω) = diag(e^{−iω}, e^{iω})`.
pub fn diagonal_phase(omega: f64) -> Mat2 {
    Mat2::new(Complex64::from_polar(1.0, -omega), ZERO, ZERO, Complex64::from_polar(1.0, omega))
}

/// `U = exp(i (φ/2) n̂·σ⃗)` with `n̂ = (cos φ_az sin θ, sin φ_az sin θ, cos θ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Su2Params {
    /// Rotation angle in `[0, π]`.
    pub phi: f64,
    /// Polar angle in `[0, π]`.
    pub theta: f64,
    /// Azimuth in `[0, 2π)`.
    pub phi_az: f64,
}

impl Su2Params {
    pub const IDENTITY: Self = Self {
        phi: 0.0,
        theta: 0.0,
        phi_az: 0.0,
    };

    pub fn new(phi: f64, theta: f64, phi_az: f64) -> Result<Self> {
        let p = Self { phi, theta, phi_az };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let check = |name, value: f64, ok: bool, range| {
            if ok {
                Ok(())
            } else {
                Err(Error::ParamOutOfRange { name, value, range })
            }
        };
        check("phi", self.phi, (0.0..=PI).contains(&self.phi), "[0, π]")?;
        check("theta", self.theta, (0.0..=PI).contains(&self.theta), "[0, π]")?;
        check("phi_az", self.phi_az, (0.0..2.0 * PI).contains(&self.phi_az), "[0, 2π)")
    }

    pub fn axis(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sa, ca) = self.phi_az.sin_cos();
        [ca * st, sa * st, ct]
    }

    /// Parameters of an SU(2) element, up to the sign `U ↦ −U`.
    pub fn from_unitary(u: &Mat2) -> Self {
        let det = u.determinant();
        let u = u * Complex64::from_polar(1.0, -det.arg() / 2.0);
        // u = c·1 + i s⃗·σ⃗ with c, s⃗ real.
        let mut c = (u[(0, 0)] + u[(1, 1)]).re / 2.0;
        let mut s = [
            (u[(0, 1)] + u[(1, 0)]).im / 2.0,
            (u[(0, 1)] - u[(1, 0)]).re / 2.0,
            (u[(0, 0)] - u[(1, 1)]).im / 2.0,
        ];
        if c < 0.0 {
            c = -c;
            s = s.map(|x| -x);
        }
        let s_norm = (s[0] * s[0] + s[1] * s[1] + s[2] * s[2]).sqrt();
        if s_norm == 0.0 {
            return Self::IDENTITY;
        }
        let phi = 2.0 * s_norm.atan2(c);
        let theta = (s[0] * s[0] + s[1] * s[1]).sqrt().atan2(s[2]);
        let phi_az = s[1].atan2(s[0]).rem_euclid(2.0 * PI);
        let phi_az = if phi_az >= 2.0 * PI { 0.0 } else { phi_az };
        Self { phi, theta, phi_az }
    }
}

pub fn su2_from_params(p: &Su2Params) -> Result<Mat2> {
    p.validate()?;
    Ok(axis_exponential(p.phi / 2.0, p.axis()))
}

/// Infallible form for parameters produced internally.
pub(crate) fn su2_matrix(p: &Su2Params) -> Mat2 {
    axis_exponential(p.phi / 2.0, p.axis())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{frobenius2, unitarity_defect, ComplexMatrix, ONE};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    /// `½(1 + r⃗·σ⃗)`.
    fn qubit(r: [f64; 3]) -> MultiQubitState {
        let c = Complex64::from;
        let m = (Mat2::identity() + pauli2(1) * c(r[0]) + pauli2(2) * c(r[1]) + pauli2(3) * c(r[2])) * c(0.5);
        MultiQubitState::new(ComplexMatrix::from_iterator(2, 2, m.iter().copied()), &tol()).unwrap()
    }

    fn as_mat2(s: &MultiQubitState) -> Mat2 {
        let m = s.matrix();
        Mat2::new(m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)])
    }

    fn random_bloch(rng: &mut ChaCha8Rng) -> [f64; 3] {
        loop {
            let r: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
            let norm = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
            if norm > 1e-3 && norm <= 1.0 {
                return r;
            }
        }
    }

    #[test]
    fn diagonalizer_of_the_pure_example_marginal() {
        let d = diagonalize_qubit(&qubit([-0.28, 0.0, 0.0]), &tol()).unwrap();
        assert!((d.lambda[0] - 9.0 / 25.0).abs() < 1e-15);
        assert!((d.lambda[1] - 16.0 / 25.0).abs() < 1e-15);
        let s = Complex64::from(FRAC_1_SQRT_2);
        let expected = Mat2::new(s, -s, s, s);
        assert!(frobenius2(&(d.v - expected)) < 1e-15);
        assert!(!d.degenerate);
    }

    #[test]
    fn diagonal_input_keeps_the_identity() {
        let d = diagonalize_qubit(&qubit([0.0, 0.0, -0.28]), &tol()).unwrap();
        assert_eq!(d.v, Mat2::identity());
        assert!((d.lambda[0] - 9.0 / 25.0).abs() < 1e-15);
        let mm = diagonalize_qubit(&qubit([0.0; 3]), &tol()).unwrap();
        assert!(mm.degenerate);
        assert_eq!(mm.v, Mat2::identity());
        assert_eq!(mm.lambda, [0.5, 0.5]);
    }

    #[test]
    fn diagonalizer_of_the_mixed_example_marginal() {
        // V1 printed with closed-form surds.
        let d = diagonalize_qubit(&qubit([-14.0 / 75.0, 0.0, -7.0 / 75.0]), &tol()).unwrap();
        let s5 = 5f64.sqrt();
        let expected = Mat2::new(
            Complex64::from((1.0 + s5) / (10.0 + 2.0 * s5).sqrt()),
            Complex64::from((1.0 - s5) / (10.0 - 2.0 * s5).sqrt()),
            Complex64::from(2f64.sqrt() / (5.0 + s5).sqrt()),
            Complex64::from(2f64.sqrt() / (5.0 - s5).sqrt()),
        );
        assert!(frobenius2(&(d.v - expected)) < 1e-14);
        assert!((d.lambda[0] - (0.5 - 7.0 * s5 / 150.0)).abs() < 1e-15);
    }

    #[test]
    fn diagonalization_invariants_on_random_qubits() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..500 {
            let r = random_bloch(&mut rng);
            let rho = qubit(r);
            let d = diagonalize_qubit(&rho, &tol()).unwrap();
            assert!(unitarity_defect(&d.v) < 1e-12);
            let diag = Mat2::new(Complex64::from(d.lambda[0]), ZERO, ZERO, Complex64::from(d.lambda[1]));
            assert!(frobenius2(&(d.v * diag * d.v.adjoint() - as_mat2(&rho))) < 1e-12);
            assert!((d.lambda[0] + d.lambda[1] - 1.0).abs() < 1e-10);
            assert!(d.lambda[0] >= -1e-9 && d.lambda[0] <= 0.5 && d.lambda[1] <= 1.0 + 1e-9);
            let norm = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
            assert!((norm - (2.0 * d.lambda[0] - 1.0).abs()).abs() < 1e-10);
        }
    }

    #[test]
    fn wrong_arity() {
        let two = MultiQubitState::maximally_mixed(2);
        assert_eq!(diagonalize_qubit(&two, &tol()).unwrap_err(), Error::WrongArity { expected: 1, got: 2 });
        assert!(is_maximally_mixed(&two, 1e-9).is_err());
        assert!(cyclic_operator(&two, 0.1, &tol()).is_err());
    }

    #[test]
    fn maximal_mixedness_gate() {
        assert!(is_maximally_mixed(&qubit([0.0; 3]), 1e-9).unwrap());
        assert!(!is_maximally_mixed(&qubit([0.0, 0.0, -0.28]), 1e-9).unwrap());
        assert!(is_maximally_mixed(&qubit([0.0, 0.0, 2e-12]), 1e-9).unwrap());
    }

    #[test]
    fn cyclic_operator_examples() {
        let u = cyclic_operator(&qubit([0.0, 0.0, 1.0]), PI / 4.0, &tol()).unwrap();
        let expected = Mat2::new(Complex64::from_polar(1.0, PI / 4.0), ZERO, ZERO, Complex64::from_polar(1.0, -PI / 4.0));
        assert!(frobenius2(&(u - expected)) < 1e-15);
        let rho = qubit([-14.0 / 75.0, 0.0, -7.0 / 75.0]);
        let u = cyclic_operator(&rho, 0.3, &tol()).unwrap();
        let m = as_mat2(&rho);
        assert!(frobenius2(&(u * m - m * u)) <= 1e-12);
        assert!(frobenius2(&(cyclic_operator(&rho, 0.0, &tol()).unwrap() - Mat2::identity())) < 1e-15);
        assert_eq!(cyclic_operator(&qubit([0.0; 3]), 0.3, &tol()).unwrap_err(), Error::DegenerateState);
    }

    #[test]
    fn commutation_with_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..1000 {
            let rho = qubit(random_bloch(&mut rng));
            let omega = rng.random_range(-PI..PI);
            let u = cyclic_operator(&rho, omega, &tol()).unwrap();
            let m = as_mat2(&rho);
            assert!(frobenius2(&(u * m - m * u)) <= 1e-12);
        }
    }

    #[test]
    fn diagonalizer_turns_cyclic_operators_into_phases() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let rho = qubit(random_bloch(&mut rng));
            let omega = rng.random_range(-PI..PI);
            let v = diagonalize_qubit(&rho, &tol()).unwrap().v;
            let u = cyclic_operator(&rho, omega, &tol()).unwrap();
            assert!(frobenius2(&(v.adjoint() * u * v - diagonal_phase(omega))) <= 1e-10);
            assert!(frobenius2(&(v.adjoint() * u.adjoint() * v - diagonal_phase(-omega))) <= 1e-10);
            assert!(frobenius2(&(v * diagonal_phase(omega) * v.adjoint() - u)) <= 1e-10);
        }
    }

    #[test]
    fn diagonal_phase_action_on_paulis() {
        for k in 0..64 {
            let omega = 2.0 * PI * k as f64 / 64.0;
            let u = diagonal_phase(omega);
            let (s, c) = (2.0 * omega).sin_cos();
            let act = |a: u8| u * pauli2(a) * u.adjoint();
            let s1 = pauli2(1) * Complex64::from(c) + pauli2(2) * Complex64::from(s);
            let s2 = pauli2(1) * Complex64::from(-s) + pauli2(2) * Complex64::from(c);
            assert!(frobenius2(&(act(1) - s1)) <= 1e-12);
            assert!(frobenius2(&(act(2) - s2)) <= 1e-12);
            assert!(frobenius2(&(act(3) - pauli2(3))) <= 1e-12);
        }
    }

    #[test]
    fn su2_examples() {
        assert_eq!(su2_from_params(&Su2Params::IDENTITY).unwrap(), Mat2::identity());
        let u = su2_from_params(&Su2Params::new(PI, PI / 2.0, 0.0).unwrap()).unwrap();
        assert!(frobenius2(&(u - pauli2(1) * I)) < 1e-15);
        assert!(matches!(
            Su2Params::new(4.0, 0.0, 0.0),
            Err(Error::ParamOutOfRange { name: "phi", .. })
        ));
        assert!(Su2Params::new(1.0, 0.0, 2.0 * PI).is_err());
        assert!(Su2Params::new(1.0, -0.1, 0.0).is_err());
    }

    /// Taylor series of `exp(A)`, summed far past convergence.
    fn expm(a: &Mat2) -> Mat2 {
        let mut term = Mat2::identity();
        let mut sum = Mat2::identity();
        for k in 1..60 {
            term = term * a / Complex64::from(k as f64);
            sum += term;
        }
        sum
    }

    #[test]
    fn su2_matches_the_matrix_exponential() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let p = Su2Params::new(rng.random_range(0.0..PI), rng.random_range(0.0..PI), rng.random_range(0.0..2.0 * PI)).unwrap();
            let n = p.axis();
            assert!(((n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt() - 1.0).abs() < 1e-12);
            let gen = (pauli2(1) * Complex64::from(n[0]) + pauli2(2) * Complex64::from(n[1]) + pauli2(3) * Complex64::from(n[2]))
                * (I * p.phi / 2.0);
            let u = su2_from_params(&p).unwrap();
            assert!(frobenius2(&(u - expm(&gen))) < 1e-12);
            assert!(unitarity_defect(&u) < 1e-12);
            assert!((u.determinant() - ONE).norm() < 1e-12);
            let back = su2_matrix(&Su2Params::from_unitary(&u));
            assert!(frobenius2(&(back - u)).min(frobenius2(&(back + u))) < 1e-12);
        }
    }
}
