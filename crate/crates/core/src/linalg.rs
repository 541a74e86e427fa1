//! Dense complex matrices and the handful of 2×2 operations the pipeline needs.

use nalgebra::{DMatrix, Matrix2};
pub use num_complex::Complex64;

/// A dense square complex matrix.
pub type ComplexMatrix = DMatrix<Complex64>;

/// A single-qubit operator.
pub type Mat2 = Matrix2<Complex64>;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

/// Single-qubit Pauli matrix; `0` is the identity.
///
/// # Panics
/// If `axis > 3`.
pub fn pauli2(axis: u8) -> Mat2 {
    match axis {
        0 => Mat2::new(ONE, ZERO, ZERO, ONE),
        1 => Mat2::new(ZERO, ONE, ONE, ZERO),
        2 => Mat2::new(ZERO, -I, I, ZERO),
        3 => Mat2::new(ONE, ZERO, ZERO, -ONE),
        _ => panic!("Pauli axis {axis} out of range"),
    }
}

pub fn frobenius(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn frobenius2(m: &Mat2) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Frobenius distance of `u†u` from the identity.
pub fn unitarity_defect(u: &Mat2) -> f64 {
    frobenius2(&(u.adjoint() * u - Mat2::identity()))
}

/// Kronecker product of single-qubit operators, qubit 0 most significant.
pub fn kron_all(factors: &[Mat2]) -> ComplexMatrix {
    let mut out = ComplexMatrix::from_element(1, 1, ONE);
    for f in factors {
        let f = ComplexMatrix::from_iterator(2, 2, f.iter().copied());
        out = out.kronecker(&f);
    }
    out
}

/// Computes `(⊗ U_q) M (⊗ U_q)†` one qubit at a time.
///
/// `unitaries[q]` acts on qubit `q`, with qubit 0 the most significant bit of
/// the basis index. `None` entries are skipped.
pub(crate) fn conjugate_local(m: &ComplexMatrix, unitaries: &[Option<Mat2>]) -> ComplexMatrix {
    let dim = m.nrows();
    let n = unitaries.len();
    debug_assert_eq!(dim, 1 << n);
    let mut out = m.clone();
    for (q, u) in unitaries.iter().enumerate() {
        let Some(u) = u else { continue };
        let bit = 1usize << (n - 1 - q);
        // rows: U M
        for c in 0..dim {
            for r0 in (0..dim).filter(|r| r & bit == 0) {
                let r1 = r0 | bit;
                let a = out[(r0, c)];
                let b = out[(r1, c)];
                out[(r0, c)] = u[(0, 0)] * a + u[(0, 1)] * b;
                out[(r1, c)] = u[(1, 0)] * a + u[(1, 1)] * b;
            }
        }
        // columns: M U†
        for c0 in (0..dim).filter(|c| c & bit == 0) {
            let c1 = c0 | bit;
            for r in 0..dim {
                let a = out[(r, c0)];
                let b = out[(r, c1)];
                out[(r, c0)] = a * u[(0, 0)].conj() + b * u[(0, 1)].conj();
                out[(r, c1)] = a * u[(1, 0)].conj() + b * u[(1, 1)].conj();
            }
        }
    }
    out
}

/// Removes the global phase of a 2×2 unitary: determinant one and the first
/// non-negligible entry (row-major, normally the top-left one) with argument
/// in (−π/2, π/2].
pub fn normalize_global_phase(u: &Mat2) -> Mat2 {
    let det = u.determinant();
    let mut v = if det.norm() > 0.0 {
        u * Complex64::from_polar(1.0, -det.arg() / 2.0)
    } else {
        *u
    };
    let lead = [v[(0, 0)], v[(0, 1)], v[(1, 0)], v[(1, 1)]]
        .into_iter()
        .find(|z| z.norm() > 1e-12);
    if let Some(z) = lead {
        let arg = z.arg();
        if arg <= -std::f64::consts::FRAC_PI_2 || arg > std::f64::consts::FRAC_PI_2 {
            v = -v;
        }
    }
    v
}

/// Smallest Frobenius distance between `a` and `e^{iθ} b` over θ.
pub fn phase_distance(a: &Mat2, b: &Mat2) -> f64 {
    let overlap: Complex64 = a.iter().zip(b.iter()).map(|(x, y)| y.conj() * x).sum();
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        ONE
    };
    frobenius2(&(a - b * phase))
}
