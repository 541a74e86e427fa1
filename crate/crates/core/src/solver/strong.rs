//! Rotations of strong (maximally mixed) qubits.

use std::f64::consts::PI;
use std::sync::OnceLock;

use nalgebra::{Matrix3, Vector3};

use super::refine::{block_vector, levenberg_marquardt, CoefficientModel};
use super::{CorrelationBlock, SolverError};
use crate::rotation::{best_rotation, rotation_about, rotation_z, su2_to_so3, Rot3, RotationKind};
use crate::spectral::{su2_matrix, Su2Params};
use crate::tolerance::Tolerances;

const GRID: usize = 16;
const GRID_KEEP: usize = 8;
const MAX_STEPS: usize = 200;

/// Parameters of an SU(2) element whose rotation maps the strong qubit's
/// slice `r_{a_i, 3_j}` onto the primed one; `j` is the other qubit of the
/// block and must be weak.
///
/// The rotation is the smallest one: axis along `r⃗ × r⃗′`, angle between the
/// two slices. Any further rotation about `r⃗′` also works; the caller
/// settles that freedom.
pub fn solve_rotation_for_strong_qubit(
    block: &CorrelationBlock,
    strong: usize,
    tol: &Tolerances,
) -> Result<Su2Params, SolverError> {
    let (v, v_prime) = block.slice(strong).ok_or(SolverError::NotInBlock { qubit: strong })?;
    let (norm, norm_prime) = (v.norm(), v_prime.norm());
    if norm <= tol.coef {
        return Err(SolverError::VanishingSlice { norm });
    }
    if (norm - norm_prime).abs() > tol.coef {
        return Err(SolverError::NormMismatch { norm, norm_prime });
    }
    let candidates = rotation_candidates(&v, &v_prime);
    let mut best = f64::INFINITY;
    for p in candidates {
        let r = su2_to_so3(&su2_matrix(&p));
        let residual = (r * v - v_prime).norm();
        if residual <= tol.coef + tol.solve {
            return Ok(p);
        }
        best = best.min(residual);
    }
    Err(SolverError::RotationCheckFailed { residual: best })
}

/// The full-angle reading first, then the half-angle one.
fn rotation_candidates(v: &Vector3<f64>, v_prime: &Vector3<f64>) -> Vec<Su2Params> {
    let (u, u_prime) = (v.normalize(), v_prime.normalize());
    let cross = u_prime.cross(&u);
    let sin = cross.norm();
    let cos = u.dot(&u_prime);
    if sin < 1e-15 && cos > 0.0 {
        return vec![Su2Params::IDENTITY];
    }
    // U = exp(i φ/2 n̂·σ⃗) rotates by −φ about n̂, so n̂ ∝ r⃗′ × r⃗.
    let axis = if sin < 1e-15 { any_perpendicular(&u) } else { cross / sin };
    let phi = sin.atan2(cos);
    let theta = axis[2].clamp(-1.0, 1.0).acos();
    let phi_az = axis[1].atan2(axis[0]).rem_euclid(2.0 * PI) % (2.0 * PI);
    vec![
        Su2Params { phi, theta, phi_az },
        Su2Params {
            phi: phi / 2.0,
            theta: theta / 2.0,
            phi_az: phi_az / 2.0,
        },
    ]
}

fn any_perpendicular(u: &Vector3<f64>) -> Vector3<f64> {
    let e = if u[0].abs() < 0.9 { Vector3::x() } else { Vector3::y() };
    u.cross(&e).normalize()
}

/// Extra candidates for a rotation fixed only up to the stabilizer of `target`.
pub(crate) fn stabilizer_orbit(r: &Rot3, target: &Vector3<f64>, count: usize) -> Vec<Rot3> {
    let axis = target.normalize();
    (0..count)
        .map(|k| rotation_about(axis, 2.0 * PI * k as f64 / count as f64) * r)
        .collect()
}

/// Rotation pair `(R_i, R_j)` with `C′ = R_i C R_jᵀ` for two strong qubits.
///
/// Starts come from the singular value decompositions of both blocks and a
/// 16³ grid over `R_i` with the best matching `R_j` for each grid point;
/// the best starts are refined by Levenberg–Marquardt.
pub fn solve_all_strong(block: &CorrelationBlock, tol: &Tolerances) -> Result<(Su2Params, Su2Params), SolverError> {
    let sols = all_strong_solutions(&block.c, &block.c_prime, tol)?;
    let (ri, rj) = sols[0];
    Ok((params_of(&ri), params_of(&rj)))
}

fn params_of(r: &Rot3) -> Su2Params {
    Su2Params::from_unitary(&crate::rotation::so3_to_su2(r))
}

pub(crate) fn all_strong_solutions(c: &Matrix3<f64>, c_prime: &Matrix3<f64>, tol: &Tolerances) -> Result<Vec<(Rot3, Rot3)>, SolverError> {
    if c.amax() <= tol.coef && c_prime.amax() <= tol.coef {
        return Err(SolverError::AllCoefficientsVanish);
    }
    let kinds = [RotationKind::Free, RotationKind::Free];
    let model = CoefficientModel {
        n: 2,
        base: block_vector(c),
        target: block_vector(c_prime),
        free: vec![0, 1],
        kinds: kinds.to_vec(),
        mask: (0..16).collect(),
    };
    let mut solutions: Vec<(Rot3, Rot3)> = Vec::new();
    let mut best = f64::INFINITY;
    for seed in pair_seeds(&[(*c, *c_prime)], kinds) {
        let fit = levenberg_marquardt(&model, seed.to_vec(), tol.solve / 10.0, MAX_STEPS);
        best = best.min(fit.residual);
        if fit.residual <= tol.solve {
            let pair = (fit.rots[0], fit.rots[1]);
            let fresh = solutions
                .iter()
                .all(|(a, b)| (a - pair.0).amax() > 1e-8 || (b - pair.1).amax() > 1e-8);
            if fresh {
                solutions.push(pair);
            }
        }
    }
    if solutions.is_empty() {
        Err(SolverError::NoSolutionFound { residual: best })
    } else {
        Ok(solutions)
    }
}

/// Starting rotation pairs for `C′_t ≈ R_i C_t R_jᵀ`: exact singular-vector
/// alignments of the largest block, then the best points of a grid over
/// `R_i` with the optimal `R_j` for each.
pub(crate) fn pair_seeds(blocks: &[(Matrix3<f64>, Matrix3<f64>)], kinds: [RotationKind; 2]) -> Vec<[Rot3; 2]> {
    let mut seeds = Vec::new();
    if kinds == [RotationKind::Free, RotationKind::Free] {
        if let Some((c, c_prime)) = blocks
            .iter()
            .max_by(|a, b| (a.0.norm() + a.1.norm()).total_cmp(&(b.0.norm() + b.1.norm())))
        {
            seeds.extend(svd_seeds(c, c_prime));
        }
    }
    let objective = |ri: &Rot3, rj: &Rot3| -> f64 {
        blocks
            .iter()
            .map(|(c, cp)| (cp - ri * c * rj.transpose()).norm_squared())
            .sum()
    };
    let mut scored: Vec<(f64, usize, [Rot3; 2])> = rotation_grid(kinds[0])
        .iter()
        .enumerate()
        .map(|(k, ri)| {
            let h: Matrix3<f64> = blocks.iter().map(|(c, cp)| cp.transpose() * ri * c).sum();
            let rj = best_rotation(&h, kinds[1]);
            (objective(ri, &rj), k, [*ri, rj])
        })
        .collect();
    scored.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    seeds.extend(scored.into_iter().take(GRID_KEEP).map(|s| s.2));
    seeds
}

fn svd_seeds(c: &Matrix3<f64>, c_prime: &Matrix3<f64>) -> Vec<[Rot3; 2]> {
    let svd = c.svd(true, true);
    let svd_p = c_prime.svd(true, true);
    let (u, vt) = (svd.u.expect("requested"), svd.v_t.expect("requested"));
    let (up, vtp) = (svd_p.u.expect("requested"), svd_p.v_t.expect("requested"));
    // nalgebra does not sort singular values; align both decompositions by magnitude.
    let order = |s: &Vector3<f64>| {
        let mut idx = [0usize, 1, 2];
        idx.sort_by(|&a, &b| s[b].total_cmp(&s[a]));
        idx
    };
    let (o, op) = (order(&svd.singular_values), order(&svd_p.singular_values));
    let permute_cols = |m: &Matrix3<f64>, idx: [usize; 3]| Matrix3::from_fn(|r, k| m[(r, idx[k])]);
    let (u, v) = (permute_cols(&u, o), permute_cols(&vt.transpose(), o));
    let (up, vp) = (permute_cols(&up, op), permute_cols(&vtp.transpose(), op));
    let mut out = Vec::new();
    for signs in 0..8u8 {
        let d = Matrix3::from_diagonal(&Vector3::from_fn(|k, _| if signs >> k & 1 == 1 { -1.0 } else { 1.0 }));
        let ri = up * d * u.transpose();
        let rj = vp * d * v.transpose();
        if ri.determinant() > 0.0 && rj.determinant() > 0.0 {
            out.push([ri, rj]);
        }
    }
    out
}

fn rotation_grid(kind: RotationKind) -> &'static [Rot3] {
    static FREE: OnceLock<Vec<Rot3>> = OnceLock::new();
    static ABOUT_Z: OnceLock<Vec<Rot3>> = OnceLock::new();
    match kind {
        RotationKind::Free => FREE.get_or_init(|| {
            let mut out = Vec::with_capacity(GRID * GRID * GRID);
            for a in 0..GRID {
                for b in 0..GRID {
                    for c in 0..GRID {
                        let p = Su2Params {
                            phi: PI * a as f64 / GRID as f64,
                            theta: PI * (b as f64 + 0.5) / GRID as f64,
                            phi_az: 2.0 * PI * c as f64 / GRID as f64,
                        };
                        out.push(su2_to_so3(&su2_matrix(&p)));
                    }
                }
            }
            out
        }),
        RotationKind::AboutZ => ABOUT_Z.get_or_init(|| (0..GRID).map(|k| rotation_z(2.0 * PI * k as f64 / GRID as f64)).collect()),
    }
}
