//! Brute-force search over products of one-qubit unitaries, and seeded
//! generators for random states and random local unitaries.
//!
//! The search knows nothing about reference forms or Pauli coefficients: it
//! minimizes `‖ρ′ − (⊗U_i) ρ (⊗U_i†)‖_F` directly with Nelder–Mead, which
//! makes it an independent check on the closed-form pipeline.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{conjugate_local, frobenius, Complex64, ComplexMatrix, Mat2};
use crate::spectral::axis_exponential;
use crate::state::MultiQubitState;
use crate::tolerance::Tolerances;

/// Largest qubit count the search accepts.
pub const MAX_QUBITS: usize = 3;
/// Residual below which a search result counts as a conjugation.
pub const EQUIVALENCE_THRESHOLD: f64 = 1e-6;

const CHUNK: usize = 16;
const EARLY_EXIT: f64 = 1e-12;
const ROUNDS: usize = 3;
const MAX_ITERS: usize = 4000;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub unitaries: Vec<Mat2>,
    /// Absolute Frobenius residual of the best start.
    pub residual: f64,
    /// Index of the start that produced it; start 0 is the identity.
    pub start: usize,
}

struct Objective<'a> {
    rho: &'a ComplexMatrix,
    target: &'a ComplexMatrix,
}

impl Objective<'_> {
    fn residual(&self, s: &[f64]) -> f64 {
        let us: Vec<Option<Mat2>> = unitaries_of(s).into_iter().map(Some).collect();
        frobenius(&(self.target - conjugate_local(self.rho, &us)))
    }
}


/// `exp(i s⃗·σ⃗)` for each consecutive triple of `s`.
fn unitaries_of(s: &[f64]) -> Vec<Mat2> {
    s.chunks(3)
        .map(|v| {
            let t = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            if t == 0.0 {
                Mat2::identity()
            } else {
                axis_exponential(t, [v[0] / t, v[1] / t, v[2] / t])
            }
        })
        .collect()
}

/// Rotation vector `s⃗` with `exp(i s⃗·σ⃗) = u` for `u ∈ SU(2)`.
fn params_of(u: &Mat2) -> [f64; 3] {
    let a = u[(0, 0)].re.clamp(-1.0, 1.0);
    let (b, c, d) = (u[(0, 0)].im, u[(0, 1)].re, u[(0, 1)].im);
    let t = a.acos();
    let s = t.sin();
    if s < 1e-12 {
        return [0.0; 3];
    }
    [t * d / s, t * c / s, t * b / s]
}

fn local_search(obj: &Objective, start: Vec<f64>) -> (Vec<f64>, f64) {
    let cost = |p: &[f64]| obj.residual(p).powi(2);
    let mut best = start;
    let mut best_cost = cost(&best);
    let mut step = 0.3;
    for _ in 0..ROUNDS {
        if best_cost.sqrt() <= EARLY_EXIT {
            break;
        }
        let (p, c) = nelder_mead(&cost, &best, step);
        if c < best_cost {
            best = p;
            best_cost = c;
        }
        step *= 0.1;
    }
    (best, best_cost.sqrt())
}

/// Standard Nelder–Mead (reflection 1, expansion 2, contraction ½, shrink ½)
/// from an axis-aligned simplex of edge `step` around `x0`.
fn nelder_mead(f: &dyn Fn(&[f64]) -> f64, x0: &[f64], step: f64) -> (Vec<f64>, f64) {
    let dim = x0.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = (0..=dim)
        .map(|k| {
            let mut v = x0.to_vec();
            if k > 0 {
                v[k - 1] += step;
            }
            let c = f(&v);
            (v, c)
        })
        .collect();
    let target = EARLY_EXIT * EARLY_EXIT;
    let point = |a: &[f64], b: &[f64], t: f64| -> Vec<f64> { a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect() };
    for _ in 0..MAX_ITERS {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (lo, hi) = (simplex[0].1, simplex[dim].1);
        if lo <= target || hi - lo <= 1e-12 * lo.abs() + 1e-300 {
            break;
        }
        let centroid: Vec<f64> = (0..dim)
            .map(|k| simplex[..dim].iter().map(|(v, _)| v[k]).sum::<f64>() / dim as f64)
            .collect();
        let worst = simplex[dim].0.clone();
        let reflected = point(&centroid, &worst, -1.0);
        let fr = f(&reflected);
        if fr < lo {
            let expanded = point(&centroid, &worst, -2.0);
            let fe = f(&expanded);
            simplex[dim] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
        } else if fr < simplex[dim - 1].1 {
            simplex[dim] = (reflected, fr);
        } else {
            let (toward, ft) = if fr < hi { (reflected, fr) } else { (worst, hi) };
            let contracted = point(&centroid, &toward, 0.5);
            let fc = f(&contracted);
            if fc < ft {
                simplex[dim] = (contracted, fc);
            } else {
                let best = simplex[0].0.clone();
                for entry in simplex.iter_mut().skip(1) {
                    let v = point(&best, &entry.0, 0.5);
                    let c = f(&v);
                    *entry = (v, c);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    simplex.swap_remove(0)
}

/// Multi-start minimization of `‖ρ′ − (⊗U_i) ρ (⊗U_i†)‖_F` over local
/// unitaries.
///
/// Start 0 is the identity, the others are Haar-random. Starts run in
/// parallel chunks of 16 and the result is the lowest residual, ties going to
/// the lower start index, so the output depends only on `(budget, seed)`.
/// The search stops after the first chunk that reaches `1e-12`. A small
/// residual certifies a conjugation; a large one is only evidence against it.
pub fn brute_force_lu_search(
    rho: &MultiQubitState,
    rho_prime: &MultiQubitState,
    budget: usize,
    seed: u64,
) -> Result<OracleResult> {
    let n = rho.n();
    if rho_prime.n() != n {
        return Err(Error::ArityMismatch { left: n, right: rho_prime.n() });
    }
    if n > MAX_QUBITS {
        return Err(Error::TooManyQubits { n, max: MAX_QUBITS });
    }
    let obj = Objective {
        rho: rho.matrix(),
        target: rho_prime.matrix(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let starts: Vec<Vec<f64>> = (0..budget.max(1))
        .map(|k| {
            if k == 0 {
                vec![0.0; 3 * n]
            } else {
                (0..n).flat_map(|_| params_of(&haar_su2(&mut rng))).collect()
            }
        })
        .collect();
    let mut best: Option<(f64, usize, Vec<f64>)> = None;
    for (c, chunk) in starts.chunks(CHUNK).enumerate() {
        let results: Vec<(Vec<f64>, f64)> = chunk.par_iter().map(|s| local_search(&obj, s.clone())).collect();
        for (k, (p, res)) in results.into_iter().enumerate() {
            if best.as_ref().is_none_or(|b| res < b.0) {
                best = Some((res, c * CHUNK + k, p));
            }
        }
        if best.as_ref().is_some_and(|b| b.0 <= EARLY_EXIT) {
            break;
        }
    }
    let (_, start, p) = best.expect("at least one start");
    Ok(OracleResult {
        unitaries: unitaries_of(&p),
        residual: obj.residual(&p),
        start,
    })
}

fn haar_su2(rng: &mut ChaCha8Rng) -> Mat2 {
    let q = loop {
        let q: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
        let norm = q.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            break q.map(|x| x / norm);
        }
    };
    let [a, b, c, d] = q;
    Mat2::new(
        Complex64::new(a, b),
        Complex64::new(c, d),
        Complex64::new(-c, d),
        Complex64::new(a, -b),
    )
}

/// `n` independent Haar-random SU(2) elements.
pub fn random_local_unitary(n: usize, seed: u64) -> Vec<Mat2> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| haar_su2(&mut rng)).collect()
}

/// Haar-random normalized amplitudes of an `n`-qubit pure state.
pub fn random_pure_amplitudes(n: usize, seed: u64) -> Vec<Complex64> {
    let dim = 1usize << n;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let psi: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    let norm = psi.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    psi.into_iter().map(|a| a / norm).collect()
}

/// A mixture of `rank` Haar-random pure states with weights drawn uniformly
/// from the simplex.
pub fn random_state(n: usize, rank: usize, seed: u64) -> Result<MultiQubitState> {
    let dim = 1usize << n;
    if rank == 0 || rank > dim {
        return Err(Error::RankOutOfRange { rank, max: dim });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights: Vec<f64> = (0..rank).map(|_| rng.sample(Exp1)).collect();
    let total: f64 = weights.iter().sum();
    let mut m = ComplexMatrix::zeros(dim, dim);
    for w in &weights {
        let psi = DVector::from_fn(dim, |_, _| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
        let psi = psi.unscale(psi.norm());
        m += (&psi * psi.adjoint()).scale(w / total);
    }
    let m = (&m + m.adjoint()).scale(0.5);
    MultiQubitState::new(m, &Tolerances::default())
}
