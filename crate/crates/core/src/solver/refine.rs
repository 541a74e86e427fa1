//! Levenberg–Marquardt over products of rotations.
//!
//! Rotations are updated multiplicatively, `R ← exp(δ·L) R`, so iterates
//! never leave SO(3) and z-only qubits stay z-only.

use nalgebra::{DMatrix, DVector, Matrix3, Vector3};

use crate::rotation::{apply_on_qubit, generator, rotation_from_vector, Rot3, RotationKind};

/// Fit `target ≈ (⊗_{q ∈ free} R_q) base` on the coefficient offsets in `mask`.
pub(crate) struct CoefficientModel {
    pub n: usize,
    pub base: Vec<f64>,
    pub target: Vec<f64>,
    pub free: Vec<usize>,
    pub kinds: Vec<RotationKind>,
    pub mask: Vec<usize>,
}

impl CoefficientModel {
    fn rotated(&self, rots: &[Rot3]) -> Vec<f64> {
        let mut cur = self.base.clone();
        for (&q, r) in self.free.iter().zip(rots) {
            apply_on_qubit(self.n, &mut cur, q, r);
        }
        cur
    }

    pub fn residual(&self, rots: &[Rot3]) -> DVector<f64> {
        let cur = self.rotated(rots);
        DVector::from_iterator(self.mask.len(), self.mask.iter().map(|&k| self.target[k] - cur[k]))
    }

    /// Columns are derivatives of the model along each degree of freedom.
    fn jacobian(&self, rots: &[Rot3]) -> DMatrix<f64> {
        let cur = self.rotated(rots);
        let dofs: Vec<(usize, usize)> = self
            .free
            .iter()
            .zip(&self.kinds)
            .flat_map(|(&q, kind)| axes(*kind).iter().map(move |&k| (q, k)))
            .collect();
        let mut j = DMatrix::zeros(self.mask.len(), dofs.len());
        for (col, &(q, k)) in dofs.iter().enumerate() {
            let mut d = cur.clone();
            apply_on_qubit(self.n, &mut d, q, &generator(k));
            for (row, &m) in self.mask.iter().enumerate() {
                j[(row, col)] = d[m];
            }
        }
        j
    }
}

fn axes(kind: RotationKind) -> &'static [usize] {
    match kind {
        RotationKind::Free => &[0, 1, 2],
        RotationKind::AboutZ => &[2],
    }
}

fn step(rots: &[Rot3], kinds: &[RotationKind], delta: &DVector<f64>) -> Vec<Rot3> {
    let mut k = 0;
    rots.iter()
        .zip(kinds)
        .map(|(r, kind)| {
            let mut v = Vector3::zeros();
            for &a in axes(*kind) {
                v[a] = delta[k];
                k += 1;
            }
            rotation_from_vector(v) * r
        })
        .collect()
}

pub(crate) struct Fit {
    pub rots: Vec<Rot3>,
    pub residual: f64,
}

pub(crate) fn levenberg_marquardt(model: &CoefficientModel, start: Vec<Rot3>, target: f64, max_steps: usize) -> Fit {
    let mut rots = start;
    let mut res = model.residual(&rots);
    let mut cost = res.norm_squared();
    let mut mu = 1e-3;
    for _ in 0..max_steps {
        if cost.sqrt() <= target {
            break;
        }
        let j = model.jacobian(&rots);
        let jt = j.transpose();
        let a = &jt * &j;
        let g = &jt * &res;
        let mut improved = false;
        while mu < 1e12 {
            let mut damped = a.clone();
            for d in 0..damped.nrows() {
                damped[(d, d)] += mu * (a[(d, d)] + 1e-12);
            }
            let Some(delta) = damped.cholesky().map(|c| c.solve(&g)) else {
                mu *= 10.0;
                continue;
            };
            let trial = step(&rots, &model.kinds, &delta);
            let trial_res = model.residual(&trial);
            let trial_cost = trial_res.norm_squared();
            if trial_cost < cost {
                rots = trial;
                res = trial_res;
                let gain = cost - trial_cost;
                cost = trial_cost;
                mu = (mu * 0.3).max(1e-15);
                improved = gain > cost * 1e-14 || cost.sqrt() <= target;
                break;
            }
            mu *= 10.0;
        }
        if !improved {
            break;
        }
    }
    Fit {
        rots,
        residual: cost.sqrt(),
    }
}

/// Two-qubit coefficient vector holding only the correlation block `c`.
pub(crate) fn block_vector(c: &Matrix3<f64>) -> Vec<f64> {
    let mut r = vec![0.0; 16];
    for a in 0..3 {
        for b in 0..3 {
            r[4 * (a + 1) + b + 1] = c[(a, b)];
        }
    }
    r
}
