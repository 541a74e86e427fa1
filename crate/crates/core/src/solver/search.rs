//! Orders the closed-form solvers, backtracks over their candidate
//! solutions and falls back to a joint least-squares polish.
//!
//! A partial assignment is checked on every coefficient it already fixes:
//! once the solved qubits' rotations are applied, coefficients that carry
//! only the identity (or, on weak qubits, `σ3`) at unsolved qubits must match.

use std::cell::RefCell;
use std::f64::consts::PI;

use nalgebra::{Matrix3, SymmetricEigen, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::block::{block_with_tail, offset_of, vector_with_tail};
use super::refine::{levenberg_marquardt, CoefficientModel};
use super::strong::{all_strong_solutions, pair_seeds, stabilizer_orbit};
use super::weak::linear_system_candidates;
use super::{
    solve_omega_pairwise, solve_rotation_for_strong_qubit, CorrelationBlock, ResidualUnitary, SolverError,
    SymmetryClass,
};
use crate::pauli::PauliCoefficients;
use crate::rotation::{best_rotation, rotate_coefficients, rotation_about, rotation_z, su2_to_so3, Rot3, RotationKind};
use crate::spectral::su2_matrix;
use crate::tolerance::Tolerances;

type RotationPair = (Matrix3<f64>, Matrix3<f64>);

const NODE_BUDGET: usize = 64;
const ORBIT: usize = 8;

/// How a qubit's residual was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    /// Phase from a single correlation slice against a weak partner.
    PairwisePhase,
    /// Two phases from the `{1,2}×{1,2}` correlation block.
    LinearSystem,
    /// Smallest rotation carrying a strong qubit's slice onto the primed one.
    StrongRotation,
    /// Rotation pair for two strong qubits.
    AllStrong,
    /// Least-squares fit against already solved qubits.
    Anchor,
    /// Joint fit of two qubits against the data they fix.
    PairSearch,
    /// Nothing determined the qubit; the identity was used.
    Default,
    /// Joint refinement of all qubits after the closed-form pass.
    Polish,
    /// Taken from the brute-force search.
    Oracle,
}

impl std::fmt::Display for SolveMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Self::PairwisePhase => "pairwise-phase",
            Self::LinearSystem => "linear-system",
            Self::StrongRotation => "strong-rotation",
            Self::AllStrong => "all-strong",
            Self::Anchor => "anchor",
            Self::PairSearch => "pair-search",
            Self::Default => "default",
            Self::Polish => "polish",
            Self::Oracle => "oracle",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveNote {
    pub method: SolveMethod,
    pub partner: Option<usize>,
    /// Highest correlation order used.
    pub order: usize,
}

pub(crate) struct SolveContext<'a> {
    pub n: usize,
    pub r: &'a [f64],
    pub r_prime: &'a [f64],
    pub classes: &'a [SymmetryClass],
    pub tol: &'a Tolerances,
}

#[derive(Debug, Clone)]
struct Assignment {
    residuals: Vec<Option<ResidualUnitary>>,
    rots: Vec<Option<Rot3>>,
    notes: Vec<Option<SolveNote>>,
    log: Vec<String>,
}

impl Assignment {
    fn empty(n: usize) -> Self {
        Self {
            residuals: vec![None; n],
            rots: vec![None; n],
            notes: vec![None; n],
            log: Vec::new(),
        }
    }

    fn set(&mut self, q: usize, u: ResidualUnitary, note: SolveNote) {
        self.rots[q] = Some(u.rotation());
        self.residuals[q] = Some(u);
        self.notes[q] = Some(note);
    }

    fn unsolved(&self) -> Vec<usize> {
        (0..self.rots.len()).filter(|&q| self.rots[q].is_none()).collect()
    }
}

struct Step {
    label: String,
    notes: Vec<(usize, SolveNote)>,
    candidates: Vec<Vec<(usize, ResidualUnitary)>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum StepKind {
    Pairwise,
    UniqueAnchor(usize),
    StrongSlice,
    PairOrder2,
    PairOrder3,
    FamilyAnchor,
}

const ALL_STEPS: [StepKind; 7] = [
    StepKind::Pairwise,
    StepKind::UniqueAnchor(2),
    StepKind::UniqueAnchor(3),
    StepKind::StrongSlice,
    StepKind::PairOrder2,
    StepKind::PairOrder3,
    StepKind::FamilyAnchor,
];
const ORDER2_STEPS: [StepKind; 4] = [
    StepKind::Pairwise,
    StepKind::UniqueAnchor(2),
    StepKind::StrongSlice,
    StepKind::PairOrder2,
];
const ORDER3_STEPS: [StepKind; 2] = [StepKind::UniqueAnchor(3), StepKind::PairOrder3];

/// Outcome of the closed-form pass.
#[derive(Debug, Clone)]
pub(crate) struct Plan {
    pub residuals: Vec<ResidualUnitary>,
    pub notes: Vec<SolveNote>,
    /// `‖r′ − (⊗R) r‖ / ‖r‖`, equal to the relative Frobenius residual of the reference forms.
    pub residual: f64,
    pub order_limited: bool,
    pub evidence: Vec<String>,
    pub log: Vec<String>,
}

struct AnchorData {
    h: Matrix3<f64>,
    rank: usize,
    /// Primed vector of the strongest tail, for rank-one fits.
    direction: Vector3<f64>,
    order: usize,
}

impl SolveContext<'_> {
    fn kind(&self, q: usize) -> RotationKind {
        match self.classes[q] {
            SymmetryClass::Weak => RotationKind::AboutZ,
            SymmetryClass::Strong => RotationKind::Free,
        }
    }

    fn weak(&self, q: usize) -> bool {
        self.classes[q] == SymmetryClass::Weak
    }

    fn scale(&self) -> f64 {
        self.r.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    fn rotated(&self, asg: &Assignment) -> Vec<f64> {
        rotate_coefficients(self.n, self.r, &asg.rots)
    }

    /// Axes a qubit may carry in a tail without its unknown rotation mattering.
    fn tail_axes(&self, asg: &Assignment, q: usize) -> &'static [u8] {
        if asg.rots[q].is_some() {
            &[1, 2, 3]
        } else if self.weak(q) {
            &[3]
        } else {
            &[]
        }
    }

    /// Offsets whose value is fixed once the solved qubits and `free` are.
    fn mask(&self, asg: &Assignment, free: &[usize]) -> Vec<usize> {
        let n = self.n;
        (0..1usize << (2 * n))
            .filter(|&k| {
                (0..n).all(|q| {
                    if asg.rots[q].is_some() || free.contains(&q) {
                        return true;
                    }
                    let digit = (k >> (2 * (n - 1 - q))) & 3;
                    digit == 0 || (digit == 3 && self.weak(q))
                })
            })
            .collect()
    }

    fn partial_residual(&self, asg: &Assignment) -> f64 {
        let cur = self.rotated(asg);
        let diff: f64 = self
            .mask(asg, &[])
            .iter()
            .map(|&k| (self.r_prime[k] - cur[k]).powi(2))
            .sum();
        diff.sqrt() / self.scale()
    }

    fn full_residual(&self, rots: &[Option<Rot3>]) -> f64 {
        let cur = rotate_coefficients(self.n, self.r, rots);
        let diff: f64 = cur.iter().zip(self.r_prime).map(|(a, b)| (a - b).powi(2)).sum();
        diff.sqrt() / self.scale()
    }

    /// Tails of up to `order − 1` other qubits usable for anchoring `q`.
    fn tails(&self, asg: &Assignment, q: usize, order: usize) -> Vec<Vec<(usize, u8)>> {
        let others: Vec<usize> = (0..self.n).filter(|&p| p != q && !self.tail_axes(asg, p).is_empty()).collect();
        let mut out = vec![Vec::new()];
        let mut frontier: Vec<(usize, Vec<(usize, u8)>)> = vec![(0, Vec::new())];
        for _ in 1..order {
            let mut next = Vec::new();
            for (start, tail) in &frontier {
                for (pos, &p) in others.iter().enumerate().skip(*start) {
                    for &a in self.tail_axes(asg, p) {
                        let mut t = tail.clone();
                        t.push((p, a));
                        next.push((pos + 1, t));
                    }
                }
            }
            out.extend(next.iter().map(|(_, t)| t.clone()));
            frontier = next;
        }
        out
    }

    fn anchor_data(&self, asg: &Assignment, rotated: &[f64], q: usize, max_order: usize) -> AnchorData {
        let mut gram = Matrix3::zeros();
        let mut h = Matrix3::zeros();
        let mut direction = Vector3::zeros();
        let mut strongest = 0.0;
        let mut order = 1;
        for tail in self.tails(asg, q, max_order) {
            let x = vector_with_tail(self.n, rotated, q, &tail);
            let y = vector_with_tail(self.n, self.r_prime, q, &tail);
            let informative = if self.weak(q) { x[0].hypot(x[1]) } else { x.norm() };
            if informative > self.tol.coef {
                order = order.max(tail.len() + 1);
            }
            if x.norm() > strongest {
                strongest = x.norm();
                direction = y;
            }
            gram += x * x.transpose();
            h += y * x.transpose();
        }
        let c2 = self.tol.coef * self.tol.coef;
        let rank = if self.weak(q) {
            usize::from(gram[(0, 0)] + gram[(1, 1)] > c2) * 2
        } else {
            let mut ev: Vec<f64> = SymmetricEigen::new(gram).eigenvalues.iter().copied().collect();
            ev.sort_by(|a, b| b.total_cmp(a));
            ev.iter().filter(|&&e| e > c2).count()
        };
        AnchorData {
            h,
            rank,
            direction,
            order,
        }
    }

    fn step(&self, asg: &Assignment, kind: StepKind, evidence: &RefCell<Vec<String>>) -> Option<Step> {
        match kind {
            StepKind::Pairwise => self.pairwise_step(asg, evidence),
            StepKind::UniqueAnchor(order) => self.anchor_step(asg, order, false),
            StepKind::StrongSlice => self.strong_slice_step(asg, evidence),
            StepKind::PairOrder2 => self.pair_step(asg, 2, evidence),
            StepKind::PairOrder3 => self.pair_step(asg, 3, evidence),
            StepKind::FamilyAnchor => self.anchor_step(asg, 3, true),
        }
    }

    fn first_step(&self, asg: &Assignment, kinds: &[StepKind], evidence: &RefCell<Vec<String>>) -> Option<Step> {
        kinds.iter().find_map(|&k| self.step(asg, k, evidence))
    }

    fn pairwise_step(&self, asg: &Assignment, evidence: &RefCell<Vec<String>>) -> Option<Step> {
        let n = self.n;
        let rotated = self.rotated(asg);
        for i in asg.unsolved().into_iter().filter(|&i| self.weak(i)) {
            let partner = (0..n)
                .filter(|&j| j != i && self.weak(j))
                .map(|j| {
                    let a = rotated[offset_of(n, &[(i, 1), (j, 3)])];
                    let b = rotated[offset_of(n, &[(i, 2), (j, 3)])];
                    (a * a + b * b, j)
                })
                .fold(None, |best: Option<(f64, usize)>, cand| match best {
                    Some(b) if b.0 >= cand.0 => Some(b),
                    _ => Some(cand),
                });
            let Some((den, j)) = partner else { continue };
            if den <= self.tol.coef * self.tol.coef {
                continue;
            }
            let block = CorrelationBlock::from_slices(n, &rotated, self.r_prime, i, j);
            match solve_omega_pairwise(&block, i, self.tol) {
                Ok(omega) => {
                    return Some(Step {
                        label: format!("qubit {}: ω = {omega:.12} from slice against qubit {}", i + 1, j + 1),
                        notes: vec![(i, note(SolveMethod::PairwisePhase, Some(j), 2))],
                        candidates: vec![vec![(i, ResidualUnitary::phase(omega))]],
                    })
                }
                Err(e) => push_evidence(evidence, i, j, e),
            }
        }
        None
    }

    fn anchor_step(&self, asg: &Assignment, order: usize, family: bool) -> Option<Step> {
        let rotated = self.rotated(asg);
        for q in asg.unsolved() {
            let data = self.anchor_data(asg, &rotated, q, order);
            let wanted = if family { data.rank == 1 && !self.weak(q) } else { data.rank >= 2 };
            if !wanted {
                continue;
            }
            let r = best_rotation(&data.h, self.kind(q));
            let rots = if family { stabilizer_orbit(&r, &data.direction, ORBIT) } else { vec![r] };
            let how = if family { "one-parameter fit" } else { "fit" };
            return Some(Step {
                label: format!("qubit {}: {how} against order-{} correlations", q + 1, data.order),
                notes: vec![(q, note(SolveMethod::Anchor, None, data.order))],
                candidates: rots
                    .iter()
                    .map(|r| vec![(q, ResidualUnitary::from_rotation(r, self.classes[q]))])
                    .collect(),
            });
        }
        None
    }

    fn strong_slice_step(&self, asg: &Assignment, evidence: &RefCell<Vec<String>>) -> Option<Step> {
        let n = self.n;
        let rotated = self.rotated(asg);
        for i in asg.unsolved().into_iter().filter(|&i| !self.weak(i)) {
            let best = (0..n)
                .filter(|&j| j != i && self.weak(j))
                .map(|j| (vector_with_tail(n, &rotated, i, &[(j, 3)]).norm(), j))
                .fold(None, |best: Option<(f64, usize)>, cand| match best {
                    Some(b) if b.0 >= cand.0 => Some(b),
                    _ => Some(cand),
                });
            let Some((norm, j)) = best else { continue };
            if norm <= self.tol.coef {
                continue;
            }
            let block = CorrelationBlock::from_slices(n, &rotated, self.r_prime, i, j);
            match solve_rotation_for_strong_qubit(&block, i, self.tol) {
                Ok(p) => {
                    let r = su2_to_so3(&su2_matrix(&p));
                    let target = block.slice(i).expect("qubit in block").1;
                    return Some(Step {
                        label: format!("qubit {}: rotation from slice against qubit {}", i + 1, j + 1),
                        notes: vec![(i, note(SolveMethod::StrongRotation, Some(j), 2))],
                        candidates: stabilizer_orbit(&r, &target, ORBIT)
                            .iter()
                            .map(|r| vec![(i, ResidualUnitary::from_rotation(r, SymmetryClass::Strong))])
                            .collect(),
                    });
                }
                Err(e) => push_evidence(evidence, i, j, e),
            }
        }
        None
    }

    fn pair_step(&self, asg: &Assignment, order: usize, evidence: &RefCell<Vec<String>>) -> Option<Step> {
        let n = self.n;
        let rotated = self.rotated(asg);
        let unsolved = asg.unsolved();
        let mut pairs: Vec<(f64, usize, usize, Vec<RotationPair>)> = Vec::new();
        for (a, &i) in unsolved.iter().enumerate() {
            for &j in &unsolved[a + 1..] {
                let tails: Vec<Vec<(usize, u8)>> = if order == 2 {
                    vec![Vec::new()]
                } else {
                    (0..n)
                        .filter(|&k| k != i && k != j)
                        .flat_map(|k| self.tail_axes(asg, k).iter().map(move |&ax| vec![(k, ax)]))
                        .collect()
                };
                let weak_pair = self.weak(i) && self.weak(j);
                let blocks: Vec<_> = tails
                    .iter()
                    .map(|t| (block_with_tail(n, &rotated, i, j, t), block_with_tail(n, self.r_prime, i, j, t)))
                    .filter(|(c, cp)| {
                        let size = |m: &Matrix3<f64>| {
                            if weak_pair {
                                m.fixed_view::<2, 2>(0, 0).amax()
                            } else {
                                m.amax()
                            }
                        };
                        size(c).max(size(cp)) > self.tol.coef
                    })
                    .collect();
                if blocks.is_empty() {
                    continue;
                }
                let score = blocks.iter().map(|(c, cp)| c.norm() + cp.norm()).sum();
                pairs.push((score, i, j, blocks));
            }
        }
        pairs.sort_by(|a, b| b.0.total_cmp(&a.0).then((a.1, a.2).cmp(&(b.1, b.2))));
        for (_, i, j, blocks) in pairs {
            let result = match (self.classes[i], self.classes[j], order) {
                (SymmetryClass::Weak, SymmetryClass::Weak, 2) => {
                    let block = CorrelationBlock::from_slices(n, &rotated, self.r_prime, i, j);
                    linear_system_candidates(&block, self.tol).map(|c| {
                        let cands = c
                            .into_iter()
                            .map(|(wi, wj)| vec![(i, ResidualUnitary::phase(wi)), (j, ResidualUnitary::phase(wj))])
                            .collect();
                        (SolveMethod::LinearSystem, cands)
                    })
                }
                (SymmetryClass::Strong, SymmetryClass::Strong, 2) => {
                    all_strong_solutions(&blocks[0].0, &blocks[0].1, self.tol).map(|sols| {
                        let cands = sols
                            .iter()
                            .take(4)
                            .map(|(ri, rj)| {
                                vec![
                                    (i, ResidualUnitary::from_rotation(ri, SymmetryClass::Strong)),
                                    (j, ResidualUnitary::from_rotation(rj, SymmetryClass::Strong)),
                                ]
                            })
                            .collect();
                        (SolveMethod::AllStrong, cands)
                    })
                }
                _ => self.pair_search(asg, &rotated, i, j, &blocks).map(|c| (SolveMethod::PairSearch, c)),
            };
            match result {
                Ok((method, candidates)) if !candidates.is_empty() => {
                    return Some(Step {
                        label: format!("qubits {} and {}: {method} on order-{order} correlations", i + 1, j + 1),
                        notes: vec![(i, note(method, Some(j), order)), (j, note(method, Some(i), order))],
                        candidates,
                    })
                }
                Ok(_) | Err(SolverError::AllCoefficientsVanish) => {}
                Err(e) => push_evidence(evidence, i, j, e),
            }
        }
        None
    }

    fn pair_search(
        &self,
        asg: &Assignment,
        rotated: &[f64],
        i: usize,
        j: usize,
        blocks: &[(Matrix3<f64>, Matrix3<f64>)],
    ) -> Result<Vec<Vec<(usize, ResidualUnitary)>>, SolverError> {
        let kinds = [self.kind(i), self.kind(j)];
        let model = CoefficientModel {
            n: self.n,
            base: rotated.to_vec(),
            target: self.r_prime.to_vec(),
            free: vec![i, j],
            kinds: kinds.to_vec(),
            mask: self.mask(asg, &[i, j]),
        };
        let scale = self.scale();
        let mut out: Vec<[Rot3; 2]> = Vec::new();
        let mut best = f64::INFINITY;
        for seed in pair_seeds(blocks, kinds) {
            let fit = levenberg_marquardt(&model, seed.to_vec(), 1e-3 * self.tol.verify * scale, 200);
            best = best.min(fit.residual / scale);
            if fit.residual <= self.tol.verify * scale {
                let pair = [fit.rots[0], fit.rots[1]];
                if out.iter().all(|p| (p[0] - pair[0]).amax() > 1e-8 || (p[1] - pair[1]).amax() > 1e-8) {
                    out.push(pair);
                }
            }
        }
        if out.is_empty() {
            return Err(SolverError::NoSolutionFound { residual: best });
        }
        Ok(out
            .iter()
            .take(4)
            .map(|p| {
                vec![
                    (i, ResidualUnitary::from_rotation(&p[0], self.classes[i])),
                    (j, ResidualUnitary::from_rotation(&p[1], self.classes[j])),
                ]
            })
            .collect())
    }

    fn finish(&self, mut asg: Assignment) -> Leaf {
        let unsolved = asg.unsolved();
        for &q in &unsolved {
            asg.set(q, ResidualUnitary::identity(self.classes[q]), note(SolveMethod::Default, None, 0));
        }
        if !unsolved.is_empty() {
            let list: Vec<String> = unsolved.iter().map(|q| (q + 1).to_string()).collect();
            asg.log.push(format!("qubits {} undetermined through order 3; identity used", list.join(", ")));
        }
        Leaf {
            residual: self.full_residual(&asg.rots),
            order_limited: !unsolved.is_empty(),
            asg,
        }
    }

    fn apply(&self, asg: &Assignment, step: &Step, cand: &[(usize, ResidualUnitary)]) -> Assignment {
        let mut child = asg.clone();
        for &(q, u) in cand {
            let note = step.notes.iter().find(|(p, _)| *p == q).map(|(_, nt)| *nt).expect("note per qubit");
            child.set(q, u, note);
        }
        child.log.push(step.label.clone());
        child
    }

    fn greedy_finish(&self, mut asg: Assignment, evidence: &RefCell<Vec<String>>) -> Leaf {
        while let Some(step) = self.first_step(&asg, &ALL_STEPS, evidence) {
            let cand = step.candidates[0].clone();
            asg = self.apply(&asg, &step, &cand);
        }
        self.finish(asg)
    }

    fn search(&self, asg: Assignment, budget: &mut usize, best: &mut Option<Leaf>, evidence: &RefCell<Vec<String>>) -> Option<Leaf> {
        let Some(step) = self.first_step(&asg, &ALL_STEPS, evidence) else {
            let leaf = self.finish(asg);
            let done = leaf.residual <= self.tol.verify;
            keep_best(best, leaf.clone());
            return done.then_some(leaf);
        };
        for (rejected, cand) in step.candidates.iter().enumerate() {
            if *budget == 0 {
                break;
            }
            *budget -= 1;
            let mut child = self.apply(&asg, &step, cand);
            if rejected > 0 {
                child.log.push(format!("({rejected} earlier candidate(s) rejected)"));
            }
            if self.partial_residual(&child) <= self.tol.verify {
                if let Some(leaf) = self.search(child, budget, best, evidence) {
                    return Some(leaf);
                }
            } else {
                keep_best(best, self.greedy_finish(child, evidence));
            }
        }
        None
    }
}

#[derive(Debug, Clone)]
struct Leaf {
    asg: Assignment,
    residual: f64,
    order_limited: bool,
}

fn keep_best(best: &mut Option<Leaf>, leaf: Leaf) {
    if best.as_ref().is_none_or(|b| leaf.residual < b.residual) {
        *best = Some(leaf);
    }
}

fn note(method: SolveMethod, partner: Option<usize>, order: usize) -> SolveNote {
    SolveNote { method, partner, order }
}

/// Keeps failures that certify non-equivalence: they compare quantities no
/// residual unitary can change.
fn push_evidence(evidence: &RefCell<Vec<String>>, i: usize, j: usize, e: SolverError) {
    if !e.is_certificate() {
        return;
    }
    let msg = format!("qubits {} and {}: {e}", i + 1, j + 1);
    let mut ev = evidence.borrow_mut();
    if !ev.contains(&msg) {
        ev.push(msg);
    }
}

/// Runs the closed-form solvers with backtracking and returns the best
/// complete assignment found.
pub(crate) fn plan(ctx: &SolveContext) -> Plan {
    let evidence = RefCell::new(Vec::new());
    let mut budget = NODE_BUDGET;
    let mut best = None;
    let found = ctx.search(Assignment::empty(ctx.n), &mut budget, &mut best, &evidence);
    let leaf = found.or(best).expect("search visits at least one leaf");
    Plan {
        residuals: leaf.asg.residuals.iter().map(|u| u.expect("complete")).collect(),
        notes: leaf.asg.notes.iter().map(|nt| nt.expect("complete")).collect(),
        residual: leaf.residual,
        order_limited: leaf.order_limited,
        evidence: evidence.into_inner(),
        log: leaf.asg.log,
    }
}

/// Joint Levenberg–Marquardt refinement of every qubit, from the plan and
/// from seeded perturbations of it. Returns residuals and relative residual
/// of the first start that verifies, else of the best start.
pub(crate) fn polish(ctx: &SolveContext, start: &[ResidualUnitary], seed: u64, starts: usize) -> (Vec<ResidualUnitary>, f64) {
    let n = ctx.n;
    let kinds: Vec<RotationKind> = (0..n).map(|q| ctx.kind(q)).collect();
    let model = CoefficientModel {
        n,
        base: ctx.r.to_vec(),
        target: ctx.r_prime.to_vec(),
        free: (0..n).collect(),
        kinds: kinds.clone(),
        mask: (0..1usize << (2 * n)).collect(),
    };
    let scale = ctx.scale();
    let base: Vec<Rot3> = start.iter().map(|u| u.rotation()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(Vec<Rot3>, f64)> = None;
    for s in 0..starts {
        let init: Vec<Rot3> = if s == 0 {
            base.clone()
        } else {
            let spread = if s <= starts / 3 { 0.3 } else { PI };
            base.iter()
                .zip(&kinds)
                .map(|(r, kind)| random_rotation(&mut rng, *kind, spread) * r)
                .collect()
        };
        let fit = levenberg_marquardt(&model, init, 1e-3 * ctx.tol.verify * scale, 200);
        let rel = fit.residual / scale;
        if best.as_ref().is_none_or(|b| rel < b.1) {
            best = Some((fit.rots, rel));
        }
        if rel <= ctx.tol.verify {
            break;
        }
    }
    let (rots, rel) = best.expect("at least one start");
    let residuals = rots
        .iter()
        .zip(ctx.classes)
        .map(|(r, c)| ResidualUnitary::from_rotation(r, *c))
        .collect();
    (residuals, rel)
}

fn random_rotation(rng: &mut ChaCha8Rng, kind: RotationKind, spread: f64) -> Rot3 {
    match kind {
        RotationKind::AboutZ => rotation_z(rng.random_range(-spread..spread) * 2.0),
        RotationKind::Free => {
            let axis = Vector3::from_fn(|_, _| rng.sample::<f64, _>(StandardNormal));
            let axis = if axis.norm() > 0.0 { axis.normalize() } else { Vector3::z() };
            rotation_about(axis, rng.random_range(-spread..spread))
        }
    }
}

/// Solves unsolved qubits from order-3 correlations once order 2 carries no
/// usable information for them.
///
/// `solved[q]` holds already known residuals. When some order-2 solver still
/// applies to an unsolved qubit the input is returned unchanged. Fails with
/// `OrderLimitExceeded` when unsolved qubits remain and no coefficient
/// through order 3 involving them survives the null gate.
pub fn escalate_order(
    reference: &PauliCoefficients,
    reference_prime: &PauliCoefficients,
    classes: &[SymmetryClass],
    solved: &[Option<ResidualUnitary>],
    tol: &Tolerances,
) -> Result<Vec<Option<ResidualUnitary>>, SolverError> {
    let n = reference.n();
    if reference_prime.n() != n || classes.len() != n || solved.len() != n {
        return Err(SolverError::InconsistentCoefficients(format!(
            "expected {n} qubits in every argument"
        )));
    }
    let ctx = SolveContext {
        n,
        r: reference.as_slice(),
        r_prime: reference_prime.as_slice(),
        classes,
        tol,
    };
    let evidence = RefCell::new(Vec::new());
    let mut asg = Assignment::empty(n);
    for (q, u) in solved.iter().enumerate() {
        if let Some(u) = u {
            asg.set(q, *u, note(SolveMethod::Default, None, 0));
        }
    }
    if ctx.first_step(&asg, &ORDER2_STEPS, &evidence).is_some() {
        return Ok(solved.to_vec());
    }
    while let Some(step) = ctx.first_step(&asg, &ORDER3_STEPS, &evidence) {
        let cand = step.candidates[0].clone();
        asg = ctx.apply(&asg, &step, &cand);
    }
    let unsolved = asg.unsolved();
    if !unsolved.is_empty() && !ctx.informative_through_order3(&unsolved) {
        return Err(SolverError::OrderLimitExceeded { unsolved });
    }
    Ok(asg.residuals)
}

impl SolveContext<'_> {
    /// Whether any coefficient of weight ≤ 3 moves under some unsolved
    /// qubit's rotation and survives the null gate.
    fn informative_through_order3(&self, unsolved: &[usize]) -> bool {
        let n = self.n;
        (0..1usize << (2 * n)).any(|k| {
            let digits: Vec<usize> = (0..n).map(|q| (k >> (2 * (n - 1 - q))) & 3).collect();
            if digits.iter().filter(|&&d| d != 0).count() > 3 {
                return false;
            }
            let moves = unsolved.iter().any(|&q| match digits[q] {
                0 => false,
                3 => !self.weak(q),
                _ => true,
            });
            moves && self.r[k].abs().max(self.r_prime[k].abs()) > self.tol.coef
        })
    }
}
