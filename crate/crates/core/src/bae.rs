//! Bethe ansatz equations for the roots `z_k` of `p_N(z)`.
//!
//! For `P = A2 z^2 + A1 z + A0` and `Q = q2 z^2 + q1 z + q0` the equations are
//!
//! ```text
//! A2 z_k^2 + (A1 - q2/2) z_k + A0 - q1/4 - sum_{l != k} Q(z_k) / (z_k - z_l) = 0
//! ```
//!
//! They are exactly the conditions for the simple poles of `V_N` at the `z_k`
//! to cancel.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::f64::consts::PI;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::CMatrix;
use crate::model::MapKind;
use crate::oracle::{classical_zeros, ClassicalKind};
use crate::{c64, Error, Model, ModelSpec, Poly, Result, Solvability, C64};

/// Converged residual threshold (infinity norm).
pub const RESIDUAL_TOL: f64 = 1e-12;
/// Residual accepted when Newton stagnates at round-off.
pub const STAGNATION_TOL: f64 = 1e-10;
/// Minimum root separation allowed during a Newton step.
pub const STEP_SEPARATION: f64 = 1e-6;
/// Minimum root separation of a valid solution.
pub const FINAL_SEPARATION: f64 = 1e-9;
pub const MAX_NEWTON_ITER: usize = 200;
const MAX_GUARD_HITS: usize = 50;
const MAX_HALVINGS: usize = 40;
const DEDUP_TOL: f64 = 1e-8;

/// A solution of the Bethe ansatz equations in canonical order.
#[derive(Clone, Debug, PartialEq)]
pub struct RootSet {
    roots: Vec<C64>,
    residual_norm: f64,
}

impl RootSet {
    /// Sorts the roots lexicographically by `(Re, Im)` after rounding to 1e-9.
    pub fn new(mut roots: Vec<C64>, residual_norm: f64) -> Self {
        roots.sort_by(canonical_cmp);
        RootSet { roots, residual_norm }
    }

    pub fn empty() -> Self {
        RootSet { roots: Vec::new(), residual_norm: 0.0 }
    }

    pub fn roots(&self) -> &[C64] {
        &self.roots
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn residual_norm(&self) -> f64 {
        self.residual_norm
    }

    pub fn sum(&self) -> C64 {
        self.roots.iter().sum()
    }

    pub fn min_separation(&self) -> f64 {
        min_separation(&self.roots)
    }

    /// `p_N(z) = prod_k (z - z_k)`.
    pub fn polynomial(&self) -> Poly {
        Poly::from_roots(&self.roots)
    }

    /// For two roots, `(p, q) = (z_1 + z_2, z_1 - z_2)`.
    pub fn symmetric_pair(&self) -> Option<(C64, C64)> {
        match self.roots.as_slice() {
            [z1, z2] => Some((z1 + z2, z1 - z2)),
            _ => None,
        }
    }

    fn same_as(&self, other: &RootSet) -> bool {
        self.roots.len() == other.roots.len()
            && self
                .roots
                .iter()
                .zip(&other.roots)
                .all(|(a, b)| (a - b).norm() <= DEDUP_TOL * a.norm().max(1.0))
    }
}

fn round9(v: f64) -> f64 {
    (v * 1e9).round()
}

fn canonical_cmp(a: &C64, b: &C64) -> Ordering {
    round9(a.re)
        .total_cmp(&round9(b.re))
        .then(round9(a.im).total_cmp(&round9(b.im)))
}

fn min_separation(z: &[C64]) -> f64 {
    let mut m = f64::INFINITY;
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            m = m.min((z[i] - z[j]).norm());
        }
    }
    m
}

fn inf_norm(v: &[C64]) -> f64 {
    v.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

struct Coeffs {
    a2: C64,
    b1: C64,
    b0: C64,
    q: Poly,
    dq: Poly,
}

impl Coeffs {
    fn new(spec: &ModelSpec) -> Self {
        let (p, q) = (&spec.p, &spec.q);
        Coeffs {
            a2: p.coeff(2),
            b1: p.coeff(1) - q.coeff(2) * 0.5,
            b0: p.coeff(0) - q.coeff(1) * 0.25,
            dq: q.derivative(),
            q: q.clone(),
        }
    }

    fn residual(&self, z: &[C64]) -> Result<Vec<C64>> {
        let mut out = Vec::with_capacity(z.len());
        for (k, &zk) in z.iter().enumerate() {
            let qk = self.q.eval(zk);
            let mut sum = C64::zero();
            for (l, &zl) in z.iter().enumerate() {
                if l != k {
                    let d = zk - zl;
                    if d.is_zero() {
                        return Err(Error::CoincidentRoots);
                    }
                    sum += qk / d;
                }
            }
            out.push(self.a2 * zk * zk + self.b1 * zk + self.b0 - sum);
        }
        Ok(out)
    }

    fn jacobian(&self, z: &[C64]) -> Result<CMatrix> {
        let n = z.len();
        let mut jac = CMatrix::zeros(n, n);
        for k in 0..n {
            let qk = self.q.eval(z[k]);
            let dqk = self.dq.eval(z[k]);
            let mut diag = self.a2 * z[k] * 2.0 + self.b1;
            for l in 0..n {
                if l == k {
                    continue;
                }
                let d = z[k] - z[l];
                if d.is_zero() {
                    return Err(Error::CoincidentRoots);
                }
                let d2 = d * d;
                diag -= (dqk * d - qk) / d2;
                jac[(k, l)] = -qk / d2;
            }
            jac[(k, k)] = diag;
        }
        Ok(jac)
    }
}

/// Residual of each equation at the given roots.
pub fn residual(spec: &ModelSpec, roots: &[C64]) -> Result<Vec<C64>> {
    Coeffs::new(spec).residual(roots)
}

/// Analytic Jacobian `d residual_k / d z_l`.
pub fn jacobian(spec: &ModelSpec, roots: &[C64]) -> Result<CMatrix> {
    Coeffs::new(spec).jacobian(roots)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FailureReason {
    MaxIterations,
    CollisionGuard,
    SingularJacobian,
    NonFinite,
    CoincidentSeed,
}

/// A Newton run that did not converge, with its last iterate.
#[derive(Clone, Debug, PartialEq)]
pub struct SolveFailure {
    pub last: Vec<C64>,
    pub residual: f64,
    pub reason: FailureReason,
    pub iterations: usize,
}

/// Damped Newton iteration from `seed`.
///
/// The step is halved while the residual norm does not decrease and is
/// shortened so that no pair of roots comes closer than [`STEP_SEPARATION`].
pub fn solve_from(spec: &ModelSpec, seed: &[C64]) -> core::result::Result<RootSet, SolveFailure> {
    let eq = Coeffs::new(spec);
    let mut z = seed.to_vec();
    let fail = |z: &[C64], residual, reason, iterations| SolveFailure {
        last: z.to_vec(),
        residual,
        reason,
        iterations,
    };
    if z.is_empty() {
        return Ok(RootSet::empty());
    }
    let mut f = match eq.residual(&z) {
        Ok(f) => f,
        Err(_) => return Err(fail(&z, f64::INFINITY, FailureReason::CoincidentSeed, 0)),
    };
    let mut norm = inf_norm(&f);
    let mut guard_hits = 0;
    for iter in 0..=MAX_NEWTON_ITER {
        if !norm.is_finite() {
            return Err(fail(&z, norm, FailureReason::NonFinite, iter));
        }
        if norm <= RESIDUAL_TOL {
            return finish(z, norm, iter);
        }
        if iter == MAX_NEWTON_ITER {
            break;
        }
        let jac = match eq.jacobian(&z) {
            Ok(j) => j,
            Err(_) => return Err(fail(&z, norm, FailureReason::CoincidentSeed, iter)),
        };
        let rhs: Vec<C64> = f.iter().map(|v| -v).collect();
        let step = match jac.solve(&rhs) {
            Ok(s) if s.iter().all(|c| c.is_finite()) => s,
            _ => return Err(fail(&z, norm, FailureReason::SingularJacobian, iter)),
        };

        let trial = |lambda: f64| -> Vec<C64> {
            z.iter().zip(&step).map(|(a, d)| a + d * lambda).collect()
        };
        let mut lambda = 1.0;
        let mut guarded = false;
        for _ in 0..MAX_HALVINGS {
            if min_separation(&trial(lambda)) >= STEP_SEPARATION {
                break;
            }
            guarded = true;
            lambda *= 0.5;
        }
        if guarded {
            guard_hits += 1;
            if guard_hits >= MAX_GUARD_HITS {
                return Err(fail(&z, norm, FailureReason::CollisionGuard, iter));
            }
        } else {
            guard_hits = 0;
        }

        let mut accepted = None;
        let mut lam = lambda;
        for _ in 0..MAX_HALVINGS {
            let cand = trial(lam);
            if let Ok(fc) = eq.residual(&cand) {
                let nc = inf_norm(&fc);
                if nc < norm {
                    accepted = Some((cand, fc, nc));
                    break;
                }
            }
            lam *= 0.5;
        }
        match accepted {
            Some((zc, fc, nc)) => {
                z = zc;
                f = fc;
                norm = nc;
            }
            None if norm <= STAGNATION_TOL => return finish(z, norm, iter),
            None => {
                // Take the shortest step anyway to leave a flat region.
                let cand = trial(lam);
                match eq.residual(&cand) {
                    Ok(fc) => {
                        norm = inf_norm(&fc);
                        z = cand;
                        f = fc;
                    }
                    Err(_) => return Err(fail(&z, norm, FailureReason::CollisionGuard, iter)),
                }
            }
        }
    }
    Err(fail(&z, norm, FailureReason::MaxIterations, MAX_NEWTON_ITER))
}

fn finish(z: Vec<C64>, norm: f64, iter: usize) -> core::result::Result<RootSet, SolveFailure> {
    if min_separation(&z) <= FINAL_SEPARATION {
        return Err(SolveFailure {
            last: z,
            residual: norm,
            reason: FailureReason::CollisionGuard,
            iterations: iter,
        });
    }
    Ok(RootSet::new(z, norm))
}

/// One converged root set with its energy and the start that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub rootset: RootSet,
    pub energy: C64,
    pub seed_index: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Enumeration {
    /// Distinct solutions sorted by `Re E`, then `Im E`.
    pub solutions: Vec<Solution>,
    /// `N + 1` for QES models, 1 for ES models, unknown otherwise.
    pub expected: Option<usize>,
    pub starts_budget: usize,
    pub starts_used: usize,
    pub rng_seed: u64,
}

impl Enumeration {
    pub fn complete(&self) -> bool {
        self.expected.is_none_or(|e| self.solutions.len() == e)
    }

    pub fn energies(&self) -> Vec<C64> {
        self.solutions.iter().map(|s| s.energy).collect()
    }
}

/// Default multi-start budget, `64 (N + 1)`.
pub fn default_starts(n: usize) -> usize {
    64 * (n + 1)
}

/// Multi-start search for all solutions.
///
/// Start 0 uses scaled classical zeros (Hermite for `Q` constant, Laguerre for
/// `Q` linear) where they exist; every other start draws the roots uniformly
/// from a disc whose radius grows with the start index. Start `i` uses stream
/// `i` of a ChaCha8 generator keyed by `rng_seed`, so results do not depend on
/// evaluation order.
pub fn enumerate_solutions(model: &Model, starts: usize, rng_seed: u64) -> Enumeration {
    let spec = model.spec();
    let n = spec.n;
    let expected = match spec.classify() {
        Solvability::QuasiExactlySolvable => Some(n + 1),
        Solvability::ExactlySolvable => Some(1),
        Solvability::SingleState => None,
    };
    let mut found: Vec<Solution> = Vec::new();
    let mut used = 0;
    if n == 0 {
        found.push(Solution {
            rootset: RootSet::empty(),
            energy: model.energy(&[]),
            seed_index: 0,
        });
        used = 1;
    } else {
        let scale = length_scale(spec);
        let classical = classical_seed(model);
        for index in 0..starts {
            if expected.is_some_and(|e| found.len() >= e) {
                break;
            }
            used = index + 1;
            let seed = match (index, &classical) {
                (0, Some(s)) => s.clone(),
                _ => random_seed(n, scale, index, starts, rng_seed),
            };
            let Ok(rs) = solve_from(spec, &seed) else { continue };
            if found.iter().any(|s| s.rootset.same_as(&rs)) {
                continue;
            }
            found.push(Solution {
                energy: model.energy(rs.roots()),
                rootset: rs,
                seed_index: index,
            });
        }
    }
    found.sort_by(|a, b| {
        a.energy
            .re
            .total_cmp(&b.energy.re)
            .then(a.energy.im.total_cmp(&b.energy.im))
    });
    Enumeration {
        solutions: found,
        expected,
        starts_budget: starts,
        starts_used: used,
        rng_seed,
    }
}

/// Typical root modulus: the roots of the one-root equation, widened by sqrt(N).
fn length_scale(spec: &ModelSpec) -> f64 {
    let c = Coeffs::new(spec);
    let single = Poly::new(vec![c.b0, c.b1, c.a2]);
    let base = match single.degree() {
        d if d >= 1 => single
            .roots()
            .map(|r| r.iter().map(|z| z.norm()).fold(1.0, f64::max))
            .unwrap_or(1.0),
        _ => 1.0,
    };
    base * (spec.n as f64).sqrt().max(1.0)
}

fn random_seed(n: usize, scale: f64, index: usize, starts: usize, rng_seed: u64) -> Vec<C64> {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    rng.set_stream(index as u64);
    let radius = scale * (0.25 + 2.75 * index as f64 / starts.max(1) as f64);
    (0..n)
        .map(|_| {
            let r = radius * rng.random::<f64>().sqrt();
            let theta = 2.0 * PI * rng.random::<f64>();
            C64::from_polar(r, theta)
        })
        .collect()
}

/// Classical zeros mapped onto the roots of the `A2 = 0` part of the equations.
fn classical_seed(model: &Model) -> Option<Vec<C64>> {
    let spec = model.spec();
    let n = spec.n;
    let (p, q) = (&spec.p, &spec.q);
    let a1 = p.coeff(1);
    if a1.norm() == 0.0 {
        return None;
    }
    match model.map().kind {
        MapKind::Linear { .. } => {
            // z = y sqrt(q0 / A1) - A0 / A1, y a zero of H_N.
            let s = (q.coeff(0) / a1).sqrt();
            let shift = -p.coeff(0) / a1;
            let ys = classical_zeros(ClassicalKind::Hermite, n, 0.0);
            Some(ys.into_iter().map(|y| s * y + shift).collect())
        }
        MapKind::Quadratic { .. } => {
            // With u = z - c and Q = q1 u: u = y / s, s = 2 A1 / q1,
            // y a zero of L_N^(alpha), alpha = -2 (A1 c + A0 - q1/4) / q1 - 1/2.
            let c = model.map().shift;
            let q1 = q.coeff(1);
            let s = a1 * 2.0 / q1;
            let alpha = -(a1 * c + p.coeff(0) - q1 * 0.25) * 2.0 / q1 - 0.5;
            if alpha.re <= -1.0 {
                return None;
            }
            let ys = classical_zeros(ClassicalKind::Laguerre, n, alpha.re);
            Some(ys.into_iter().map(|y| c64(y, 0.0) / s + c).collect())
        }
        MapKind::Quadratic2 { .. } => None,
    }
}

/// One branch of the `N = 2` reduction for the sextic oscillator.
#[derive(Clone, Debug, PartialEq)]
pub struct N2Branch {
    /// `p = z_1 + z_2`.
    pub p: C64,
    /// `q^2 = (z_1 - z_2)^2`.
    pub q2: C64,
    pub roots: [C64; 2],
    pub residual: f64,
    pub energy: C64,
    /// `a p + b = 0`: `q^2` was taken from `a (p^2 + q^2) + 2 b p = 6` instead.
    pub via_sum_equation: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct N2Reduction {
    pub branches: Vec<N2Branch>,
    /// Cubic roots that gave no valid root pair.
    pub excluded: Vec<C64>,
}

/// Solves `a^2 p^3 + 3ab p^2 + (2b^2 - 4a) p - 6b = 0` and
/// `q^2 = 2p / (a p + b)` for the sextic model `P = 2a z^2 + 2b z`, `Q = 4z`,
/// `N = 2`. Energies are `E = 9b + 4ap`.
pub fn reduce_n2(a: C64, b: C64) -> Result<N2Reduction> {
    let cubic = Poly::new(vec![b * -6.0, b * b * 2.0 - a * 4.0, a * b * 3.0, a * a]);
    let spec = ModelSpec::sextic_complex(a, b, 2);
    let mut branches = Vec::new();
    let mut excluded = Vec::new();
    for p in cubic.roots()? {
        let denom = a * p + b;
        let degenerate = denom.norm() <= 1e-12 * ((a * p).norm() + b.norm()).max(1e-300);
        let q2 = if degenerate {
            (c64(6.0, 0.0) - b * p * 2.0) / a - p * p
        } else {
            p * 2.0 / denom
        };
        let q = q2.sqrt();
        let roots = [(p + q) * 0.5, (p - q) * 0.5];
        let ok = residual(&spec, &roots).map(|r| inf_norm(&r)).ok();
        match ok {
            Some(res) if res <= STAGNATION_TOL && (roots[0] - roots[1]).norm() > FINAL_SEPARATION => {
                branches.push(N2Branch {
                    p,
                    q2,
                    roots,
                    residual: res,
                    energy: b * 9.0 + a * p * 4.0,
                    via_sum_equation: degenerate,
                })
            }
            _ => excluded.push(p),
        }
    }
    branches.sort_by(|x, y| x.energy.re.total_cmp(&y.energy.re).then(x.energy.im.total_cmp(&y.energy.im)));
    Ok(N2Reduction { branches, excluded })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::vec::Vec;

    const SQRT2: f64 = core::f64::consts::SQRT_2;
    const SQRT3: f64 = 1.732_050_807_568_877_2;

    #[test]
    fn residual_examples() {
        let h = ModelSpec::harmonic(1.0, 1);
        assert_eq!(residual(&h, &[c64(0.0, 0.0)]).unwrap(), vec![C64::zero()]);
        assert_eq!(residual(&h, &[c64(1.0, 0.0)]).unwrap(), vec![c64(1.0, 0.0)]);
        let s = ModelSpec::sextic(1.0, 1.0, 1);
        let r = residual(&s, &[c64((-1.0 + SQRT3) / 2.0, 0.0)]).unwrap();
        assert!(r[0].norm() < 1e-15);
        let h2 = ModelSpec::harmonic(1.0, 2);
        assert_eq!(residual(&h2, &[c64(1.0, 0.0), c64(1.0, 0.0)]), Err(Error::CoincidentRoots));
    }

    #[test]
    fn jacobian_examples() {
        let j = jacobian(&ModelSpec::harmonic(1.0, 1), &[C64::zero()]).unwrap();
        assert_eq!(j[(0, 0)], c64(1.0, 0.0));
        let (x1, x2) = (c64(-0.3, 0.0), c64(0.9, 0.0));
        let j = jacobian(&ModelSpec::harmonic(1.0, 2), &[x1, x2]).unwrap();
        // d/dz_l of -Q(z_k)/(z_k - z_l) is -Q(z_k)/(z_k - z_l)^2.
        let want = -(x1 - x2).powi(-2);
        assert!((j[(0, 1)] - want).norm() < 1e-15 && (j[(1, 0)] - want).norm() < 1e-15);
    }

    #[test]
    fn solve_from_examples() {
        let rs = solve_from(&ModelSpec::harmonic(1.0, 2), &[c64(-0.6, 0.0), c64(0.6, 0.0)]).unwrap();
        let h = 1.0 / SQRT2;
        assert!((rs.roots()[0] - c64(-h, 0.0)).norm() < 1e-12);
        assert!((rs.roots()[1] - c64(h, 0.0)).norm() < 1e-12);
        assert!(rs.residual_norm() <= RESIDUAL_TOL);

        let s = ModelSpec::sextic(1.0, 1.0, 1);
        let up = solve_from(&s, &[c64(0.3, 0.0)]).unwrap();
        assert!((up.roots()[0] - c64((-1.0 + SQRT3) / 2.0, 0.0)).norm() < 1e-12);
        let down = solve_from(&s, &[c64(-1.3, 0.0)]).unwrap();
        assert!((down.roots()[0] - c64((-1.0 - SQRT3) / 2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn solve_from_reports_coincident_seed() {
        let err = solve_from(&ModelSpec::harmonic(1.0, 2), &[c64(0.5, 0.0), c64(0.5, 0.0)]).unwrap_err();
        assert_eq!(err.reason, FailureReason::CoincidentSeed);
        assert_eq!(err.last.len(), 2);
    }

    #[test]
    fn canonical_order() {
        let rs = RootSet::new(vec![c64(1.0, 0.0), c64(-1.0, 2.0), c64(-1.0, -2.0)], 0.0);
        assert_eq!(rs.roots(), &[c64(-1.0, -2.0), c64(-1.0, 2.0), c64(1.0, 0.0)]);
    }

    #[test]
    fn reduce_n2_examples() {
        let red = reduce_n2(c64(1.0, 0.0), c64(1.0, 0.0)).unwrap();
        let ps: Vec<f64> = red.branches.iter().map(|b| b.p.re).collect();
        assert_eq!(ps.len(), 3);
        for want in [-3.0, SQRT2, -SQRT2] {
            assert!(ps.iter().any(|p| (p - want).abs() < 1e-12));
        }
        let b = red.branches.iter().find(|b| (b.p.re - SQRT2).abs() < 1e-9).unwrap();
        assert!((b.q2 - c64(4.0 - 2.0 * SQRT2, 0.0)).norm() < 1e-12);

        let red = reduce_n2(c64(1.0, 0.0), C64::zero()).unwrap();
        let mut ps: Vec<f64> = red.branches.iter().map(|b| b.p.re).collect();
        ps.sort_by(f64::total_cmp);
        assert_eq!(ps.len(), 3);
        for (p, want) in ps.iter().zip([-2.0, 0.0, 2.0]) {
            assert!((p - want).abs() < 1e-12);
        }
        assert!(red.branches.iter().any(|b| b.via_sum_equation));

        // b -> -b maps p -> -p
        let red = reduce_n2(c64(1.0, 0.0), c64(-1.0, 0.0)).unwrap();
        for want in [3.0, SQRT2, -SQRT2] {
            assert!(red.branches.iter().any(|b| (b.p.re - want).abs() < 1e-12));
        }
    }
}
