//! Sampled eigenfunctions on a uniform grid: normalization, node counts and
//! overlap matrices.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::CMatrix;
use crate::{c64, Error, Model, Result, RootSet, C64};

/// Uniform grid `x_i = x_min + i h`, `h = (x_max - x_min) / (points - 1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub points: usize,
}

/// Samples below this fraction of the peak count as zero when counting nodes.
pub const NODE_DEAD_BAND: f64 = 1e-12;
/// Largest allowed `|phi|` at a truncated infinite end, relative to the peak.
pub const TRUNCATION_TOL: f64 = 1e-10;

impl GridSpec {
    pub fn new(x_min: f64, x_max: f64, points: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite()) {
            return Err(Error::InvalidGrid("grid ends must be finite"));
        }
        if x_min >= x_max {
            return Err(Error::InvalidGrid("x_min must be below x_max"));
        }
        if points < 3 {
            return Err(Error::InvalidGrid("a grid needs at least 3 points"));
        }
        Ok(GridSpec { x_min, x_max, points })
    }

    pub fn full_line() -> Self {
        GridSpec { x_min: -10.0, x_max: 10.0, points: 20001 }
    }

    pub fn half_line() -> Self {
        GridSpec { x_min: 1e-4, x_max: 12.0, points: 24001 }
    }

    /// Default grid for the model's domain. A finite end is kept when the
    /// potential and `W_0` are regular there and pulled inside otherwise.
    pub fn for_model(model: &Model) -> Self {
        let d = model.domain();
        match (d.lo.is_finite(), d.hi.is_finite()) {
            (false, false) => Self::full_line(),
            (true, false) => {
                let inset = if model.singular_at_end(d.lo) { 1e-4 } else { 0.0 };
                GridSpec { x_min: d.lo + inset, x_max: d.lo + 12.0, points: 24001 }
            }
            (false, true) => {
                let inset = if model.singular_at_end(d.hi) { 1e-4 } else { 0.0 };
                GridSpec { x_min: d.hi - 12.0, x_max: d.hi - inset, points: 24001 }
            }
            (true, true) => {
                let w = d.hi - d.lo;
                let lo = if model.singular_at_end(d.lo) { d.lo + 1e-4 * w } else { d.lo };
                let hi = if model.singular_at_end(d.hi) { d.hi - 1e-4 * w } else { d.hi };
                GridSpec { x_min: lo, x_max: hi, points: 20001 }
            }
        }
    }

    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / (self.points - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        if i + 1 == self.points {
            self.x_max
        } else {
            self.x_min + i as f64 * self.spacing()
        }
    }

    pub fn xs(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.points).map(|i| self.x(i))
    }

    /// Same interval with the spacing halved.
    pub fn refine(&self) -> Self {
        GridSpec { points: 2 * self.points - 1, ..*self }
    }
}

/// Composite Simpson rule over grid samples; an even point count finishes with
/// the 3/8 rule on the last three intervals.
pub fn simpson(values: &[C64], h: f64) -> C64 {
    let n = values.len();
    match n {
        0 | 1 => C64::new(0.0, 0.0),
        2 => (values[0] + values[1]) * (h / 2.0),
        _ => {
            let (body, tail) = if n % 2 == 1 { (n, 0) } else { (n - 3, 3) };
            let mut s = values[0] + values[body - 1];
            for (i, v) in values[1..body - 1].iter().enumerate() {
                s += *v * if i % 2 == 0 { 4.0 } else { 2.0 };
            }
            let mut total = s * (h / 3.0);
            if tail == 3 {
                let t = &values[n - 4..];
                total += (t[0] + t[1] * 3.0 + t[2] * 3.0 + t[3]) * (3.0 * h / 8.0);
            }
            total
        }
    }
}

/// An energy with its eigenfunction sampled on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct QesState {
    pub energy: C64,
    pub samples: Vec<C64>,
    /// `sqrt(integral |phi|^2)` of the samples before normalization.
    pub norm: f64,
    /// Sign changes of the real part; only for real states.
    pub nodes: Option<usize>,
    pub rootset: Option<RootSet>,
    pub grid: GridSpec,
}

impl QesState {
    /// Normalizes raw samples, checks the ends listed in `check_ends`
    /// (`[x_min, x_max]`) for truncation, and counts nodes when `real`.
    pub fn from_samples(
        energy: C64,
        samples: Vec<C64>,
        grid: GridSpec,
        check_ends: [bool; 2],
        real: bool,
    ) -> Result<Self> {
        let norm = l2_norm(&samples, &grid);
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::Truncation { end: "grid", ratio: norm });
        }
        let peak = samples.iter().map(|s| s.norm()).fold(0.0, f64::max);
        for (check, idx, end) in [(check_ends[0], 0, "x_min"), (check_ends[1], samples.len() - 1, "x_max")] {
            let ratio = samples[idx].norm() / peak;
            if check && ratio > TRUNCATION_TOL {
                return Err(Error::Truncation { end, ratio });
            }
        }
        // Rotate so the largest sample is real and positive.
        let big = samples.iter().copied().fold(c64(0.0, 0.0), |a, s| if s.norm() > a.norm() { s } else { a });
        let phase = big.conj() / big.norm();
        let samples: Vec<C64> = samples.into_iter().map(|s| s * phase / norm).collect();
        let nodes = real.then(|| count_nodes(&samples));
        Ok(QesState { energy, samples, norm, nodes, rootset: None, grid })
    }
}

fn l2_norm(samples: &[C64], grid: &GridSpec) -> f64 {
    let dens: Vec<C64> = samples.iter().map(|s| c64(s.norm_sqr(), 0.0)).collect();
    simpson(&dens, grid.spacing()).re.sqrt()
}

fn check_grid(model: &Model, grid: &GridSpec) -> Result<()> {
    let d = model.domain();
    for x in [grid.x_min, grid.x_max] {
        if !d.contains_closed(x) {
            return Err(Error::OutsideDomain { x, lo: d.lo, hi: d.hi });
        }
    }
    Ok(())
}

/// Raw samples of `exp(-W_0) prod (z - z_k)` with no normalization or tail
/// checks, for states that need not be square integrable.
pub fn sample_state(model: &Model, rootset: &RootSet, grid: &GridSpec) -> Result<QesState> {
    check_grid(model, grid)?;
    let samples: Vec<C64> = grid.xs().map(|x| model.phi_unchecked(rootset.roots(), x)).collect();
    Ok(QesState {
        energy: model.energy(rootset.roots()),
        norm: l2_norm(&samples, grid),
        samples,
        nodes: None,
        rootset: Some(rootset.clone()),
        grid: *grid,
    })
}

/// Normalized state for a converged root set. Grid ends standing in for
/// infinite domain ends must show a decayed tail.
pub fn build_state(model: &Model, rootset: &RootSet, grid: &GridSpec) -> Result<QesState> {
    check_grid(model, grid)?;
    let samples: Vec<C64> = grid.xs().map(|x| model.phi_unchecked(rootset.roots(), x)).collect();
    let d = model.domain();
    let real = model.spec().is_hermitian() && is_real_set(rootset.roots());
    let mut state = QesState::from_samples(
        model.energy(rootset.roots()),
        samples,
        *grid,
        [d.lo.is_infinite(), d.hi.is_infinite()],
        real,
    )?;
    state.rootset = Some(rootset.clone());
    Ok(state)
}

/// True when the roots are closed under conjugation, so the polynomial is real.
fn is_real_set(roots: &[C64]) -> bool {
    let tol = 1e-8;
    roots.iter().all(|r| roots.iter().any(|s| (r.conj() - s).norm() <= tol * (1.0 + r.norm())))
}

/// Sign changes of `Re phi`, ignoring samples within the dead band around zero.
pub fn count_nodes(samples: &[C64]) -> usize {
    let peak = samples.iter().map(|s| s.re.abs()).fold(0.0, f64::max);
    let band = NODE_DEAD_BAND * peak;
    let mut last = 0.0f64;
    let mut count = 0;
    for s in samples {
        let v = s.re;
        if v.abs() <= band {
            continue;
        }
        if last != 0.0 && v.signum() != last.signum() {
            count += 1;
        }
        last = v;
    }
    count
}

/// Gram matrix `integral conj(phi_i) phi_j dx` of states sampled on `grid`.
pub fn orthogonality(states: &[QesState], grid: &GridSpec) -> CMatrix {
    let h = grid.spacing();
    CMatrix::from_fn(states.len(), states.len(), |i, j| {
        let prod: Vec<C64> = states[i]
            .samples
            .iter()
            .zip(&states[j].samples)
            .map(|(a, b)| a.conj() * b)
            .collect();
        simpson(&prod, h)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bae::enumerate_solutions;
    use crate::ModelSpec;

    fn states_for(spec: ModelSpec) -> (Model, Vec<QesState>, GridSpec) {
        let model = Model::new(spec).unwrap();
        let grid = GridSpec::for_model(&model);
        let en = enumerate_solutions(&model, 64 * (model.n() + 1), 7);
        let states = en
            .solutions
            .iter()
            .map(|s| build_state(&model, &s.rootset, &grid).unwrap())
            .collect();
        (model, states, grid)
    }

    #[test]
    fn grid_validation() {
        assert!(GridSpec::new(1.0, 1.0, 10).is_err());
        assert!(GridSpec::new(0.0, 1.0, 2).is_err());
        assert!(GridSpec::new(0.0, f64::INFINITY, 10).is_err());
        let g = GridSpec::new(-1.0, 1.0, 5).unwrap();
        assert_eq!(g.spacing(), 0.5);
        assert_eq!(g.x(4), 1.0);
        assert_eq!(g.refine().points, 9);
    }

    #[test]
    fn simpson_exact_for_cubics() {
        for n in [5usize, 6, 7, 10] {
            let g = GridSpec::new(0.0, 2.0, n).unwrap();
            let v: Vec<C64> = g.xs().map(|x| c64(x * x * x - x, 0.0)).collect();
            assert!((simpson(&v, g.spacing()).re - 2.0).abs() < 1e-13, "n={n}");
        }
    }

    #[test]
    fn harmonic_ground_norm() {
        let model = Model::new(ModelSpec::harmonic(1.0, 0)).unwrap();
        let grid = GridSpec::for_model(&model);
        let w00 = model.w0(0.0);
        let s = build_state(&model, &RootSet::empty(), &grid).unwrap();
        // phi(0) = exp(-W0(0)); compare the norm of exp(-x^2/2).
        let norm = s.norm / (-w00).exp().norm();
        assert!((norm * norm - core::f64::consts::PI.sqrt()).abs() < 1e-10);
        assert_eq!(s.nodes, Some(0));
    }

    #[test]
    fn node_counts() {
        let (_, states, _) = states_for(ModelSpec::harmonic(1.0, 3));
        assert_eq!(states.len(), 1);
        assert_eq!(states[0].nodes, Some(3));

        let (_, states, _) = states_for(ModelSpec::sextic(1.0, 1.0, 2));
        let nodes: Vec<_> = states.iter().map(|s| s.nodes.unwrap()).collect();
        assert_eq!(nodes, [0, 1, 2]);
        assert!((states[0].energy.re + 3.0).abs() < 1e-9);
    }

    #[test]
    fn nodes_follow_energy_order() {
        for n in 1..=3 {
            let (_, states, _) = states_for(ModelSpec::sextic(1.0, 1.0, n));
            let nodes: Vec<_> = states.iter().map(|s| s.nodes.unwrap()).collect();
            assert!(nodes.windows(2).all(|w| w[0] <= w[1]), "N={n}: {nodes:?}");
        }
    }

    #[test]
    fn sextic_states_orthogonal() {
        for n in [1, 2] {
            let (_, states, grid) = states_for(ModelSpec::sextic(1.0, 1.0, n));
            assert_eq!(states.len(), n + 1);
            let g = orthogonality(&states, &grid);
            assert!(g.max_off_diagonal() <= 1e-6, "N={n}");
            for i in 0..=n {
                assert!((g[(i, i)].re - 1.0).abs() <= 1e-6);
            }
        }
        let (_, states, grid) = states_for(ModelSpec::harmonic(1.0, 0));
        let g = orthogonality(&states, &grid);
        assert!((g[(0, 0)] - c64(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn norm_converges_under_refinement() {
        let model = Model::new(ModelSpec::sextic(1.0, 1.0, 0)).unwrap();
        let grid = GridSpec::for_model(&model);
        let a = build_state(&model, &RootSet::empty(), &grid).unwrap().norm;
        let b = build_state(&model, &RootSet::empty(), &grid.refine()).unwrap().norm;
        assert!((a - b).abs() <= 1e-7 * a);
    }

    #[test]
    fn truncation_detected() {
        let model = Model::new(ModelSpec::harmonic(1.0, 0)).unwrap();
        let grid = GridSpec::new(-3.0, 3.0, 601).unwrap();
        assert!(matches!(build_state(&model, &RootSet::empty(), &grid), Err(Error::Truncation { .. })));
    }

    #[test]
    fn grid_outside_domain_rejected() {
        let model = Model::new(ModelSpec::radial(1.0, 2.0, 0)).unwrap();
        let grid = GridSpec::new(-1.0, 5.0, 101).unwrap();
        assert!(matches!(build_state(&model, &RootSet::empty(), &grid), Err(Error::OutsideDomain { .. })));
    }
}
