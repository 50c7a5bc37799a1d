//! Models defined by `(P, Q, N)`: classification, coordinate map,
//! prepotential, potential and eigenfunctions.

mod coords;
mod potential;
mod prepotential;

use alloc::string::String;
use alloc::vec;

use num_traits::Zero;

#[allow(unused_imports)]
use num_traits::Float;

pub use coords::{CoordinateMap, Domain, HyperbolicForm, MapKind};
pub use potential::{PoleTerm, RationalPotential};
pub use prepotential::{Prepotential, PrepotentialTerm};

use crate::{c64, Error, Poly, Result, C64};

/// The pair `(P, Q)` with `W_0' z' = P(z)`, `z'^2 = Q(z)`, plus the level count.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelSpec {
    pub p: Poly,
    pub q: Poly,
    pub n: usize,
    pub label: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Solvability {
    ExactlySolvable,
    QuasiExactlySolvable,
    SingleState,
}

impl ModelSpec {
    pub fn new(p: Poly, q: Poly, n: usize, label: impl Into<String>) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::ZeroQ);
        }
        Ok(ModelSpec { p, q, n, label: label.into() })
    }

    /// `P = b z`, `Q = 1`.
    pub fn harmonic(b: f64, n: usize) -> Self {
        Self::known(Poly::from_real(&[0.0, b]), Poly::from_real(&[1.0]), n, "harmonic")
    }

    /// `P = -i (c/2) z`, `Q = 1`: inverted oscillator with complex spectrum.
    pub fn qnm_harmonic(c: f64, n: usize) -> Self {
        let p = Poly::new(vec![C64::zero(), c64(0.0, -0.5 * c)]);
        Self::known(p, Poly::from_real(&[1.0]), n, "qnm-harmonic")
    }

    /// `P = 2a z - 2l`, `Q = 4z`.
    pub fn radial(a: f64, ell: f64, n: usize) -> Self {
        Self::known(Poly::from_real(&[-2.0 * ell, 2.0 * a]), Poly::from_real(&[0.0, 4.0]), n, "radial")
    }

    /// The radial oscillator with `a -> -i a`.
    pub fn qnm_radial(a: f64, ell: f64, n: usize) -> Self {
        let p = Poly::new(vec![c64(-2.0 * ell, 0.0), c64(0.0, -2.0 * a)]);
        Self::known(p, Poly::from_real(&[0.0, 4.0]), n, "qnm-radial")
    }

    /// `P = 2a z^2 + 2b z`, `Q = 4z`: the sextic oscillator.
    pub fn sextic(a: f64, b: f64, n: usize) -> Self {
        Self::sextic_complex(c64(a, 0.0), c64(b, 0.0), n)
    }

    pub fn sextic_complex(a: C64, b: C64, n: usize) -> Self {
        let p = Poly::new(vec![C64::zero(), b * 2.0, a * 2.0]);
        Self::known(p, Poly::from_real(&[0.0, 4.0]), n, "sextic")
    }

    /// `P = i alpha z^2 + beta z + i gamma`, `Q = 1`: the PT-symmetric quartic.
    pub fn pt_quartic(alpha: f64, beta: f64, gamma: f64, n: usize) -> Self {
        let p = Poly::new(vec![c64(0.0, gamma), c64(beta, 0.0), c64(0.0, alpha)]);
        Self::known(p, Poly::from_real(&[1.0]), n, "pt-quartic")
    }

    fn known(p: Poly, q: Poly, n: usize, label: &str) -> Self {
        ModelSpec { p, q, n, label: label.into() }
    }

    pub fn with_level(&self, n: usize) -> Self {
        ModelSpec { n, ..self.clone() }
    }

    /// `(m, n) = (deg P, deg Q)`.
    pub fn degrees(&self) -> (isize, isize) {
        (self.p.degree(), self.q.degree())
    }

    pub fn classify(&self) -> Solvability {
        match self.degrees() {
            (m, n) if m <= 1 && n <= 2 => Solvability::ExactlySolvable,
            (2, n) if n <= 2 => Solvability::QuasiExactlySolvable,
            _ => Solvability::SingleState,
        }
    }

    /// True when both polynomials are real, so the potential and the
    /// algebraic states are real.
    pub fn is_hermitian(&self) -> bool {
        self.p.is_real() && self.q.is_real()
    }
}

/// A model with its coordinate map, prepotential and potential resolved.
#[derive(Clone, Debug, PartialEq)]
pub struct Model {
    spec: ModelSpec,
    map: CoordinateMap,
    prepotential: Prepotential,
    potential: RationalPotential,
}

impl Model {
    pub fn new(spec: ModelSpec) -> Result<Self> {
        if spec.q.is_zero() {
            return Err(Error::ZeroQ);
        }
        let (m, n) = spec.degrees();
        if m > 2 || n > 2 {
            return Err(Error::NotSolvable { deg_p: m, deg_q: n });
        }
        let map = CoordinateMap::from_q(&spec.q)?;
        let prepotential = Prepotential::new(&spec)?;
        let potential = RationalPotential::new(&spec)?;
        Ok(Model { spec, map, prepotential, potential })
    }

    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    pub fn map(&self) -> &CoordinateMap {
        &self.map
    }

    pub fn prepotential(&self) -> &Prepotential {
        &self.prepotential
    }

    pub fn potential(&self) -> &RationalPotential {
        &self.potential
    }

    pub fn domain(&self) -> Domain {
        self.map.domain
    }

    pub fn n(&self) -> usize {
        self.spec.n
    }

    pub fn classify(&self) -> Solvability {
        self.spec.classify()
    }

    pub fn normalizable(&self) -> bool {
        self.prepotential.normalizable(&self.map)
    }

    pub fn energy(&self, roots: &[C64]) -> C64 {
        self.potential.energy(roots)
    }

    /// `W_0(x)`.
    pub fn w0(&self, x: f64) -> C64 {
        self.prepotential.eval_z(self.map.z_of_x(x))
    }

    /// Physical potential at `x`. `z(x)` is evaluated by its formula, which
    /// extends past the domain for even maps (e.g. `z = x^2`).
    pub fn potential_at(&self, x: f64) -> C64 {
        self.potential.physical(c64(self.map.z_of_x(x), 0.0))
    }

    /// Unnormalized `exp(-W_0(x)) prod_k (z(x) - z_k)`.
    pub fn phi(&self, roots: &[C64], x: f64) -> Result<C64> {
        let d = self.map.domain;
        if !d.contains_closed(x) || x.is_infinite() {
            return Err(Error::OutsideDomain { x, lo: d.lo, hi: d.hi });
        }
        Ok(self.phi_unchecked(roots, x))
    }

    pub(crate) fn phi_unchecked(&self, roots: &[C64], x: f64) -> C64 {
        let z = self.map.z_of_x(x);
        let poly: C64 = roots.iter().map(|&r| c64(z, 0.0) - r).product();
        (-self.prepotential.eval_z(z)).exp() * poly
    }

    /// Whether the finite end `x_end` of the domain is a singular point of the
    /// potential or of `W_0`, so a grid must stay strictly inside it.
    pub fn singular_at_end(&self, x_end: f64) -> bool {
        if x_end.is_infinite() {
            return true;
        }
        let zeta = self.map.z_of_x(x_end);
        let near = |r: C64| (r - c64(zeta, 0.0)).norm() <= 1e-9 * (1.0 + zeta.abs());
        self.potential.pole_terms.iter().any(|t| near(t.location))
            || self.prepotential.singular_at(zeta)
    }
}
