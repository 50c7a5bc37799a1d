use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::ModelSpec;
use crate::{Error, Poly, Result, C64};

/// `coeff / (z - location)^order`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PoleTerm {
    pub location: C64,
    pub order: u8,
    pub coeff: C64,
}

impl PoleTerm {
    pub fn eval(&self, z: C64) -> C64 {
        let d = z - self.location;
        match self.order {
            1 => self.coeff / d,
            _ => self.coeff / (d * d),
        }
    }
}

/// Roots of a polynomial of degree 1 or 2, with a flag for a double root.
pub(crate) fn small_roots(q: &Poly) -> (Vec<C64>, bool) {
    match q.degree() {
        1 => (vec![-q.coeff(0) / q.coeff(1)], false),
        2 => {
            let (a, b, c) = (q.coeff(2), q.coeff(1), q.coeff(0));
            let disc = b * b - a * c * 4.0;
            let scale = (b * b).norm() + (a * c * 4.0).norm();
            if disc.norm() <= 1e-12 * scale.max(f64::MIN_POSITIVE) {
                return (vec![-b / (a * 2.0)], true);
            }
            let sq = disc.sqrt();
            // Pick the sign that avoids cancellation.
            let t = if (b.conj() * sq).re >= 0.0 { -(b + sq) * 0.5 } else { -(b - sq) * 0.5 };
            (vec![t / a, c / t], false)
        }
        _ => (Vec::new(), false),
    }
}

/// Partial fractions of `rem / q` with `deg rem < deg q <= 2`.
pub(crate) fn partial_fractions(rem: &Poly, q: &Poly) -> Result<Vec<PoleTerm>> {
    if q.degree() > 2 {
        return Err(Error::UnsupportedPrepotential);
    }
    if rem.is_zero() || q.degree() < 1 {
        return Ok(Vec::new());
    }
    let scale = rem.max_coeff_abs() / q.max_coeff_abs();
    let negligible = |c: C64| c.norm() <= 1e-14 * scale;
    let (roots, double) = small_roots(q);
    let mut out = Vec::new();
    if double {
        let zeta = roots[0];
        let q2 = q.coeff(2);
        let c2 = rem.eval(zeta) / q2;
        let c1 = rem.coeff(1) / q2;
        if !negligible(c2) {
            out.push(PoleTerm { location: zeta, order: 2, coeff: c2 });
        }
        if !negligible(c1) {
            out.push(PoleTerm { location: zeta, order: 1, coeff: c1 });
        }
    } else {
        let dq = q.derivative();
        for zeta in roots {
            let c = rem.eval(zeta) / dq.eval(zeta);
            if !negligible(c) {
                out.push(PoleTerm { location: zeta, order: 1, coeff: c });
            }
        }
    }
    Ok(out)
}

/// `V_0 = (P^2 - Q P' + P Q'/2) / Q` split into a polynomial part `S(z)` and
/// pole terms, together with the data needed for the `N`-dependent pieces.
///
/// With Bethe ansatz roots `z_k` imposed, the full potential is
/// `V_N(z) = S(z) + poles + q2 N^2 - 2 A1 N - 2 A2 N z - 2 A2 sum_k z_k`.
/// The physical potential drops the constant:
/// `V(z) = S(z) - S0 + poles - 2 A2 N z`, and the energy is minus the constant.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalPotential {
    pub s: Poly,
    pub pole_terms: Vec<PoleTerm>,
    pub s0: C64,
    /// Coefficient of `z` added for level `N`: `-2 A2 N`.
    pub linear_n_term: C64,
    pub q2: C64,
    pub a1: C64,
    pub a2: C64,
    pub n: usize,
}

impl RationalPotential {
    pub fn new(spec: &ModelSpec) -> Result<Self> {
        let (p, q) = (&spec.p, &spec.q);
        let numerator = &(&(p * p) - &(q * &p.derivative()))
            + &(p * &q.derivative()).scale(C64::new(0.5, 0.0));
        let (s, rem) = numerator.divmod(q)?;
        let pole_terms = partial_fractions(&rem, q)?;
        let a2 = p.coeff(2);
        Ok(RationalPotential {
            s0: s.coeff(0),
            linear_n_term: a2 * (-2.0 * spec.n as f64),
            s,
            pole_terms,
            q2: q.coeff(2),
            a1: p.coeff(1),
            a2,
            n: spec.n,
        })
    }

    /// `V_0(z) = S(z) + sum of pole terms`.
    pub fn v0(&self, z: C64) -> C64 {
        self.s.eval(z) + self.poles(z)
    }

    fn poles(&self, z: C64) -> C64 {
        self.pole_terms.iter().map(|t| t.eval(z)).sum()
    }

    /// Physical potential `S(z) - S0 + poles - 2 A2 N z`.
    pub fn physical(&self, z: C64) -> C64 {
        self.s.eval(z) - self.s0 + self.poles(z) + self.linear_n_term * z
    }

    /// Additive constant of `V_N`: `S0 + q2 N^2 - 2 A1 N - 2 A2 sum_k z_k`.
    pub fn constant(&self, roots: &[C64]) -> C64 {
        let n = self.n as f64;
        let sum: C64 = roots.iter().sum();
        self.s0 + self.q2 * (n * n) - self.a1 * (2.0 * n) - self.a2 * sum * 2.0
    }

    /// `E = -(constant of V_N)`, so that `(-d^2/dx^2 + V) phi_N = E phi_N`.
    pub fn energy(&self, roots: &[C64]) -> C64 {
        assert_eq!(roots.len(), self.n, "energy needs exactly N roots");
        -self.constant(roots)
    }

    /// The full `V_N(z)` in pole-free form (physical potential plus constant).
    pub fn v_n(&self, z: C64, roots: &[C64]) -> C64 {
        self.v0(z) + self.linear_n_term * z + (self.constant(roots) - self.s0)
    }
}
