//! Rationally extended radial oscillator on `x > 0`, `z = x^2`, deformed by
//! `xi_l(z) = L_l^(alpha)(z)` with `alpha < -l`.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::poly::laguerre;
use crate::spectrum::{GridSpec, QesState};
use crate::{c64, Error, Poly, Result, C64};

/// A root of `xi` closer than this to `[0, inf)` is treated as lying on it.
pub const ZERO_FREE_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtendedSpec {
    pub ell: u32,
    pub alpha: f64,
}

impl ExtendedSpec {
    /// `ell = 0` gives the undeformed radial oscillator.
    pub fn new(ell: u32, alpha: f64) -> Result<Self> {
        let spec = ExtendedSpec { ell, alpha };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.alpha.is_finite() || self.alpha >= -(self.ell as f64) {
            return Err(Error::InvalidExtendedSpec("alpha must be finite and below -ell"));
        }
        Ok(())
    }

    /// `L_l^(alpha)`, checked to have no zero on `[0, inf)`.
    pub fn xi(&self) -> Result<Poly> {
        let xi = laguerre(self.ell as usize, self.alpha);
        if xi.degree() > 0 {
            for root in xi.roots()? {
                if root.re > -ZERO_FREE_TOL && root.im.abs() <= ZERO_FREE_TOL {
                    return Err(Error::DeformingZero { root });
                }
            }
        }
        Ok(xi)
    }

    /// `V(x)` for the given deforming polynomial; `xi = 1` is the plain radial oscillator.
    pub fn potential_with(&self, xi: &Poly, x: f64) -> f64 {
        let z = x * x;
        let (v, dv) = xi.eval_with_derivative(c64(z, 0.0));
        let dln = (dv / v).re;
        let a = self.alpha;
        x * x
            + (a + 0.5) * (a + 1.5) / (x * x)
            + 8.0 * dln * (z * (dln - 1.0) + a + 0.5)
            + 2.0 * (2.0 * self.ell as f64 - a)
    }

    pub fn potential(&self, x: f64) -> f64 {
        self.potential_with(&laguerre(self.ell as usize, self.alpha), x)
    }

    /// `(alpha - n) L_n^(-alpha-1) xi + z L_n^(-alpha) xi'`, of degree `l + n`.
    pub fn p_ln(&self, n: usize) -> Poly {
        let a = self.alpha;
        let xi = laguerre(self.ell as usize, a);
        let z = Poly::from_real(&[0.0, 1.0]);
        laguerre(n, -a - 1.0).scale(c64(a - n as f64, 0.0)) * &xi + z * laguerre(n, -a) * xi.derivative()
    }

    pub fn energy(&self, n: usize) -> f64 {
        4.0 * (n as f64 - self.alpha - self.ell as f64)
    }

    /// Unnormalized `exp(-x^2/2) x^-(alpha + 1/2) p_{l,n}(z) / xi(z)`.
    pub fn phi(&self, n: usize, x: f64) -> f64 {
        self.phi_with(&laguerre(self.ell as usize, self.alpha), &self.p_ln(n), x)
    }

    fn phi_with(&self, xi: &Poly, p: &Poly, x: f64) -> f64 {
        let z = x * x;
        (-z / 2.0).exp() * x.powf(-(self.alpha + 0.5)) * (p.eval_real(z) / xi.eval_real(z)).re
    }

    /// Normalized state `n` on a grid inside `(0, inf)`.
    pub fn extended_state(&self, n: usize, grid: &GridSpec) -> Result<QesState> {
        self.validate()?;
        if grid.x_min <= 0.0 {
            return Err(Error::OutsideDomain { x: grid.x_min, lo: 0.0, hi: f64::INFINITY });
        }
        let xi = self.xi()?;
        let p = self.p_ln(n);
        let samples: Vec<C64> = grid.xs().map(|x| c64(self.phi_with(&xi, &p, x), 0.0)).collect();
        QesState::from_samples(c64(self.energy(n), 0.0), samples, *grid, [false, true], true)
    }
}

/// `x^2 + (alpha + 1/2)(alpha + 3/2)/x^2 - 2 alpha`.
pub fn radial_reference(alpha: f64, x: f64) -> f64 {
    x * x + (alpha + 0.5) * (alpha + 1.5) / (x * x) - 2.0 * alpha
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::schrodinger_residual;
    use crate::spectrum::orthogonality;

    #[test]
    fn xi_examples() {
        let s = ExtendedSpec::new(1, -2.5).unwrap();
        assert_eq!(s.xi().unwrap(), Poly::from_real(&[-1.5, -1.0]));
        let s = ExtendedSpec::new(2, -3.5).unwrap();
        for r in s.xi().unwrap().roots().unwrap() {
            assert!(r.re < 0.0);
        }
        assert!(ExtendedSpec::new(1, 1.0).is_err());
        let bad = ExtendedSpec { ell: 1, alpha: 1.0 };
        assert!(matches!(bad.xi(), Err(Error::DeformingZero { .. })));
    }

    #[test]
    fn p_ln_examples() {
        let s = ExtendedSpec::new(1, -2.5).unwrap();
        let p = s.p_ln(0);
        assert!((p.coeff(0) - c64(3.75, 0.0)).norm() < 1e-14);
        assert!((p.coeff(1) - c64(1.5, 0.0)).norm() < 1e-14);
        let s = ExtendedSpec::new(2, -3.5).unwrap();
        assert_eq!(s.p_ln(3).degree(), 5);
        for n in 0..6 {
            assert_eq!(s.p_ln(n).degree(), 2 + n as isize);
        }
    }

    #[test]
    fn energies() {
        let s = ExtendedSpec::new(1, -2.5).unwrap();
        assert_eq!(s.energy(0), 6.0);
        assert_eq!(s.energy(3), 18.0);
        assert_eq!(s.energy(4) - s.energy(3), 4.0);
    }

    #[test]
    fn potential_limits() {
        let s = ExtendedSpec::new(1, -2.5).unwrap();
        // z dln(xi)/dz -> l, so V - x^2 -> 2(2l - alpha) - 8l.
        let x = 1e3;
        assert!((s.potential(x) - x * x - 1.0).abs() < 1e-4);
        let one = Poly::from_real(&[1.0]);
        let s0 = ExtendedSpec { ell: 0, alpha: -2.5 };
        for i in 1..50 {
            let x = 0.1 * i as f64;
            assert!((s0.potential_with(&one, x) - radial_reference(-2.5, x)).abs() < 1e-12);
            assert!(s.potential(x).is_finite());
        }
    }

    #[test]
    fn states_solve_and_are_orthogonal() {
        let grid = GridSpec::half_line();
        for (ell, alpha) in [(1, -2.5), (2, -3.5)] {
            let s = ExtendedSpec::new(ell, alpha).unwrap();
            let states: Vec<_> = (0..5).map(|n| s.extended_state(n, &grid).unwrap()).collect();
            for st in &states {
                let r = schrodinger_residual(|x| c64(s.potential(x), 0.0), st.energy, &st.samples, &grid);
                assert!(r <= 1e-6, "l={ell} E={}: {r}", st.energy);
            }
            assert!(orthogonality(&states, &grid).max_off_diagonal() <= 1e-6);
        }
    }
}
