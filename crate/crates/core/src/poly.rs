//! Univariate polynomials with complex coefficients.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result, C64};

/// Relative tolerance used when comparing or stripping coefficients.
pub const COEFF_TOL: f64 = 1e-12;

const ROOT_MAX_ITER: usize = 500;

/// A polynomial `sum_i coeffs[i] z^i`. Trailing zeros are always stripped, so
/// the zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Poly {
    coeffs: Vec<C64>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<C64>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| C64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: C64) -> Self {
        Self::new(vec![c])
    }

    /// The monic polynomial `prod_k (z - r_k)`.
    pub fn from_roots(roots: &[C64]) -> Self {
        let mut out = Poly::constant(C64::new(1.0, 0.0));
        for &r in roots {
            out = &out * &Poly::new(vec![-r, C64::new(1.0, 0.0)]);
        }
        out
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// Coefficient of `z^i`, zero past the degree.
    pub fn coeff(&self, i: usize) -> C64 {
        self.coeffs.get(i).copied().unwrap_or_else(C64::zero)
    }

    /// Degree, with `-1` for the zero polynomial.
    pub fn degree(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> C64 {
        self.coeffs.last().copied().unwrap_or_else(C64::zero)
    }

    pub fn max_coeff_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// True when every coefficient has a vanishing imaginary part.
    pub fn is_real(&self) -> bool {
        let scale = self.max_coeff_abs().max(f64::MIN_POSITIVE);
        self.coeffs.iter().all(|c| c.im.abs() <= COEFF_TOL * scale)
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs
            .iter()
            .rev()
            .fold(C64::zero(), |acc, &c| acc * z + c)
    }

    pub fn eval_real(&self, x: f64) -> C64 {
        self.eval(C64::new(x, 0.0))
    }

    /// `(p(z), p'(z))` in one Horner pass.
    pub fn eval_with_derivative(&self, z: C64) -> (C64, C64) {
        let mut p = C64::zero();
        let mut dp = C64::zero();
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * i as f64)
                .collect(),
        )
    }

    /// Antiderivative with zero constant term.
    pub fn antiderivative(&self) -> Poly {
        let mut out = Vec::with_capacity(self.coeffs.len() + 1);
        out.push(C64::zero());
        out.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| c / (i as f64 + 1.0)),
        );
        Poly::new(out)
    }

    pub fn scale(&self, s: C64) -> Poly {
        Poly::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Long division: `self = quotient * den + remainder` with
    /// `deg(remainder) < deg(den)`.
    pub fn divmod(&self, den: &Poly) -> Result<(Poly, Poly)> {
        if den.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        let dd = den.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let lead = den.leading();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![C64::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd] / lead;
            quot[k] = c;
            for (j, &d) in den.coeffs.iter().enumerate() {
                rem[k + j] -= c * d;
            }
            rem[k + dd] = C64::zero();
        }
        rem.truncate(dd);
        // Cancellation leaves round-off where exact zeros belong.
        let scale = self.max_coeff_abs();
        for r in rem.iter_mut() {
            if r.norm() <= f64::EPSILON * scale {
                *r = C64::zero();
            }
        }
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    /// All complex roots with multiplicity, by Aberth–Ehrlich iteration.
    ///
    /// Each returned root satisfies
    /// `|p(r)| <= 1e-12 * max|coeff| * max(1, |r|)^deg`.
    pub fn roots(&self) -> Result<Vec<C64>> {
        let deg = self.degree();
        if deg < 1 {
            return Err(Error::ConstantPolynomial);
        }
        let n = deg as usize;
        let lead = self.leading();
        if n == 1 {
            return Ok(vec![-self.coeffs[0] / lead]);
        }
        let monic = self.scale(lead.inv());

        // Initial guesses on a circle of the Cauchy radius, rotated off the axes.
        let radius = 1.0
            + monic.coeffs[..n]
                .iter()
                .map(|c| c.norm())
                .fold(0.0, f64::max);
        let radius = radius.min(1e8);
        let mut z: Vec<C64> = (0..n)
            .map(|k| C64::from_polar(radius, 2.0 * PI * k as f64 / n as f64 + 0.4))
            .collect();

        let scale = self.max_coeff_abs();
        let accepted = |p: &Poly, r: C64| {
            let bound = COEFF_TOL * scale * r.norm().max(1.0).powi(n as i32);
            p.eval(r).norm() <= bound
        };

        let mut polish = 0;
        for iter in 0..ROOT_MAX_ITER {
            let mut largest_step: f64 = 0.0;
            for i in 0..n {
                let (p, dp) = monic.eval_with_derivative(z[i]);
                if p.is_zero() {
                    continue;
                }
                let ratio = if dp.is_zero() {
                    // Nudge off a critical point.
                    C64::new(1e-8 * (1.0 + z[i].norm()), 1e-8)
                } else {
                    p / dp
                };
                let repulsion: C64 = (0..n)
                    .filter(|&j| j != i)
                    .map(|j| (z[i] - z[j]).inv())
                    .sum();
                let denom = C64::new(1.0, 0.0) - ratio * repulsion;
                let step = if denom.is_zero() { ratio } else { ratio / denom };
                if step.is_finite() {
                    z[i] -= step;
                    largest_step = largest_step.max(step.norm() / z[i].norm().max(1.0));
                }
            }
            if z.iter().all(|&r| accepted(self, r)) {
                polish += 1;
                if polish >= 2 || largest_step <= 4.0 * f64::EPSILON {
                    return Ok(z);
                }
            } else if iter + 1 == ROOT_MAX_ITER {
                break;
            }
        }
        if z.iter().all(|&r| accepted(self, r)) {
            return Ok(z);
        }
        Err(Error::RootsNotConverged {
            iterations: ROOT_MAX_ITER,
            best: z,
        })
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![C64::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(C64::new(-1.0, 0.0))
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly { (&self).$m(&rhs) }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: &Poly) -> Poly { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

/// Physicists' Hermite polynomial `H_n` from `H_{k+1} = 2z H_k - 2k H_{k-1}`.
pub fn hermite(n: usize) -> Poly {
    let two_z = Poly::from_real(&[0.0, 2.0]);
    let mut prev = Poly::zero();
    let mut cur = Poly::from_real(&[1.0]);
    for k in 0..n {
        let next = &(&two_z * &cur) - &prev.scale(C64::new(2.0 * k as f64, 0.0));
        prev = cur;
        cur = next;
    }
    cur
}

/// Generalized Laguerre polynomial `L_n^(alpha)` from
/// `(k+1) L_{k+1} = (2k + 1 + alpha - z) L_k - (k + alpha) L_{k-1}`.
pub fn laguerre(n: usize, alpha: f64) -> Poly {
    let mut prev = Poly::zero();
    let mut cur = Poly::from_real(&[1.0]);
    for k in 0..n {
        let kf = k as f64;
        let lin = Poly::from_real(&[2.0 * kf + 1.0 + alpha, -1.0]);
        let next = (&(&lin * &cur) - &prev.scale(C64::new(kf + alpha, 0.0)))
            .scale(C64::new(1.0 / (kf + 1.0), 0.0));
        prev = cur;
        cur = next;
    }
    cur
}
