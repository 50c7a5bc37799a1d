use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::coords::{Approach, CoordinateMap, EndLimit, Endpoint};
use super::potential::partial_fractions;
use super::ModelSpec;
use crate::{Poly, Result, C64};

const ROOT_MATCH: f64 = 1e-9;

/// One term of `F(z) = integral of P/Q dz`.
#[derive(Clone, Debug, PartialEq)]
pub enum PrepotentialTerm {
    /// Polynomial in `z` (no constant term).
    Polynomial(Poly),
    /// `coeff * log(z - root)`; for a real root this is `coeff * ln|z - root|`.
    Log { coeff: C64, root: C64 },
    /// `coeff / (z - root)`.
    Inverse { coeff: C64, root: C64 },
}

impl PrepotentialTerm {
    pub fn eval(&self, z: f64) -> C64 {
        match self {
            PrepotentialTerm::Polynomial(p) => p.eval_real(z),
            PrepotentialTerm::Log { coeff, root } => {
                if root.im == 0.0 {
                    *coeff * (z - root.re).abs().ln()
                } else {
                    // Im(z - root) never changes sign along the real axis, so the
                    // principal branch is continuous there.
                    *coeff * (C64::new(z, 0.0) - root).ln()
                }
            }
            PrepotentialTerm::Inverse { coeff, root } => *coeff / (C64::new(z, 0.0) - root),
        }
    }
}

/// Closed-form `W_0(x) = F(z(x))` with `F' = P/Q`, up to an additive constant.
#[derive(Clone, Debug, PartialEq)]
pub struct Prepotential {
    pub terms: Vec<PrepotentialTerm>,
}

impl Prepotential {
    pub fn new(spec: &ModelSpec) -> Result<Self> {
        let (quot, rem) = spec.p.divmod(&spec.q)?;
        let mut terms = Vec::new();
        let poly = quot.antiderivative();
        if !poly.is_zero() {
            terms.push(PrepotentialTerm::Polynomial(poly));
        }
        for pole in partial_fractions(&rem, &spec.q)? {
            let root = snap_real(pole.location);
            terms.push(match pole.order {
                1 => PrepotentialTerm::Log { coeff: pole.coeff, root },
                _ => PrepotentialTerm::Inverse { coeff: -pole.coeff, root },
            });
        }
        Ok(Prepotential { terms })
    }

    /// `F(z)`.
    pub fn eval_z(&self, z: f64) -> C64 {
        self.terms.iter().map(|t| t.eval(z)).sum()
    }

    /// Whether `|exp(-W_0)|^2` is integrable at both ends of the domain, judged
    /// from the leading asymptotic term of `Re W_0` at each end.
    pub fn normalizable(&self, map: &CoordinateMap) -> bool {
        map.endpoints().iter().all(|e| self.end_ok(e))
    }

    fn end_ok(&self, end: &Endpoint) -> bool {
        match end.limit {
            EndLimit::Infinite { sign } => {
                if let Some(p) = self.polynomial() {
                    let scale = p.max_coeff_abs();
                    for k in (1..p.coeffs().len()).rev() {
                        let re = p.coeff(k).re;
                        if re.abs() > 1e-13 * scale {
                            return re * sign.powi(k as i32) > 0.0;
                        }
                    }
                }
                let log_weight: f64 = self
                    .terms
                    .iter()
                    .filter_map(|t| match t {
                        PrepotentialTerm::Log { coeff, .. } => Some(coeff.re),
                        _ => None,
                    })
                    .sum();
                match end.approach {
                    // |phi|^2 ~ |x|^(-2 k L)
                    Approach::Power(k) => 2.0 * k * log_weight > 1.0,
                    Approach::Exponential => log_weight > 0.0,
                }
            }
            EndLimit::Finite { zeta, side } => {
                let at = |r: &C64| (r - C64::new(zeta, 0.0)).norm() <= ROOT_MATCH * (1.0 + zeta.abs());
                for t in &self.terms {
                    if let PrepotentialTerm::Inverse { coeff, root } = t {
                        if at(root) && coeff.re.abs() > 1e-13 * coeff.norm() {
                            return coeff.re * side > 0.0;
                        }
                    }
                }
                let log_coeff: f64 = self
                    .terms
                    .iter()
                    .filter_map(|t| match t {
                        PrepotentialTerm::Log { coeff, root } if at(root) => Some(coeff.re),
                        _ => None,
                    })
                    .sum();
                match (end.approach, end.x_infinite) {
                    // phi ~ |x - x_end|^(-k c); needs exponent > -1/2
                    (Approach::Power(k), false) => -k * log_coeff > -0.5,
                    (_, true) => log_coeff < 0.0,
                    (Approach::Exponential, false) => true,
                }
            }
        }
    }

    fn polynomial(&self) -> Option<&Poly> {
        self.terms.iter().find_map(|t| match t {
            PrepotentialTerm::Polynomial(p) => Some(p),
            _ => None,
        })
    }

    /// True when `W_0` is singular at `z = zeta`.
    pub(crate) fn singular_at(&self, zeta: f64) -> bool {
        self.terms.iter().any(|t| match t {
            PrepotentialTerm::Log { root, .. } | PrepotentialTerm::Inverse { root, .. } => {
                (root - C64::new(zeta, 0.0)).norm() <= ROOT_MATCH * (1.0 + zeta.abs())
            }
            PrepotentialTerm::Polynomial(_) => false,
        })
    }
}

fn snap_real(z: C64) -> C64 {
    if z.im.abs() <= 1e-14 * z.re.abs().max(1.0) {
        C64::new(z.re, 0.0)
    } else {
        z
    }
}
