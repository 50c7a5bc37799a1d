use core::f64::consts::FRAC_PI_2;

#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Poly, Result};

/// Open interval of the physical coordinate `x`; ends may be infinite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Domain {
    pub lo: f64,
    pub hi: f64,
}

impl Domain {
    pub fn contains(&self, x: f64) -> bool {
        x > self.lo && x < self.hi
    }

    /// Membership in the closed interval.
    pub fn contains_closed(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }
}

/// Shape of `u = z - shift` for the `alpha (u^2 + delta)` class.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HyperbolicForm {
    /// `alpha > 0, delta > 0`: `u = sqrt(delta) sinh(sqrt(alpha) x)`.
    Sinh,
    /// `alpha > 0, delta < 0`: `u = sqrt(-delta) cosh(sqrt(alpha) x)`.
    Cosh,
    /// `alpha > 0, delta = 0`: `u = exp(sqrt(alpha) x)`.
    Exp,
    /// `alpha < 0, delta < 0`: `u = sqrt(-delta) sin(sqrt(-alpha) x)`.
    Sin,
}

/// The three inequivalent classes of sinusoidal coordinate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MapKind {
    /// `z'^2 = gamma`.
    Linear { gamma: f64 },
    /// `z'^2 = beta (z - shift)`.
    Quadratic { beta: f64 },
    /// `z'^2 = alpha ((z - shift)^2 + delta)`.
    Quadratic2 {
        alpha: f64,
        delta: f64,
        form: HyperbolicForm,
    },
}

/// How `z(x)` behaves at one end of the domain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Endpoint {
    pub limit: EndLimit,
    pub approach: Approach,
    pub x_infinite: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) enum EndLimit {
    /// `z -> sign * inf`.
    Infinite { sign: f64 },
    /// `z -> zeta` from the side `sign(z - zeta) = side`.
    Finite { zeta: f64, side: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) enum Approach {
    /// `|z|` (or `|z - zeta|`) scales as `|x - x_end|^k` (as `|x|^k` at infinity).
    Power(f64),
    /// Exponential in `|x|`.
    Exponential,
}

/// A real change of variables `z(x)` with `z'(x)^2 = Q(z(x))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoordinateMap {
    pub kind: MapKind,
    pub shift: f64,
    pub domain: Domain,
}

impl CoordinateMap {
    /// Reduces a real `Q` of degree <= 2 to its canonical form. The positive
    /// branch of `x(z)` is taken throughout.
    pub fn from_q(q: &Poly) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::ZeroQ);
        }
        if !q.is_real() {
            return Err(Error::NonCanonicalCoordinate("Q has complex coefficients"));
        }
        let c = |i| q.coeff(i).re;
        let inf = f64::INFINITY;
        match q.degree() {
            0 => {
                let gamma = c(0);
                if gamma <= 0.0 {
                    return Err(Error::NonCanonicalCoordinate("constant Q must be positive"));
                }
                Ok(CoordinateMap {
                    kind: MapKind::Linear { gamma },
                    shift: 0.0,
                    domain: Domain { lo: -inf, hi: inf },
                })
            }
            1 => {
                let beta = c(1);
                if beta <= 0.0 {
                    return Err(Error::NonCanonicalCoordinate("linear Q needs a positive slope"));
                }
                Ok(CoordinateMap {
                    kind: MapKind::Quadratic { beta },
                    shift: -c(0) / beta,
                    domain: Domain { lo: 0.0, hi: inf },
                })
            }
            2 => {
                let alpha = c(2);
                let shift = -c(1) / (2.0 * alpha);
                let mut delta = c(0) / alpha - shift * shift;
                if delta.abs() <= 1e-12 * (1.0 + shift * shift + (c(0) / alpha).abs()) {
                    delta = 0.0;
                }
                let (form, domain) = if alpha > 0.0 {
                    if delta > 0.0 {
                        (HyperbolicForm::Sinh, Domain { lo: -inf, hi: inf })
                    } else if delta < 0.0 {
                        (HyperbolicForm::Cosh, Domain { lo: 0.0, hi: inf })
                    } else {
                        (HyperbolicForm::Exp, Domain { lo: -inf, hi: inf })
                    }
                } else if delta < 0.0 {
                    let end = FRAC_PI_2 / (-alpha).sqrt();
                    (HyperbolicForm::Sin, Domain { lo: -end, hi: end })
                } else {
                    return Err(Error::NonCanonicalCoordinate(
                        "alpha < 0 needs delta < 0 for a real coordinate",
                    ));
                };
                Ok(CoordinateMap {
                    kind: MapKind::Quadratic2 { alpha, delta, form },
                    shift,
                    domain,
                })
            }
            _ => Err(Error::NonCanonicalCoordinate("deg Q > 2")),
        }
    }

    pub fn z_of_x(&self, x: f64) -> f64 {
        self.shift + self.u_of_x(x)
    }

    fn u_of_x(&self, x: f64) -> f64 {
        match self.kind {
            MapKind::Linear { gamma } => gamma.sqrt() * x,
            MapKind::Quadratic { beta } => 0.25 * beta * x * x,
            MapKind::Quadratic2 { alpha, delta, form } => match form {
                HyperbolicForm::Sinh => delta.sqrt() * (alpha.sqrt() * x).sinh(),
                HyperbolicForm::Cosh => (-delta).sqrt() * (alpha.sqrt() * x).cosh(),
                HyperbolicForm::Exp => (alpha.sqrt() * x).exp(),
                HyperbolicForm::Sin => (-delta).sqrt() * ((-alpha).sqrt() * x).sin(),
            },
        }
    }

    pub fn x_of_z(&self, z: f64) -> f64 {
        let u = z - self.shift;
        match self.kind {
            MapKind::Linear { gamma } => u / gamma.sqrt(),
            MapKind::Quadratic { beta } => 2.0 * (u / beta).sqrt(),
            MapKind::Quadratic2 { alpha, delta, form } => match form {
                HyperbolicForm::Sinh => (u / delta.sqrt()).asinh() / alpha.sqrt(),
                HyperbolicForm::Cosh => (u / (-delta).sqrt()).acosh() / alpha.sqrt(),
                HyperbolicForm::Exp => u.ln() / alpha.sqrt(),
                HyperbolicForm::Sin => (u / (-delta).sqrt()).asin() / (-alpha).sqrt(),
            },
        }
    }

    pub fn dz_dx(&self, x: f64) -> f64 {
        match self.kind {
            MapKind::Linear { gamma } => gamma.sqrt(),
            MapKind::Quadratic { beta } => 0.5 * beta * x,
            MapKind::Quadratic2 { alpha, delta, form } => match form {
                HyperbolicForm::Sinh => (delta * alpha).sqrt() * (alpha.sqrt() * x).cosh(),
                HyperbolicForm::Cosh => (-delta * alpha).sqrt() * (alpha.sqrt() * x).sinh(),
                HyperbolicForm::Exp => alpha.sqrt() * (alpha.sqrt() * x).exp(),
                HyperbolicForm::Sin => (delta * alpha).sqrt() * ((-alpha).sqrt() * x).cos(),
            },
        }
    }

    pub(crate) fn endpoints(&self) -> [Endpoint; 2] {
        use Approach::*;
        use EndLimit::*;
        let s = self.shift;
        let inf = |sign| Endpoint {
            limit: Infinite { sign },
            approach: Power(1.0),
            x_infinite: true,
        };
        match self.kind {
            MapKind::Linear { .. } => [inf(-1.0), inf(1.0)],
            MapKind::Quadratic { .. } => [
                Endpoint {
                    limit: Finite { zeta: s, side: 1.0 },
                    approach: Power(2.0),
                    x_infinite: false,
                },
                Endpoint {
                    limit: Infinite { sign: 1.0 },
                    approach: Power(2.0),
                    x_infinite: true,
                },
            ],
            MapKind::Quadratic2 { delta, form, .. } => {
                let exp_inf = |sign| Endpoint {
                    limit: Infinite { sign },
                    approach: Exponential,
                    x_infinite: true,
                };
                match form {
                    HyperbolicForm::Sinh => [exp_inf(-1.0), exp_inf(1.0)],
                    HyperbolicForm::Cosh => [
                        Endpoint {
                            limit: Finite { zeta: s + (-delta).sqrt(), side: 1.0 },
                            approach: Power(2.0),
                            x_infinite: false,
                        },
                        exp_inf(1.0),
                    ],
                    HyperbolicForm::Exp => [
                        Endpoint {
                            limit: Finite { zeta: s, side: 1.0 },
                            approach: Exponential,
                            x_infinite: true,
                        },
                        exp_inf(1.0),
                    ],
                    HyperbolicForm::Sin => {
                        let r = (-delta).sqrt();
                        [
                            Endpoint {
                                limit: Finite { zeta: s - r, side: 1.0 },
                                approach: Power(2.0),
                                x_infinite: false,
                            },
                            Endpoint {
                                limit: Finite { zeta: s + r, side: -1.0 },
                                approach: Power(2.0),
                                x_infinite: false,
                            },
                        ]
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use alloc::vec;

    fn check_map(q: &Poly, xs: &[f64]) {
        let map = CoordinateMap::from_q(q).unwrap();
        for &x in xs {
            assert!(map.domain.contains(x));
            let z = map.z_of_x(x);
            let h = 1e-5 * (1.0 + x.abs());
            let fd = (map.z_of_x(x + h) - map.z_of_x(x - h)) / (2.0 * h);
            let qz = q.eval_real(z).re;
            assert!((fd * fd - qz).abs() <= 1e-6 * qz.abs().max(1.0), "x={x}: {} vs {qz}", fd * fd);
            assert!((map.dz_dx(x) - fd).abs() <= 1e-6 * fd.abs().max(1.0));
            assert!((map.x_of_z(z) - x).abs() <= 1e-10 * x.abs().max(1.0), "x={x}");
        }
    }

    #[test]
    fn linear_map() {
        let map = CoordinateMap::from_q(&Poly::from_real(&[1.0])).unwrap();
        assert_eq!(map.z_of_x(1.25), 1.25);
        assert_eq!(map.domain, Domain { lo: f64::NEG_INFINITY, hi: f64::INFINITY });
        check_map(&Poly::from_real(&[2.5]), &[-3.0, -0.1, 0.4, 2.0]);
    }

    #[test]
    fn quadratic_map() {
        let map = CoordinateMap::from_q(&Poly::from_real(&[0.0, 4.0])).unwrap();
        assert_eq!(map.z_of_x(3.0), 9.0);
        assert_eq!(map.domain.lo, 0.0);
        check_map(&Poly::from_real(&[0.0, 4.0]), &[0.1, 0.7, 2.0, 5.0]);
        check_map(&Poly::from_real(&[-3.0, 1.5]), &[0.1, 0.7, 2.0]);
    }

    #[test]
    fn hyperbolic_and_trigonometric_maps() {
        let sinh = CoordinateMap::from_q(&Poly::from_real(&[1.0, 0.0, 1.0])).unwrap();
        assert_eq!(sinh.kind, MapKind::Quadratic2 { alpha: 1.0, delta: 1.0, form: HyperbolicForm::Sinh });
        assert!((sinh.z_of_x(0.8) - 0.8f64.sinh()).abs() < 1e-15);
        check_map(&Poly::from_real(&[1.0, 0.0, 1.0]), &[-2.0, -0.3, 0.5, 1.7]);
        check_map(&Poly::from_real(&[-4.0, 0.0, 2.0]), &[0.2, 1.0, 2.5]);
        check_map(&Poly::from_real(&[1.0, 2.0, 1.0]), &[-2.0, 0.0, 1.3]);
        check_map(&Poly::from_real(&[3.0, 0.0, -0.5]), &[-1.5, 0.0, 0.9]);
    }

    #[test]
    fn rejects_non_canonical() {
        assert!(CoordinateMap::from_q(&Poly::new(vec![c64(1.0, 1.0)])).is_err());
        assert!(CoordinateMap::from_q(&Poly::from_real(&[-1.0])).is_err());
        assert!(CoordinateMap::from_q(&Poly::from_real(&[0.0, -4.0])).is_err());
        assert!(CoordinateMap::from_q(&Poly::from_real(&[-1.0, 0.0, -1.0])).is_err());
        assert!(CoordinateMap::from_q(&Poly::from_real(&[1.0, 0.0, -1.0])).is_ok());
        assert_eq!(CoordinateMap::from_q(&Poly::zero()), Err(Error::ZeroQ));
    }
}
