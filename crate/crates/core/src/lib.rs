//! Exactly and quasi-exactly solvable one-dimensional Schrödinger models built
//! from two polynomials.
//!
//! A model is fixed by a pair of polynomials `P(z)` and `Q(z)` together with a
//! level count `N`. `Q` determines the change of variables `z(x)` through
//! `z'(x)^2 = Q(z)`, `P` determines the prepotential through
//! `W_0'(x) z'(x) = P(z)`, and the eigenfunctions take the form
//! `exp(-W_0(x)) * prod_k (z(x) - z_k)` where the roots `z_k` solve a set of
//! Bethe ansatz equations.
//!
//! The crate is `no_std` (it needs `alloc`). Units are `hbar = 2m = 1`.
//!
//! Modules:
//!
//! - [`poly`]: complex polynomial arithmetic, Hermite/Laguerre generators, Aberth root finder.
//! - [`model`]: model spec, solvability classes, coordinate maps, prepotential, potential, energy.
//! - [`bae`]: Bethe ansatz residual, Jacobian, damped Newton solver and solution enumeration.
//! - [`spectrum`]: grids, sampled and normalized states, node counting, Gram matrices.
//! - [`oracle`]: independent verifiers (gauged matrix, finite differences, residuals, classical zeros).
//! - [`xrational`]: the rationally extended radial oscillator.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod bae;
mod error;
pub mod linalg;
pub mod model;
pub mod oracle;
pub mod poly;
pub mod spectrum;
pub mod xrational;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

pub use bae::{RootSet, Solution};
pub use model::{Model, ModelSpec, Solvability};
pub use poly::Poly;
pub use spectrum::{GridSpec, QesState};
pub use xrational::ExtendedSpec;

/// Shorthand for a complex number with the given real and imaginary parts.
#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}
