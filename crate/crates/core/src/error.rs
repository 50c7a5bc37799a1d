use alloc::vec::Vec;

use crate::C64;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("division by the zero polynomial")]
    ZeroDivisor,

    #[error("root finding needs a polynomial of degree >= 1")]
    ConstantPolynomial,

    #[error("polynomial root finder did not converge in {iterations} iterations")]
    RootsNotConverged { iterations: usize, best: Vec<C64> },

    #[error("Q must not be the zero polynomial")]
    ZeroQ,

    #[error("Q has no canonical sinusoidal form: {0}")]
    NonCanonicalCoordinate(&'static str),

    #[error("P/Q has a pole structure the prepotential cannot represent")]
    UnsupportedPrepotential,

    #[error("x = {x} lies outside the physical domain ({lo}, {hi})")]
    OutsideDomain { x: f64, lo: f64, hi: f64 },

    #[error("roots must be pairwise distinct")]
    CoincidentRoots,

    #[error("expected {expected} roots, got {got}")]
    RootCount { expected: usize, got: usize },

    #[error("model is outside the ES/QES classes (deg P = {deg_p}, deg Q = {deg_q})")]
    NotSolvable { deg_p: isize, deg_q: isize },

    #[error("invalid grid: {0}")]
    InvalidGrid(&'static str),

    #[error("grid too short: |phi| at the {end} end is {ratio:e} of its maximum; enlarge the grid")]
    Truncation { end: &'static str, ratio: f64 },

    #[error("requested {requested} eigenvalues from a {available}-point grid")]
    TooManyEigenvalues { requested: usize, available: usize },

    #[error("deforming polynomial has a zero at z = {root} inside [0, inf)")]
    DeformingZero { root: C64 },

    #[error("invalid extended spec: {0}")]
    InvalidExtendedSpec(&'static str),

    #[error("singular linear system")]
    Singular,
}
