//! Small dense complex matrices and symmetric tridiagonal eigenvalues.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_traits::Zero;

#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Poly, Result, C64};

/// Dense row-major complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![C64::zero(); rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Largest off-diagonal modulus of a square matrix.
    pub fn max_off_diagonal(&self) -> f64 {
        let mut out: f64 = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i != j {
                    out = out.max(self[(i, j)].norm());
                }
            }
        }
        out
    }

    /// Solves `self * x = b` by Gaussian elimination with partial pivoting.
    pub fn solve(&self, b: &[C64]) -> Result<Vec<C64>> {
        let n = self.rows;
        assert_eq!(n, self.cols);
        assert_eq!(n, b.len());
        let mut a = self.data.clone();
        let mut x = b.to_vec();
        for k in 0..n {
            let pivot = (k..n)
                .max_by(|&i, &j| a[i * n + k].norm().total_cmp(&a[j * n + k].norm()))
                .unwrap();
            if a[pivot * n + k].norm() == 0.0 || !a[pivot * n + k].is_finite() {
                return Err(Error::Singular);
            }
            if pivot != k {
                for j in 0..n {
                    a.swap(k * n + j, pivot * n + j);
                }
                x.swap(k, pivot);
            }
            let d = a[k * n + k];
            for i in k + 1..n {
                let f = a[i * n + k] / d;
                if f.is_zero() {
                    continue;
                }
                for j in k..n {
                    let akj = a[k * n + j];
                    a[i * n + j] -= f * akj;
                }
                let xk = x[k];
                x[i] -= f * xk;
            }
        }
        for k in (0..n).rev() {
            let s: C64 = (k + 1..n).map(|j| a[k * n + j] * x[j]).sum();
            x[k] = (x[k] - s) / a[k * n + k];
        }
        Ok(x)
    }

    /// Characteristic polynomial `det(lambda I - H)` of an upper Hessenberg
    /// matrix (entries below the first subdiagonal are ignored).
    pub fn hessenberg_char_poly(&self) -> Poly {
        let n = self.rows;
        assert_eq!(n, self.cols);
        let one = C64::new(1.0, 0.0);
        let mut p: Vec<Poly> = Vec::with_capacity(n + 1);
        p.push(Poly::constant(one));
        for k in 0..n {
            let mut next = &Poly::new(vec![-self[(k, k)], one]) * &p[k];
            let mut sub = one;
            for i in (0..k).rev() {
                sub *= self[(i + 1, i)];
                if sub.is_zero() {
                    break;
                }
                next = &next - &p[i].scale(self[(i, k)] * sub);
            }
            p.push(next);
        }
        p.pop().unwrap()
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Real symmetric tridiagonal matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct TridiagonalSymmetric {
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
}

impl TridiagonalSymmetric {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Self {
        assert_eq!(offdiag.len() + 1, diag.len().max(1));
        TridiagonalSymmetric { diag, offdiag }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Number of eigenvalues strictly below `lambda` (Sturm count from the
    /// signs of the LDL^T pivots of `T - lambda I`).
    pub fn count_below(&self, lambda: f64) -> usize {
        let mut count = 0;
        let mut d = 1.0;
        for i in 0..self.diag.len() {
            let b2 = if i == 0 { 0.0 } else { self.offdiag[i - 1] * self.offdiag[i - 1] };
            d = self.diag[i] - lambda - if i == 0 { 0.0 } else { b2 / d };
            if d == 0.0 {
                d = -f64::EPSILON * (self.diag[i].abs() + lambda.abs() + 1.0);
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Gershgorin interval containing the whole spectrum.
    pub fn bounds(&self) -> (f64, f64) {
        let n = self.diag.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut r = 0.0;
            if i > 0 {
                r += self.offdiag[i - 1].abs();
            }
            if i + 1 < n {
                r += self.offdiag[i].abs();
            }
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// The `k`-th smallest eigenvalue (0-based) by bisection to absolute `tol`.
    pub fn eigenvalue(&self, k: usize, tol: f64) -> f64 {
        let (mut lo, mut hi) = self.bounds();
        // Gershgorin ends can coincide with an eigenvalue; pad them.
        let pad = 1e-12 * (lo.abs() + hi.abs() + 1.0);
        lo -= pad;
        hi += pad;
        for _ in 0..2000 {
            let mid = 0.5 * (lo + hi);
            if hi - lo <= tol || mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    pub fn smallest(&self, k: usize, tol: f64) -> Result<Vec<f64>> {
        if k > self.dim() {
            return Err(Error::TooManyEigenvalues {
                requested: k,
                available: self.dim(),
            });
        }
        Ok((0..k).map(|i| self.eigenvalue(i, tol)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;

    /// Determinant by cofactor expansion; independent of the Hessenberg recurrence.
    fn det(m: &[Vec<C64>]) -> C64 {
        let n = m.len();
        if n == 1 {
            return m[0][0];
        }
        let mut s = C64::zero();
        for j in 0..n {
            let minor: Vec<Vec<C64>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| *v).collect())
                .collect();
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            s += m[0][j] * det(&minor) * sign;
        }
        s
    }

    #[test]
    fn char_poly_matches_cofactor_determinant() {
        let n = 4;
        let h = CMatrix::from_fn(n, n, |i, j| {
            if i > j + 1 {
                C64::zero()
            } else {
                c64(0.3 * i as f64 - 0.7 * j as f64 + 1.1, 0.2 * (i * j) as f64 - 0.4)
            }
        });
        let cp = h.hessenberg_char_poly();
        for lam in [c64(0.3, -0.2), c64(-1.5, 2.0), c64(2.0, 0.0)] {
            let m: Vec<Vec<C64>> = (0..n)
                .map(|i| (0..n).map(|j| if i == j { lam - h[(i, j)] } else { -h[(i, j)] }).collect())
                .collect();
            assert!((cp.eval(lam) - det(&m)).norm() < 1e-10);
        }
    }

    #[test]
    fn solve_small_system() {
        let a = CMatrix::from_fn(3, 3, |i, j| c64((i + 2 * j) as f64 + if i == j { 4.0 } else { 0.0 }, (i as f64) - (j as f64)));
        let x = [c64(1.0, -1.0), c64(0.5, 2.0), c64(-3.0, 0.0)];
        let b = a.mul_vec(&x);
        let got = a.solve(&b).unwrap();
        for (g, w) in got.iter().zip(x) {
            assert!((g - w).norm() < 1e-12);
        }
        assert_eq!(CMatrix::zeros(2, 2).solve(&[C64::zero(); 2]), Err(Error::Singular));
    }

    #[test]
    fn sturm_bisection_on_known_spectrum() {
        // (-1, 2, -1) of size n has eigenvalues 2 - 2cos(k pi / (n+1)).
        let n = 50;
        let t = TridiagonalSymmetric::new(vec![2.0; n], vec![-1.0; n - 1]);
        let ev = t.smallest(5, 1e-13).unwrap();
        for (k, e) in ev.iter().enumerate() {
            let want = 2.0 - 2.0 * (core::f64::consts::PI * (k + 1) as f64 / (n + 1) as f64).cos();
            assert!((e - want).abs() < 1e-12);
        }
        assert!(t.smallest(n + 1, 1e-10).is_err());
    }
}
