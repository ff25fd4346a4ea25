// Copyright 2026 The lievessiot Authors
// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use num_complex::Complex64;

use super::rational::RationalFunction;
use crate::error::{Error, Result};
use crate::exact::{self, Exact};
use crate::linalg::CMatrix;

/// Square matrix of exact rational functions of `t`: a closed-form curve of
/// matrices, used for exact gauge transformations and sections.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    n: usize,
    entries: Vec<RationalFunction>,
}

impl RationalMatrix {
    pub fn from_entries(n: usize, entries: Vec<RationalFunction>) -> Self {
        assert_eq!(entries.len(), n * n, "row-major entries of an n x n matrix");
        RationalMatrix { n, entries }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> RationalFunction) -> Self {
        let entries = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| f(i, j)).collect();
        RationalMatrix { n, entries }
    }

    pub fn identity(n: usize) -> Self {
        RationalMatrix::from_fn(n, |i, j| if i == j { RationalFunction::one() } else { RationalFunction::zero() })
    }

    pub fn zeros(n: usize) -> Self {
        RationalMatrix::from_fn(n, |_, _| RationalFunction::zero())
    }

    /// Constant matrix with the exact values of the binary entries of `m`.
    pub fn constant(m: &CMatrix) -> Option<Self> {
        let n = m.nrows();
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(RationalFunction::constant(exact::from_c64(m[(i, j)])?));
            }
        }
        Some(RationalMatrix { n, entries })
    }

    /// `Σ f_k M_k` for exact row-major constant matrices `M_k`.
    pub fn combination(n: usize, coeffs: &[RationalFunction], mats: &[Vec<Exact>]) -> Self {
        let mut out = RationalMatrix::zeros(n);
        for (f, m) in coeffs.iter().zip(mats) {
            if f.is_zero() {
                continue;
            }
            for (e, v) in out.entries.iter_mut().zip(m) {
                if !exact::is_zero(v) {
                    *e = &*e + &f.scale(v);
                }
            }
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &RationalFunction {
        &self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[RationalFunction] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn eval(&self, t: Complex64) -> Result<CMatrix> {
        let mut m = CMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m[(i, j)] = self.get(i, j).eval(t)?;
            }
        }
        Ok(m)
    }

    pub fn derivative(&self) -> Self {
        RationalMatrix { n: self.n, entries: self.entries.iter().map(|e| e.derivative()).collect() }
    }

    pub fn mul(&self, rhs: &RationalMatrix) -> RationalMatrix {
        let n = self.n;
        RationalMatrix::from_fn(n, |i, j| {
            let mut acc = RationalFunction::zero();
            for k in 0..n {
                let (a, b) = (self.get(i, k), rhs.get(k, j));
                if !a.is_zero() && !b.is_zero() {
                    acc = &acc + &(a * b);
                }
            }
            acc
        })
    }

    pub fn add(&self, rhs: &RationalMatrix) -> RationalMatrix {
        RationalMatrix { n: self.n, entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, rhs: &RationalMatrix) -> RationalMatrix {
        RationalMatrix { n: self.n, entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect() }
    }

    pub fn neg(&self) -> RationalMatrix {
        RationalMatrix { n: self.n, entries: self.entries.iter().map(|a| -a).collect() }
    }

    /// Determinant by Gaussian elimination over the field of rational
    /// functions.
    pub fn determinant(&self) -> RationalFunction {
        let n = self.n;
        let mut m: Vec<Vec<RationalFunction>> = (0..n).map(|i| (0..n).map(|j| self.get(i, j).clone()).collect()).collect();
        let mut det = RationalFunction::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
                return RationalFunction::zero();
            };
            if p != col {
                m.swap(p, col);
                det = -&det;
            }
            det = &det * &m[col][col];
            let pivot = m[col][col].clone();
            for r in col + 1..n {
                if m[r][col].is_zero() {
                    continue;
                }
                let factor = &m[r][col] / &pivot;
                for k in col..n {
                    let v = &m[r][k] - &(&factor * &m[col][k]);
                    m[r][k] = v;
                }
            }
        }
        det
    }

    /// Inverse over the field of rational functions; `None` when the
    /// determinant vanishes identically.
    pub fn inverse(&self) -> Option<RationalMatrix> {
        let n = self.n;
        let mut aug: Vec<Vec<RationalFunction>> = (0..n)
            .map(|i| {
                let mut row: Vec<RationalFunction> = (0..n).map(|j| self.get(i, j).clone()).collect();
                row.extend((0..n).map(|j| if i == j { RationalFunction::one() } else { RationalFunction::zero() }));
                row
            })
            .collect();
        for col in 0..n {
            let p = (col..n).find(|&r| !aug[r][col].is_zero())?;
            aug.swap(p, col);
            let inv = aug[col][col].recip()?;
            for v in aug[col].iter_mut() {
                *v = &*v * &inv;
            }
            for r in 0..n {
                if r == col || aug[r][col].is_zero() {
                    continue;
                }
                let factor = aug[r][col].clone();
                for k in 0..2 * n {
                    if !aug[col][k].is_zero() {
                        let v = &aug[r][k] - &(&factor * &aug[col][k]);
                        aug[r][k] = v;
                    }
                }
            }
        }
        Some(RationalMatrix::from_fn(n, |i, j| aug[i][n + j].clone()))
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.n {
            write!(f, "[")?;
            for j in 0..self.n {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Fails with [`Error::SectionSingular`] if the determinant of `m` vanishes
/// within `clearance` of the path or identically.
pub fn check_invertible_on(m: &RationalMatrix, path: &super::TimePath, clearance: f64) -> Result<RationalMatrix> {
    let det = m.determinant();
    if det.is_zero() {
        return Err(Error::SectionSingular { t: path.start() });
    }
    let zeros = super::poles(&det.recip().unwrap());
    for z in zeros {
        if path.distance_to(z.at) < clearance {
            return Err(Error::SectionSingular { t: z.at });
        }
    }
    Ok(m.inverse().expect("nonzero determinant"))
}
