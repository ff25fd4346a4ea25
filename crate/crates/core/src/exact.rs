// Copyright 2026 The lievessiot Authors
// SPDX-License-Identifier: Apache-2.0

//! Exact Gaussian-rational scalars and the small amount of exact linear
//! algebra (row reduction, null spaces) built on them.

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A complex number with arbitrary-precision rational parts.
pub type Exact = Complex<BigRational>;

pub fn exact_int(n: i64) -> Exact {
    Exact::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
}

pub fn exact_ratio(num: i64, den: i64) -> Exact {
    Exact::new(BigRational::new(BigInt::from(num), BigInt::from(den)), BigRational::zero())
}

pub fn exact_i() -> Exact {
    Exact::new(BigRational::zero(), BigRational::one())
}

/// Converts a finite double-precision complex number to the exact value of
/// its binary representation.
pub fn from_c64(z: Complex64) -> Option<Exact> {
    Some(Exact::new(BigRational::from_float(z.re)?, BigRational::from_float(z.im)?))
}

pub fn to_c64(z: &Exact) -> Complex64 {
    Complex64::new(z.re.to_f64().unwrap_or(f64::NAN), z.im.to_f64().unwrap_or(f64::NAN))
}

pub fn is_zero(z: &Exact) -> bool {
    z.re.is_zero() && z.im.is_zero()
}

/// Renders a rational part in the expression syntax accepted by the parser.
fn fmt_ratio(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Renders a non-negative rational as `n` or `n/d`.
pub(crate) fn fmt_real(r: &BigRational) -> String {
    fmt_ratio(r)
}

/// Renders an exact scalar as a self-delimiting expression (parenthesized
/// unless it is a plain non-negative integer).
pub fn fmt_exact(z: &Exact) -> String {
    let re = &z.re;
    let im = &z.im;
    if im.is_zero() {
        if re.denom().is_one() && !re.is_negative() {
            return re.numer().to_string();
        }
        return format!("({})", fmt_ratio(re));
    }
    let im_part = |v: &BigRational| -> String {
        if v.is_one() {
            "i".to_string()
        } else if v.denom().is_one() {
            format!("{}i", v.numer())
        } else {
            format!("{}/{}*i", v.numer(), v.denom())
        }
    };
    if re.is_zero() {
        if im.is_negative() {
            return format!("(-{})", im_part(&-im));
        }
        return format!("({})", im_part(im));
    }
    let sign = if im.is_negative() { "-" } else { "+" };
    format!("({}{}{})", fmt_ratio(re), sign, im_part(&im.abs()))
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut [Vec<Exact>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !is_zero(&m[i][col])) else {
            continue;
        };
        m.swap(r, p);
        let inv = Exact::one() / m[r][col].clone();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !is_zero(&m[i][col]) {
                let factor = m[i][col].clone();
                let (pivot_row, row) = if i < r {
                    let (a, b) = m.split_at_mut(r);
                    (&b[0], &mut a[i])
                } else {
                    let (a, b) = m.split_at_mut(i);
                    (&a[r], &mut b[0])
                };
                for (x, pv) in row.iter_mut().zip(pivot_row.iter()) {
                    if !is_zero(pv) {
                        *x = &*x - &factor * pv;
                    }
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}

/// Basis of the right null space of `m` (`cols` unknowns).
pub fn nullspace(mut m: Vec<Vec<Exact>>, cols: usize) -> Vec<Vec<Exact>> {
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Exact::zero(); cols];
            v[f] = Exact::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -m[row][f].clone();
            }
            v
        })
        .collect()
}

/// Inverse of a square exact matrix, `None` when singular.
pub fn invert(m: &[Vec<Exact>]) -> Option<Vec<Vec<Exact>>> {
    let n = m.len();
    let mut aug: Vec<Vec<Exact>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Exact::one() } else { Exact::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}
