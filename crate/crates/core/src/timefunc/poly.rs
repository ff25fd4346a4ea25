// Copyright 2026 The lievessiot Authors
// SPDX-License-Identifier: Apache-2.0

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{Signed, One, Zero};

use crate::exact::{fmt_exact, is_zero, to_c64, Exact};

/// Dense univariate polynomial in `t` with exact coefficients, ascending
/// degree. The coefficient list never ends in a zero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Exact>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Exact>) -> Self {
        while coeffs.last().is_some_and(is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Exact) -> Self {
        Poly::new(vec![c])
    }

    pub fn one() -> Self {
        Poly::constant(Exact::one())
    }

    /// The monomial `t`.
    pub fn t() -> Self {
        Poly::new(vec![Exact::zero(), Exact::one()])
    }

    pub fn monomial(c: Exact, degree: usize) -> Self {
        let mut v = vec![Exact::zero(); degree + 1];
        v[degree] = c;
        Poly::new(v)
    }

    pub fn coeffs(&self) -> &[Exact] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Exact {
        self.coeffs.get(k).cloned().unwrap_or_else(Exact::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Exact> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &Exact) -> Poly {
        Poly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some(l) => self.scale(&(Exact::one() / l.clone())),
            None => Poly::zero(),
        }
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Exact::from(num_rational::BigRational::from_integer((k as i64).into())))
                .collect(),
        )
    }

    pub fn eval_exact(&self, t: &Exact) -> Exact {
        self.coeffs.iter().rev().fold(Exact::zero(), |acc, c| acc * t + c)
    }

    pub fn to_c64(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(to_c64).collect()
    }

    /// Euclidean division `(quotient, remainder)`. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = Exact::one() / divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return (Poly::zero(), Poly::zero());
        };
        if nd < dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![Exact::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let coef = &rem[k + dd] * &lead_inv;
            if !is_zero(&coef) {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] = &rem[k + j] - &coef * d;
                }
            }
            quot[k] = coef;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Monic least common multiple.
    pub fn lcm(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let g = self.gcd(other);
        (self * other).div_rem(&g).0.monic()
    }

    /// Square-free factorization (Yun): returns `(factor, multiplicity)`
    /// pairs of monic, pairwise coprime, square-free factors.
    pub fn square_free(&self) -> Vec<(Poly, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let d = f.derivative();
        let a0 = f.gcd(&d);
        let mut b = f.div_rem(&a0).0;
        let mut c = d.div_rem(&a0).0;
        let mut dd = &c - &b.derivative();
        let mut k = 1;
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&dd);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), k));
            }
            b = b.div_rem(&a).0;
            c = dd.div_rem(&a).0;
            dd = &c - &b.derivative();
            k += 1;
        }
        out
    }
}

/// Horner evaluation on double-precision coefficients.
pub fn horner(coeffs: &[Complex64], t: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::zero(), |acc, &c| acc * t + c)
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl fmt::Display for Poly {
    /// Expression syntax understood by [`crate::timefunc::parse`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if is_zero(c) {
                continue;
            }
            // Real coefficients carry their sign into the sum.
            let negative = c.im.is_zero() && c.re.is_negative();
            let mag = if negative { -c.clone() } else { c.clone() };
            match (first, negative) {
                (true, true) => write!(f, "-")?,
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
                (true, false) => {}
            }
            first = false;
            let cs = if mag.im.is_zero() { crate::exact::fmt_real(&mag.re) } else { fmt_exact(&mag) };
            match k {
                0 => write!(f, "{cs}")?,
                _ => {
                    let mono = if k == 1 { "t".to_string() } else { format!("t^{k}") };
                    if mag.is_one() {
                        write!(f, "{mono}")?
                    } else {
                        write!(f, "{cs}*{mono}")?
                    }
                }
            }
        }
        Ok(())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Exact::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if is_zero(a) {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + a * b;
            }
        }
        Poly::new(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}
