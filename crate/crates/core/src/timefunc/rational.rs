// Copyright 2026 The lievessiot Authors
// SPDX-License-Identifier: Apache-2.0

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::One;

use super::poly::{horner, Poly};
use crate::error::{Error, Result};
use crate::exact::Exact;

/// Exact rational function `p(t) / q(t)` with complex coefficients.
///
/// Always stored reduced: `gcd(p, q) = 1`, `q` monic, and the zero function
/// is `0 / 1`. Double-precision copies of both coefficient lists are cached
/// for fast evaluation.
#[derive(Clone)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
    num_f: Vec<Complex64>,
    den_f: Vec<Complex64>,
}

impl RationalFunction {
    /// Builds `num / den` in reduced form. Returns `None` when `den` is zero.
    pub fn new(num: Poly, den: Poly) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        let (num, den) = if num.is_zero() {
            (Poly::zero(), Poly::one())
        } else {
            let g = num.gcd(&den);
            let (n, d) = (num.div_rem(&g).0, den.div_rem(&g).0);
            let lead = d.leading().unwrap().clone();
            let inv = Exact::one() / lead;
            (n.scale(&inv), d.scale(&inv))
        };
        let num_f = num.to_c64();
        let den_f = den.to_c64();
        Some(RationalFunction { num, den, num_f, den_f })
    }

    pub fn from_poly(p: Poly) -> Self {
        RationalFunction::new(p, Poly::one()).unwrap()
    }

    pub fn constant(c: Exact) -> Self {
        RationalFunction::from_poly(Poly::constant(c))
    }

    pub fn zero() -> Self {
        RationalFunction::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        RationalFunction::constant(Exact::one())
    }

    pub fn t() -> Self {
        RationalFunction::from_poly(Poly::t())
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }

    /// Evaluates at `t`; fails with [`Error::PoleError`] when the
    /// denominator is numerically zero there.
    pub fn eval(&self, t: Complex64) -> Result<Complex64> {
        let p = horner(&self.num_f, t);
        let q = horner(&self.den_f, t);
        if q.norm() <= 1e-12 * (1.0 + p.norm()) {
            return Err(Error::PoleError { t });
        }
        Ok(p / q)
    }

    pub fn eval_exact(&self, t: &Exact) -> Option<Exact> {
        let q = self.den.eval_exact(t);
        if crate::exact::is_zero(&q) {
            return None;
        }
        Some(self.num.eval_exact(t) / q)
    }

    /// Quotient-rule derivative, reduced.
    pub fn derivative(&self) -> RationalFunction {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        let d = &self.den * &self.den;
        RationalFunction::new(n, d).unwrap()
    }

    pub fn scale(&self, c: &Exact) -> RationalFunction {
        RationalFunction::new(self.num.scale(c), self.den.clone()).unwrap()
    }

    /// Multiplicative inverse, `None` for the zero function.
    pub fn recip(&self) -> Option<RationalFunction> {
        RationalFunction::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, rhs: &RationalFunction) -> Option<RationalFunction> {
        RationalFunction::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    pub fn powi(&self, k: i32) -> Option<RationalFunction> {
        let base = if k < 0 { self.recip()? } else { self.clone() };
        let mut out = RationalFunction::one();
        for _ in 0..k.unsigned_abs() {
            out = &out * &base;
        }
        Some(out)
    }
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        self.num == other.num && self.den == other.den
    }
}
impl Eq for RationalFunction {}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({self})")
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            return write!(f, "{}", self.num);
        }
        // Parentheses only where the parser would otherwise regroup.
        let num = self.num.to_string();
        let den = self.den.to_string();
        let single_term = |s: &str| !s[1..].contains(" + ") && !s[1..].contains(" - ");
        let num = if single_term(&num) && !num.contains('/') { num } else { format!("({num})") };
        let plain = den.chars().all(|ch| ch.is_ascii_digit()) || (den.starts_with('t') && single_term(&den) && !den.contains('*'));
        let den = if plain { den } else { format!("({den})") };
        write!(f, "{num}/{den}")
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.den == rhs.den {
            return RationalFunction::new(&self.num + &rhs.num, self.den.clone()).unwrap();
        }
        RationalFunction::new(&(&self.num * &rhs.den) + &(&rhs.num * &self.den), &self.den * &rhs.den).unwrap()
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        RationalFunction::new(&self.num * &rhs.num, &self.den * &rhs.den).unwrap()
    }
}

impl Div for &RationalFunction {
    type Output = RationalFunction;
    /// Panics on division by the zero function; see
    /// [`RationalFunction::checked_div`].
    fn div(self, rhs: &RationalFunction) -> RationalFunction {
        self.checked_div(rhs).expect("division by the zero rational function")
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction::new(-&self.num, self.den.clone()).unwrap()
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, rhs: RationalFunction) -> RationalFunction { (&self).$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);
