// Copyright 2026 The lievessiot Authors
// SPDX-License-Identifier: Apache-2.0

//! Recursive-descent parser for rational expressions in `t`.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary | unary)*      juxtaposition multiplies
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' '-'? integer)?
//! atom   := number 'i'? | 'i' | 't' | '(' expr ')'
//! ```
//!
//! Decimal literals are converted exactly (`0.1` is `1/10`).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::poly::Poly;
use super::rational::RationalFunction;
use crate::error::{Error, Result};
use crate::exact::{exact_i, Exact};

pub fn parse(src: &str) -> Result<RationalFunction> {
    let mut p = Parser { src: src.as_bytes(), pos: 0 };
    let value = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(value)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    /// Next significant character, mapping the unicode minus sign to `-`.
    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        if rest.starts_with("−".as_bytes()) {
            return Some('-');
        }
        rest.first().map(|&b| b as char)
    }

    fn bump(&mut self) {
        if self.src[self.pos..].starts_with("−".as_bytes()) {
            self.pos += "−".len();
        } else {
            self.pos += 1;
        }
    }

    fn expr(&mut self) -> Result<RationalFunction> {
        let mut acc = self.term()?;
        while let Some(op @ ('+' | '-')) = self.peek() {
            self.bump();
            let rhs = self.term()?;
            acc = if op == '+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RationalFunction> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.bump();
                    acc = &acc * &self.unary()?;
                }
                Some('/') => {
                    self.bump();
                    let at = self.pos;
                    let rhs = self.unary()?;
                    acc = acc.checked_div(&rhs).ok_or(Error::Parse { pos: at, msg: "division by zero".into() })?;
                }
                Some(c) if c == '(' || c == 't' || c == 'i' || c.is_ascii_digit() || c == '.' => {
                    acc = &acc * &self.power()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<RationalFunction> {
        match self.peek() {
            Some('-') => {
                self.bump();
                Ok(-&self.unary()?)
            }
            Some('+') => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RationalFunction> {
        let base = self.atom()?;
        if self.peek() != Some('^') {
            return Ok(base);
        }
        self.bump();
        let negative = if self.peek() == Some('-') {
            self.bump();
            true
        } else {
            false
        };
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let k: i32 = digits.parse().map_err(|_| Error::Parse { pos: start, msg: "expected an integer exponent".into() })?;
        let k = if negative { -k } else { k };
        base.powi(k).ok_or(Error::Parse { pos: start, msg: "zero raised to a negative power".into() })
    }

    fn atom(&mut self) -> Result<RationalFunction> {
        match self.peek() {
            Some('(') => {
                self.bump();
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected `)`"));
                }
                self.bump();
                Ok(inner)
            }
            Some('t') => {
                self.bump();
                Ok(RationalFunction::t())
            }
            Some('i') => {
                self.bump();
                Ok(RationalFunction::constant(exact_i()))
            }
            Some(c) if c.is_ascii_digit() || c == '.' => {
                let value = self.number()?;
                if self.pos < self.src.len() && self.src[self.pos] == b'i' {
                    self.pos += 1;
                    return Ok(RationalFunction::constant(value * exact_i()));
                }
                Ok(RationalFunction::constant(value))
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn number(&mut self) -> Result<Exact> {
        let start = self.pos;
        let mut mantissa = BigInt::zero();
        let mut scale: i64 = 0;
        let mut seen_digit = false;
        let mut seen_dot = false;
        while self.pos < self.src.len() {
            let b = self.src[self.pos];
            if b.is_ascii_digit() {
                mantissa = mantissa * 10 + (b - b'0') as u32;
                if seen_dot {
                    scale -= 1;
                }
                seen_digit = true;
            } else if b == b'.' && !seen_dot {
                seen_dot = true;
            } else {
                break;
            }
            self.pos += 1;
        }
        if !seen_digit {
            return Err(Error::Parse { pos: start, msg: "malformed number".into() });
        }
        if self.pos < self.src.len() && (self.src[self.pos] == b'e' || self.src[self.pos] == b'E') {
            let save = self.pos;
            self.pos += 1;
            let mut sign = 1;
            if self.pos < self.src.len() && (self.src[self.pos] == b'-' || self.src[self.pos] == b'+') {
                if self.src[self.pos] == b'-' {
                    sign = -1;
                }
                self.pos += 1;
            }
            let es = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if es == self.pos {
                self.pos = save;
            } else {
                let e: i64 = std::str::from_utf8(&self.src[es..self.pos])
                    .unwrap()
                    .parse()
                    .map_err(|_| Error::Parse { pos: es, msg: "exponent out of range".into() })?;
                scale += sign * e;
            }
        }
        let ten = BigInt::from(10);
        let value = if scale >= 0 {
            BigRational::from_integer(mantissa * num_traits::pow(ten, scale as usize))
        } else {
            BigRational::new(mantissa, num_traits::pow(ten, (-scale) as usize))
        };
        Ok(Exact::new(value, BigRational::zero()))
    }
}

/// Parses an expression that must be a polynomial.
pub fn parse_poly(src: &str) -> Result<Poly> {
    let f = parse(src)?;
    if !f.is_polynomial() {
        return Err(Error::Parse { pos: 0, msg: "expected a polynomial".into() });
    }
    Ok(f.numerator().clone())
}
