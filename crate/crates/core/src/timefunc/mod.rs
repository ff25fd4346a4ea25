// Copyright 2026 The lievessiot Authors
// SPDX-License-Identifier: Apache-2.0

//! Exact rational functions of the time variable: the coefficient class of
//! automorphic systems. Evaluation, differentiation, pole location and
//! contour quadrature.

mod matrix;
mod parse;
mod path;
mod poly;
mod rational;

pub use matrix::{check_invertible_on, RationalMatrix};
pub use parse::{parse, parse_poly};
pub use path::{integrate, GaussRule, PathPoint, TimePath, DEFAULT_ORDER};
pub use poly::{horner, Poly};
pub use rational::RationalFunction;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default distance below which two computed roots are merged.
pub const ROOT_CLUSTER_TOL: f64 = 1e-8;
/// Minimum distance between a quadrature contour and any pole.
pub const POLE_CLEARANCE: f64 = 1e-6;

/// A pole location with its order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pole {
    pub at: Complex64,
    pub multiplicity: usize,
}

/// Poles of `f` with the default clustering tolerance.
pub fn poles(f: &RationalFunction) -> Vec<Pole> {
    poles_with_tolerance(f, ROOT_CLUSTER_TOL)
}

/// Poles of `f`. The denominator is split exactly into square-free factors
/// first, so each factor has simple roots; those come from companion-matrix
/// eigenvalues polished by Newton steps. Roots closer than `cluster_tol`
/// are merged and their multiplicities added.
pub fn poles_with_tolerance(f: &RationalFunction, cluster_tol: f64) -> Vec<Pole> {
    let mut out: Vec<Pole> = Vec::new();
    for (factor, mult) in f.denominator().square_free() {
        for root in simple_roots(&factor) {
            out.push(Pole { at: root, multiplicity: mult });
        }
    }
    cluster(out, cluster_tol)
}

fn cluster(mut poles: Vec<Pole>, tol: f64) -> Vec<Pole> {
    let mut merged: Vec<Pole> = Vec::new();
    poles.sort_by(|a, b| a.at.re.total_cmp(&b.at.re).then(a.at.im.total_cmp(&b.at.im)));
    for p in poles {
        match merged.iter_mut().find(|q| (q.at - p.at).norm() <= tol) {
            Some(q) => q.multiplicity += p.multiplicity,
            None => merged.push(p),
        }
    }
    merged
}

fn simple_roots(p: &Poly) -> Vec<Complex64> {
    let coeffs = p.monic().to_c64();
    let n = coeffs.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![-coeffs[0]];
    }
    let mut comp = DMatrix::<Complex64>::zeros(n, n);
    for i in 1..n {
        comp[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..n {
        comp[(i, n - 1)] = -coeffs[i];
    }
    let eig = nalgebra::Schur::new(comp).eigenvalues().expect("complex Schur form is triangular");
    let dcoeffs = p.monic().derivative().to_c64();
    // Aberth-Ehrlich polishing keeps nearby simple roots apart, unlike
    // independent Newton steps.
    let mut z: Vec<Complex64> = eig.iter().copied().collect();
    for _ in 0..4 {
        for k in 0..z.len() {
            let d = horner(&dcoeffs, z[k]);
            let v = horner(&coeffs, z[k]);
            if d.norm() == 0.0 || v.norm() == 0.0 {
                continue;
            }
            let w = v / d;
            let repulsion: Complex64 = (0..z.len()).filter(|&j| j != k).map(|j| (z[k] - z[j]).inv()).sum();
            let step = w / (Complex64::new(1.0, 0.0) - w * repulsion);
            if step.re.is_finite() && step.im.is_finite() {
                z[k] -= step;
            }
        }
    }
    z
}

/// Adaptive Gauss–Legendre integral of `f` along `path`.
pub fn path_integral(f: &RationalFunction, path: &TimePath) -> Result<Complex64> {
    if f.is_zero() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let locs: Vec<Complex64> = poles(f).iter().map(|p| p.at).collect();
    path.check_clearance(&locs, POLE_CLEARANCE)?;
    integrate(|t| f.eval(t), path)
}

/// The coefficient functions `f_1..f_s` of an automorphic system together
/// with their common pole set.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector {
    entries: Vec<RationalFunction>,
    poles: Vec<Pole>,
}

impl CoefficientVector {
    pub fn new(entries: Vec<RationalFunction>) -> Self {
        let mut all = Vec::new();
        for f in &entries {
            for p in poles(f) {
                all.push(p);
            }
        }
        // A shared pole keeps the largest order among the entries.
        let mut merged: Vec<Pole> = Vec::new();
        for p in all {
            match merged.iter_mut().find(|q| (q.at - p.at).norm() <= ROOT_CLUSTER_TOL) {
                Some(q) => q.multiplicity = q.multiplicity.max(p.multiplicity),
                None => merged.push(p),
            }
        }
        CoefficientVector { entries, poles: merged }
    }

    /// Parses one rational expression per entry.
    pub fn parse<S: AsRef<str>>(exprs: &[S]) -> Result<Self> {
        Ok(CoefficientVector::new(exprs.iter().map(|e| parse(e.as_ref())).collect::<Result<_>>()?))
    }

    pub fn entries(&self) -> &[RationalFunction] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn poles(&self) -> &[Pole] {
        &self.poles
    }

    pub fn pole_locations(&self) -> Vec<Complex64> {
        self.poles.iter().map(|p| p.at).collect()
    }

    /// Evaluates every entry; [`Error::PoleError`] if `t` is a pole of any.
    pub fn eval(&self, t: Complex64) -> Result<Vec<Complex64>> {
        self.entries.iter().map(|f| f.eval(t)).collect()
    }

    /// Fails if `t` lies within `tol` of the pole set.
    pub fn check_regular(&self, t: Complex64, tol: f64) -> Result<()> {
        match self.poles.iter().find(|p| (p.at - t).norm() <= tol) {
            Some(_) => Err(Error::PoleError { t }),
            None => Ok(()),
        }
    }
}
