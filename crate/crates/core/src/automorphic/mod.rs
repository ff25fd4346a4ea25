// Copyright 2026 The lievessiot Authors
// SPDX-License-Identifier: Apache-2.0

//! Automorphic systems `σ' = a(t) σ` with `a(t) = Σ f_i(t) A_i`: evaluation,
//! group-preserving flows, logarithmic derivatives, solution checks and
//! gauge transformations.

mod curve;
mod flow;
mod gauge;
mod grid;

pub use curve::GroupCurve;
pub use flow::{
    flow, flow_with, generic_step_count, reset_generic_step_count, step_map, FlowOptions, Integrator,
    DEFAULT_REFINE_TOL,
};
pub use gauge::{gauge_composition_check, gauge_transform, gauge_transform_rational, project_rational};
pub use grid::{fornberg_first_derivative, CurveGrid};

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exact::Exact;
use crate::lie::{Algebra, AlgebraElement};
use crate::linalg::{frobenius, CMatrix, CVector};
use crate::timefunc::{CoefficientVector, RationalFunction, RationalMatrix};

/// Anything that yields an algebra-valued generator `a(t)`.
pub trait Generator: Send + Sync {
    fn algebra(&self) -> &Algebra;

    /// `a(t)` as a matrix.
    fn matrix_at(&self, t: Complex64) -> Result<CMatrix>;

    /// Points where `a` is singular.
    fn pole_locations(&self) -> Vec<Complex64> {
        Vec::new()
    }

    /// `a(t)` as an algebra element.
    fn evaluate(&self, t: Complex64) -> Result<AlgebraElement> {
        AlgebraElement::from_matrix(self.algebra(), self.matrix_at(t)?)
    }
}

/// `A = ∂ + Σ f_i(t) A_i` with exact rational coefficients.
#[derive(Clone)]
pub struct AutomorphicSystem {
    algebra: Algebra,
    coeffs: CoefficientVector,
    exact_basis: Arc<Vec<Vec<Exact>>>,
}

impl fmt::Debug for AutomorphicSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeffs: Vec<String> = self.coeffs.entries().iter().map(|c| c.to_string()).collect();
        f.debug_struct("AutomorphicSystem").field("algebra", &self.algebra.name()).field("coeffs", &coeffs).finish()
    }
}

impl AutomorphicSystem {
    pub fn new(algebra: &Algebra, coeffs: CoefficientVector) -> Result<Self> {
        if coeffs.len() != algebra.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for an algebra of dimension {}",
                coeffs.len(),
                algebra.dim()
            )));
        }
        Ok(AutomorphicSystem { algebra: algebra.clone(), coeffs, exact_basis: Arc::new(algebra.exact_basis()) })
    }

    /// Parses one coefficient expression per basis element.
    pub fn parse<S: AsRef<str>>(algebra: &Algebra, exprs: &[S]) -> Result<Self> {
        AutomorphicSystem::new(algebra, CoefficientVector::parse(exprs)?)
    }

    pub fn from_functions(algebra: &Algebra, coeffs: Vec<RationalFunction>) -> Result<Self> {
        AutomorphicSystem::new(algebra, CoefficientVector::new(coeffs))
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn coeffs(&self) -> &CoefficientVector {
        &self.coeffs
    }

    pub fn coefficient(&self, i: usize) -> &RationalFunction {
        &self.coeffs.entries()[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.entries().iter().all(RationalFunction::is_zero)
    }

    /// `a(t)` as an exact matrix of rational functions.
    pub fn rational_matrix(&self) -> RationalMatrix {
        RationalMatrix::combination(self.algebra.n(), self.coeffs.entries(), &self.exact_basis)
    }

    /// `Σ f_i(t) A_i`; [`Error::PoleError`] at a pole.
    pub fn evaluate_algebra(&self, t: Complex64) -> Result<AlgebraElement> {
        let v = self.coeffs.eval(t)?;
        Ok(AlgebraElement::from_coords(&self.algebra, CVector::from_vec(v)))
    }
}

impl Generator for AutomorphicSystem {
    fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    fn matrix_at(&self, t: Complex64) -> Result<CMatrix> {
        let v = self.coeffs.eval(t)?;
        Ok(self.algebra.matrix_of(&v))
    }

    fn pole_locations(&self) -> Vec<Complex64> {
        self.coeffs.pole_locations()
    }

    fn evaluate(&self, t: Complex64) -> Result<AlgebraElement> {
        self.evaluate_algebra(t)
    }
}

/// `Σ f_i(t) A_i` at `t`.
pub fn evaluate_algebra(system: &AutomorphicSystem, t: Complex64) -> Result<AlgebraElement> {
    system.evaluate_algebra(t)
}

/// A generator known only through evaluation, such as the result of a
/// numerical gauge transformation. Values are checked against the algebra
/// span on evaluation.
#[derive(Clone)]
pub struct SampledSystem {
    algebra: Algebra,
    f: Arc<dyn Fn(Complex64) -> Result<CMatrix> + Send + Sync>,
    poles: Vec<Complex64>,
}

impl fmt::Debug for SampledSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SampledSystem").field("algebra", &self.algebra.name()).field("poles", &self.poles).finish()
    }
}

impl SampledSystem {
    pub fn new<F>(algebra: &Algebra, f: F, poles: Vec<Complex64>) -> Self
    where
        F: Fn(Complex64) -> Result<CMatrix> + Send + Sync + 'static,
    {
        SampledSystem { algebra: algebra.clone(), f: Arc::new(f), poles }
    }
}

impl Generator for SampledSystem {
    fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    fn matrix_at(&self, t: Complex64) -> Result<CMatrix> {
        let m = (self.f)(t)?;
        let (coords, residual) = self.algebra.project_with_residual(&m);
        if residual > 1e-6 * frobenius(&m).max(1.0) {
            return Err(Error::ProjectionFailure { residual });
        }
        Ok(self.algebra.matrix_of(coords.as_slice()))
    }

    fn pole_locations(&self) -> Vec<Complex64> {
        self.poles.clone()
    }
}

/// Residual `sup_k ‖l∂σ(t_k) − a(t_k)‖_F` over the nodes of `curve`.
pub fn verify_solution<G: Generator + ?Sized>(system: &G, curve: &GroupCurve) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (k, &t) in curve.times().iter().enumerate() {
        let a = system.matrix_at(t)?;
        let ld = curve.log_derivative_matrix_at_arc(curve.grid().arcs()[k])?;
        worst = worst.max(frobenius(&(ld - a)));
    }
    Ok(worst)
}

/// `l∂σ(t)` as an algebra element.
pub fn logarithmic_derivative(curve: &GroupCurve, t: Complex64) -> Result<AlgebraElement> {
    curve.logarithmic_derivative(t)
}
