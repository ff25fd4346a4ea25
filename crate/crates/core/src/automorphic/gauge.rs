// Copyright 2026 The lievessiot Authors
// SPDX-License-Identifier: Apache-2.0

use std::sync::Arc;

use num_complex::Complex64;

use super::curve::GroupCurve;
use super::{AutomorphicSystem, Generator, SampledSystem};
use crate::error::{Error, Result};
use crate::lie::Algebra;
use crate::linalg::{frobenius, inverse};
use crate::timefunc::{RationalFunction, RationalMatrix};

/// Coordinates of a rational matrix curve in the algebra basis, computed
/// exactly; [`Error::ProjectionFailure`] if it leaves the span.
pub fn project_rational(algebra: &Algebra, m: &RationalMatrix) -> Result<Vec<RationalFunction>> {
    let proj = algebra.exact_projector().ok_or(Error::DependentBasis { rank: 0, expected: algebra.dim() })?;
    let coords: Vec<RationalFunction> = proj
        .weights()
        .iter()
        .map(|w| {
            w.iter().zip(proj.pivots()).fold(RationalFunction::zero(), |acc, (c, &p)| {
                if crate::exact::is_zero(c) {
                    acc
                } else {
                    &acc + &m.entries()[p].scale(c)
                }
            })
        })
        .collect();
    let back = RationalMatrix::combination(algebra.n(), &coords, proj.basis());
    if back != *m {
        let diff = back.sub(m);
        return Err(Error::ProjectionFailure { residual: sample_norm(&diff) });
    }
    Ok(coords)
}

// Size of an exact discrepancy at a generic point, for error reporting.
fn sample_norm(m: &RationalMatrix) -> f64 {
    [Complex64::new(0.3137, 0.2718), Complex64::new(-1.1414, 0.577)]
        .iter()
        .find_map(|&t| m.eval(t).ok())
        .map(|v| frobenius(&v))
        .unwrap_or(f64::INFINITY)
}

/// Exact gauge transform by a rational matrix curve:
/// `b = σ a σ⁻¹ + σ' σ⁻¹`, re-expanded in the basis.
pub fn gauge_transform_rational(system: &AutomorphicSystem, sigma: &RationalMatrix) -> Result<AutomorphicSystem> {
    let algebra = system.algebra();
    if sigma.n() != algebra.n() {
        return Err(Error::DimensionMismatch("section size differs from the algebra".into()));
    }
    let inv = sigma.inverse().ok_or(Error::SectionSingular { t: Complex64::new(0.0, 0.0) })?;
    let a = system.rational_matrix();
    let b = sigma.mul(&a).mul(&inv).add(&sigma.derivative().mul(&inv));
    let coords = project_rational(algebra, &b)?;
    AutomorphicSystem::from_functions(algebra, coords)
}

/// Gauge transform by a sampled curve; `b(t) = σ a σ⁻¹ + l∂σ` evaluated on
/// demand at times on the curve's path.
pub fn gauge_transform<G>(system: &G, sigma: &GroupCurve) -> SampledSystem
where
    G: Generator + Clone + 'static,
{
    let sys = Arc::new(system.clone());
    let curve = sigma.clone();
    let poles = system.pole_locations();
    SampledSystem::new(
        system.algebra(),
        move |t| {
            let s = curve.value_at(t)?;
            let inv = inverse(&s).ok_or(Error::SectionSingular { t })?;
            let a = sys.matrix_at(t)?;
            Ok(&s * a * inv + curve.log_derivative_matrix(t)?)
        },
        poles,
    )
}

/// Residual `sup ‖l∂(στ) − l∂σ − Adj_σ(l∂τ)‖_F` over the nodes of `σ`.
pub fn gauge_composition_check(sigma: &GroupCurve, tau: &GroupCurve) -> Result<f64> {
    let product = sigma.product(tau)?;
    let mut worst: f64 = 0.0;
    for &t in sigma.times() {
        let s = sigma.value_at(t)?;
        let inv = inverse(&s).ok_or(Error::SectionSingular { t })?;
        let lhs = product.log_derivative_matrix(t)?;
        let rhs = sigma.log_derivative_matrix(t)? + &s * tau.log_derivative_matrix(t)? * inv;
        worst = worst.max(frobenius(&(lhs - rhs)));
    }
    Ok(worst)
}

