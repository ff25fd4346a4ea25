// Copyright 2026 The lievessiot Authors
// SPDX-License-Identifier: Apache-2.0

//! Lie's reduction method and integration by quadratures: sections built
//! from particular solutions, gauge reduction into isotropy algebras, the
//! transformed Riccati equations, and abelian and solvable quadrature.

mod quadrature;

pub use quadrature::{
    abelian_integrate, abelian_integrate_with, derived_chain, solvable_integrate, solvable_integrate_with,
    SolvableChain, DEFAULT_QUADRATURE_STEP,
};

use std::fmt::Write as _;

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::automorphic::{
    gauge_transform, gauge_transform_rational, AutomorphicSystem, CurveGrid, Generator, GroupCurve, SampledSystem,
};
use crate::error::{Error, Result};
use crate::exact;
use crate::homogeneous::{isotropy_algebra, verify_point_curve, HomogeneousSpace, PointCurve, SpaceKind, SpacePoint, StabilizerAlgebra};
use crate::lie::{Algebra, AlgebraElement};
use crate::linalg::{frobenius, inverse, CMatrix};
use crate::timefunc::{check_invertible_on, RationalFunction, RationalMatrix, TimePath, POLE_CLEARANCE};

/// Largest admissible distance of a reduced generator from the target
/// isotropy algebra.
pub const REDUCTION_TOL: f64 = 1e-6;
/// Residual above which a sampled curve is not accepted as a solution.
pub const SOLUTION_TOL: f64 = 1e-5;

/// A particular solution of an induced system.
#[derive(Debug, Clone)]
pub enum Solution {
    /// Exact rational entries: one for the projective line, `n` for `ℂⁿ`.
    Rational(Vec<RationalFunction>),
    Sampled(PointCurve),
}

/// A section `σ(t)` with `σ(t)·x0 = x(t)`.
#[derive(Debug, Clone)]
pub enum Section {
    Rational(RationalMatrix),
    Sampled(GroupCurve),
}

/// The reduced system `B`, exact when the inputs were rational.
#[derive(Debug, Clone)]
pub enum Reduced {
    Exact(AutomorphicSystem),
    Sampled(SampledSystem),
}

impl Generator for Reduced {
    fn algebra(&self) -> &Algebra {
        match self {
            Reduced::Exact(s) => s.algebra(),
            Reduced::Sampled(s) => s.algebra(),
        }
    }

    fn matrix_at(&self, t: Complex64) -> Result<CMatrix> {
        match self {
            Reduced::Exact(s) => s.matrix_at(t),
            Reduced::Sampled(s) => s.matrix_at(t),
        }
    }

    fn pole_locations(&self) -> Vec<Complex64> {
        match self {
            Reduced::Exact(s) => s.pole_locations(),
            Reduced::Sampled(s) => s.pole_locations(),
        }
    }
}

/// Index of the largest entry, ties to the lowest index.
fn pivot(v: &[Complex64]) -> usize {
    let mut best = 0;
    for (k, z) in v.iter().enumerate() {
        if z.norm() > v[best].norm() {
            best = k;
        }
    }
    best
}

fn completion_matrix(n: usize, first: &[RationalFunction], p: usize) -> RationalMatrix {
    let others: Vec<usize> = (0..n).filter(|&j| j != p).collect();
    RationalMatrix::from_fn(n, |i, j| {
        if j == 0 {
            first[i].clone()
        } else if i == others[j - 1] {
            RationalFunction::one()
        } else {
            RationalFunction::zero()
        }
    })
}

fn completion_numeric(first: &[Complex64], p: usize) -> CMatrix {
    let n = first.len();
    let others: Vec<usize> = (0..n).filter(|&j| j != p).collect();
    CMatrix::from_fn(n, n, |i, j| {
        if j == 0 {
            first[i]
        } else if i == others[j - 1] {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

// g0 with g0 · 0 = x0 on the projective line.
fn projective_base(x0: &SpacePoint) -> CMatrix {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    match x0.affine() {
        Some(x) => CMatrix::from_row_slice(2, 2, &[one, x, zero, one]),
        None => CMatrix::from_row_slice(2, 2, &[zero, one, -one, zero]),
    }
}

fn check_in_group(algebra: &Algebra, m: &CMatrix) -> Result<()> {
    let r = algebra.constraint().residual(m);
    if r > 1e-8 {
        return Err(Error::NotInOrbit(format!("section leaves the group (constraint residual {r:.3e})")));
    }
    Ok(())
}

fn linear_x0(space: &HomogeneousSpace, x0: &SpacePoint) -> Result<Vec<Complex64>> {
    match x0 {
        SpacePoint::Vector(v) if v.len() == space.algebra().n() => Ok(v.iter().copied().collect()),
        _ => Err(Error::DimensionMismatch("expected a vector of the linear space".into())),
    }
}

/// Section through a rational solution. Projective line: `[[1, x],[0,1]]`
/// composed with a fixed `g0` moving `0` to `x0`. Linear space:
/// `[x(t) | e_j, j ≠ p] · [x0 | e_j, j ≠ p0]⁻¹` with pivots chosen at `t0`.
pub fn rational_section(
    space: &HomogeneousSpace,
    x: &[RationalFunction],
    x0: &SpacePoint,
    t0: Complex64,
) -> Result<RationalMatrix> {
    let algebra = space.algebra();
    let n = algebra.n();
    let section = match space.kind() {
        SpaceKind::Adjoint => return Err(Error::UnsupportedKind("sections for the adjoint action".into())),
        SpaceKind::ProjectiveLine => {
            if x.len() != 1 {
                return Err(Error::DimensionMismatch("a projective solution has one entry".into()));
            }
            let g0 = projective_base(x0);
            let g0_inv = RationalMatrix::constant(&inverse(&g0).expect("unimodular"))
                .ok_or_else(|| Error::DimensionMismatch("non-finite point".into()))?;
            let unipotent = RationalMatrix::from_entries(
                2,
                vec![RationalFunction::one(), x[0].clone(), RationalFunction::zero(), RationalFunction::one()],
            );
            unipotent.mul(&g0_inv)
        }
        SpaceKind::Linear => {
            if x.len() != n {
                return Err(Error::DimensionMismatch(format!("a linear solution has {n} entries")));
            }
            let v0 = linear_x0(space, x0)?;
            if v0.iter().all(|z| z.norm() == 0.0) {
                if x.iter().all(RationalFunction::is_zero) {
                    return Ok(RationalMatrix::identity(n));
                }
                return Err(Error::NotInOrbit("the orbit of 0 is {0}".into()));
            }
            let at_t0 = x.iter().map(|f| f.eval(t0)).collect::<Result<Vec<_>>>()?;
            let s = completion_matrix(n, x, pivot(&at_t0));
            let s0 = completion_numeric(&v0, pivot(&v0));
            let s0_inv = RationalMatrix::constant(&inverse(&s0).expect("pivoted completion is invertible"))
                .ok_or_else(|| Error::DimensionMismatch("non-finite point".into()))?;
            s.mul(&s0_inv)
        }
    };
    check_in_group(algebra, &section.eval(t0)?)?;
    Ok(section)
}

/// Numerical analogue of [`rational_section`] along a sampled solution.
pub fn sampled_section(space: &HomogeneousSpace, x: &PointCurve, x0: &SpacePoint) -> Result<GroupCurve> {
    let algebra = space.algebra().clone();
    let grid = x.grid().clone();
    let build: Box<dyn Fn(&SpacePoint, Complex64) -> Result<CMatrix> + Send + Sync> = match space.kind() {
        SpaceKind::Adjoint => return Err(Error::UnsupportedKind("sections for the adjoint action".into())),
        SpaceKind::ProjectiveLine => {
            let g0_inv = inverse(&projective_base(x0)).expect("unimodular");
            Box::new(move |p, t| {
                let v = p.affine().ok_or(Error::SectionSingular { t })?;
                let one = Complex64::new(1.0, 0.0);
                let zero = Complex64::new(0.0, 0.0);
                Ok(CMatrix::from_row_slice(2, 2, &[one, v, zero, one]) * &g0_inv)
            })
        }
        SpaceKind::Linear => {
            let v0 = linear_x0(space, x0)?;
            if v0.iter().all(|z| z.norm() == 0.0) {
                return Err(Error::NotInOrbit("the orbit of 0 is {0}".into()));
            }
            let SpacePoint::Vector(first) = &x.points()[0] else {
                return Err(Error::DimensionMismatch("expected a linear point curve".into()));
            };
            let p = pivot(first.as_slice());
            let s0_inv = inverse(&completion_numeric(&v0, pivot(&v0))).expect("pivoted completion is invertible");
            Box::new(move |pt, t| match pt {
                SpacePoint::Vector(v) => {
                    let m = completion_numeric(v.as_slice(), p);
                    if v[p].norm() <= 1e-12 * v.norm() {
                        return Err(Error::SectionSingular { t });
                    }
                    Ok(m * &s0_inv)
                }
                _ => Err(Error::DimensionMismatch("expected a linear point".into())),
            })
        }
    };
    let build = std::sync::Arc::new(build);
    for (&t, p) in grid.times().iter().zip(x.points()) {
        check_in_group(&algebra, &build(p, t)?)?;
    }
    let xc = x.clone();
    GroupCurve::from_fn(&algebra, grid, move |t| build(&xc.value_at(t)?, t))
}

// Along a solution, `x' = a(t)·x` gives the section derivative without
// differencing: `σ'σ⁻¹ = [[0, x'],[0, 0]]` on the projective line and
// `[x' | 0]·S⁻¹` for the completion `S` on `ℂⁿ`.
fn attach_section_generator(
    system: &AutomorphicSystem,
    space: &HomogeneousSpace,
    x: &PointCurve,
    sigma: GroupCurve,
) -> GroupCurve {
    let sys = system.clone();
    let xc = x.clone();
    match space.kind() {
        SpaceKind::ProjectiveLine => sigma.with_generator(move |t| {
            let v = xc.value_at(t)?.affine().ok_or(Error::SectionSingular { t })?;
            let m = sys.matrix_at(t)?;
            let dv = m[(0, 1)] + (m[(0, 0)] - m[(1, 1)]) * v - m[(1, 0)] * v * v;
            let mut out = CMatrix::zeros(2, 2);
            out[(0, 1)] = dv;
            Ok(out)
        }),
        SpaceKind::Linear => {
            let SpacePoint::Vector(first) = &x.points()[0] else { return sigma };
            let p = pivot(first.as_slice());
            sigma.with_generator(move |t| {
                let SpacePoint::Vector(v) = xc.value_at(t)? else {
                    return Err(Error::DimensionMismatch("expected a linear point".into()));
                };
                let s = completion_numeric(v.as_slice(), p);
                let inv = inverse(&s).ok_or(Error::SectionSingular { t })?;
                let dv = sys.matrix_at(t)? * v;
                let mut ds = CMatrix::zeros(s.nrows(), s.ncols());
                ds.set_column(0, &dv);
                Ok(ds * inv)
            })
        }
        SpaceKind::Adjoint => sigma,
    }
}

/// Section through a particular solution; `t0` picks pivots for linear
/// spaces when the solution is rational.
pub fn section_from_solution(
    space: &HomogeneousSpace,
    x: &Solution,
    x0: &SpacePoint,
    t0: Complex64,
) -> Result<Section> {
    match x {
        Solution::Rational(f) => Ok(Section::Rational(rational_section(space, f, x0, t0)?)),
        Solution::Sampled(c) => Ok(Section::Sampled(sampled_section(space, c, x0)?)),
    }
}

/// Exact residual of `x' = a(t)·x` for a rational solution; `None` when it
/// vanishes identically, otherwise its size at a sample point.
fn rational_solution_defect(system: &AutomorphicSystem, space: &HomogeneousSpace, x: &[RationalFunction]) -> Option<f64> {
    let a = system.rational_matrix();
    let n = a.n();
    let defect: Vec<RationalFunction> = match space.kind() {
        SpaceKind::ProjectiveLine => {
            let f = &x[0];
            let (al, be, ga, de) = (a.get(0, 0), a.get(0, 1), a.get(1, 0), a.get(1, 1));
            let field = &(be + &(&(al - de) * f)) - &(&(ga * f) * f);
            vec![&f.derivative() - &field]
        }
        _ => (0..n)
            .map(|i| {
                let ax = (0..n).fold(RationalFunction::zero(), |acc, j| &acc + &(a.get(i, j) * &x[j]));
                &x[i].derivative() - &ax
            })
            .collect(),
    };
    if defect.iter().all(RationalFunction::is_zero) {
        return None;
    }
    let samples = [Complex64::new(0.3137, 0.2718), Complex64::new(-1.1414, 0.577)];
    Some(
        samples
            .iter()
            .find_map(|&t| defect.iter().map(|d| d.eval(t).map(|v| v.norm())).sum::<Result<f64>>().ok())
            .unwrap_or(f64::INFINITY),
    )
}

/// Outcome of Lie's reduction.
#[derive(Debug, Clone)]
pub struct ReductionResult {
    pub section: Section,
    pub reduced: Reduced,
    pub target: StabilizerAlgebra,
    /// Largest distance of the reduced generator from `target` on the
    /// evaluation grid.
    pub residual: f64,
    grid: CurveGrid,
}

impl ReductionResult {
    pub fn grid(&self) -> &CurveGrid {
        &self.grid
    }

    /// Exact reduced coefficients as expression strings, or sampled
    /// coordinates as CSV (`t_re,t_im,c0_re,c0_im,...`).
    pub fn to_json(&self) -> Result<Value> {
        let target: Vec<Value> = self.target.coords().iter().map(|v| json!(v.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>())).collect();
        let body = match &self.reduced {
            Reduced::Exact(s) => json!({
                "kind": "exact",
                "coefficients": s.coeffs().entries().iter().map(|f| f.to_string()).collect::<Vec<_>>(),
                "matrix": matrix_strings(&s.rational_matrix()),
            }),
            Reduced::Sampled(s) => {
                let mut csv = String::from("t_re,t_im");
                for k in 0..s.algebra().dim() {
                    write!(csv, ",c{k}_re,c{k}_im").unwrap();
                }
                csv.push('\n');
                for &t in self.grid.times() {
                    let x = s.evaluate(t)?;
                    write!(csv, "{:.16e},{:.16e}", t.re, t.im).unwrap();
                    for z in x.coords().iter() {
                        write!(csv, ",{:.16e},{:.16e}", z.re, z.im).unwrap();
                    }
                    csv.push('\n');
                }
                json!({ "kind": "sampled", "csv": csv })
            }
        };
        let section = match &self.section {
            Section::Rational(m) => json!({ "kind": "exact", "matrix": matrix_strings(m) }),
            Section::Sampled(_) => json!({ "kind": "sampled" }),
        };
        Ok(json!({ "section": section, "reduced": body, "target_basis": target, "residual": self.residual }))
    }
}

fn matrix_strings(m: &RationalMatrix) -> Vec<Vec<String>> {
    (0..m.n()).map(|i| (0..m.n()).map(|j| m.get(i, j).to_string()).collect()).collect()
}

fn target_residual<G: Generator + ?Sized>(reduced: &G, target: &StabilizerAlgebra, grid: &CurveGrid) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &t in grid.times() {
        let b = reduced.matrix_at(t)?;
        let (c, _) = reduced.algebra().project_with_residual(&b);
        worst = worst.max(target.distance(&c));
    }
    Ok(worst)
}

/// Lie's reduction: with `x(t) = σ(t)·x0`, the gauge by `σ⁻¹` moves `A`
/// into the isotropy algebra of `x0`:
/// `b = Adj_{σ⁻¹}(a − l∂σ)`. Exact for rational solutions; `path` and
/// `step` give the grid on which membership is checked.
pub fn lie_reduce(
    system: &AutomorphicSystem,
    space: &HomogeneousSpace,
    x: &Solution,
    x0: &SpacePoint,
    path: &TimePath,
    step: f64,
) -> Result<ReductionResult> {
    let grid = match x {
        Solution::Sampled(c) => c.grid().clone(),
        Solution::Rational(_) => CurveGrid::new(path, step)?,
    };
    let target = isotropy_algebra(space, x0)?;
    let (section, reduced) = match x {
        Solution::Rational(f) => {
            if let Some(residual) = rational_solution_defect(system, space, f) {
                return Err(Error::NotASolution { residual });
            }
            let sigma = rational_section(space, f, x0, path.start())?;
            let inv = check_invertible_on(&sigma, path, POLE_CLEARANCE)?;
            let b = gauge_transform_rational(system, &inv)?;
            (Section::Rational(sigma), Reduced::Exact(b))
        }
        Solution::Sampled(c) => {
            let residual = verify_point_curve(system, c)?;
            if !(residual <= SOLUTION_TOL) {
                return Err(Error::NotASolution { residual });
            }
            let sigma = attach_section_generator(system, space, c, sampled_section(space, c, x0)?);
            let b = gauge_transform(system, &sigma.inverse());
            (Section::Sampled(sigma), Reduced::Sampled(b))
        }
    };
    let residual = target_residual(&reduced, &target, &grid)?;
    if !(residual <= REDUCTION_TOL) {
        return Err(Error::CrossCheckFailure { what: "reduced generator in isotropy algebra".into(), residual, tolerance: REDUCTION_TOL });
    }
    Ok(ReductionResult { section, reduced, target, residual, grid })
}

/// Coefficients of the equations satisfied by `z = x − f` and `w = 1/z`
/// when `f` solves `x' = a + b x + c x²`:
/// `z' = (b + 2cf) z + c z²` and `w' = −c − (b + 2cf) w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformedRiccati {
    pub z_linear: RationalFunction,
    pub z_quadratic: RationalFunction,
    pub w_constant: RationalFunction,
    pub w_linear: RationalFunction,
}

pub fn riccati_transformed_equations(
    a: &RationalFunction,
    b: &RationalFunction,
    c: &RationalFunction,
    f: &RationalFunction,
) -> Result<TransformedRiccati> {
    let rhs = &(a + &(b * f)) + &(&(c * f) * f);
    let defect = &f.derivative() - &rhs;
    if !defect.is_zero() {
        let t = Complex64::new(0.3137, 0.2718);
        return Err(Error::NotASolution { residual: defect.eval(t).map(|v| v.norm()).unwrap_or(f64::INFINITY) });
    }
    let two = RationalFunction::constant(exact::exact_int(2));
    let lin = b + &(&(&two * c) * f);
    Ok(TransformedRiccati { z_linear: lin.clone(), z_quadratic: c.clone(), w_constant: -c, w_linear: -&lin })
}

/// `b(t)` of a reduction result at `t` as an algebra element.
pub fn reduced_element(result: &ReductionResult, t: Complex64) -> Result<AlgebraElement> {
    result.reduced.evaluate(t)
}

/// Largest deviation between `a(t)` and the gauge of the reduced system
/// back by the section, on the result grid.
pub fn round_trip_residual(system: &AutomorphicSystem, result: &ReductionResult) -> Result<f64> {
    let mut worst: f64 = 0.0;
    match (&result.section, &result.reduced) {
        (Section::Rational(sigma), Reduced::Exact(b)) => {
            let back = gauge_transform_rational(b, sigma)?;
            for &t in result.grid.times() {
                worst = worst.max(frobenius(&(back.matrix_at(t)? - system.matrix_at(t)?)));
            }
        }
        (Section::Sampled(sigma), reduced) => {
            let back = gauge_transform(reduced, sigma);
            for &t in result.grid.times() {
                worst = worst.max(frobenius(&(back.matrix_at(t)? - system.matrix_at(t)?)));
            }
        }
        (Section::Rational(sigma), reduced) => {
            for &t in result.grid.times() {
                let s = sigma.eval(t)?;
                let ds = sigma.derivative().eval(t)?;
                let inv = inverse(&s).ok_or(Error::SectionSingular { t })?;
                let back = &s * reduced.matrix_at(t)? * &inv + ds * &inv;
                worst = worst.max(frobenius(&(back - system.matrix_at(t)?)));
            }
        }
    }
    Ok(worst)
}
