// Copyright 2026 The lievessiot Authors
// SPDX-License-Identifier: Apache-2.0

//! Homogeneous spaces of matrix groups (vectors, the projective line, the
//! adjoint representation), the Lie-Vessiot systems induced on them,
//! isotropy algebras and superposition laws.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::automorphic::{flow_with, CurveGrid, FlowOptions, Generator, GroupCurve};
use crate::error::{Error, Result};
use crate::lie::{Algebra, AlgebraElement, GroupElement};
use crate::linalg::{commutator, distance_to_span, inverse, kernel, vectorize, CMatrix, CVector, ONE, ZERO};
use crate::timefunc::TimePath;

/// Relative singular-value cutoff for stabilizer kernels.
pub const RANK_CUTOFF: f64 = 1e-9;
/// Agreement required between direct integration and the group action.
pub const CROSS_CHECK_TOL: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceKind {
    /// `ℂⁿ` with `σ·x` the matrix-vector product.
    Linear,
    /// `ℙ¹` with the linear fractional action of 2×2 matrices.
    ProjectiveLine,
    /// The algebra itself with `σ·X = σ X σ⁻¹`.
    Adjoint,
}

/// A group action `G × M → M`.
#[derive(Clone)]
pub struct HomogeneousSpace {
    kind: SpaceKind,
    algebra: Algebra,
}

impl fmt::Debug for HomogeneousSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HomogeneousSpace").field("kind", &self.kind).field("algebra", &self.algebra.name()).finish()
    }
}

/// A point of a homogeneous space. Projective points are kept as
/// homogeneous pairs `(p : q)` scaled so the larger entry has modulus one;
/// `q = 0` is the point at infinity.
#[derive(Debug, Clone, PartialEq)]
pub enum SpacePoint {
    Vector(CVector),
    Projective { p: Complex64, q: Complex64 },
    Element(CVector),
}

impl SpacePoint {
    pub fn vector(v: &[Complex64]) -> Self {
        SpacePoint::Vector(CVector::from_column_slice(v))
    }

    /// The homogeneous point `(p : q)`; `None` for `(0 : 0)`.
    pub fn projective(p: Complex64, q: Complex64) -> Option<Self> {
        let scale = p.norm().max(q.norm());
        if !(scale > 0.0) || !scale.is_finite() {
            return None;
        }
        Some(SpacePoint::Projective { p: p / scale, q: q / scale })
    }

    /// The affine point `x = (x : 1)`.
    pub fn finite(x: Complex64) -> Self {
        SpacePoint::projective(x, ONE).expect("(x : 1) is never zero")
    }

    pub fn infinity() -> Self {
        SpacePoint::Projective { p: ONE, q: ZERO }
    }

    pub fn element(x: &AlgebraElement) -> Self {
        SpacePoint::Element(x.coords().clone())
    }

    /// Affine value of a projective point, `None` at infinity.
    pub fn affine(&self) -> Option<Complex64> {
        match self {
            SpacePoint::Projective { p, q } if q.norm() > 0.0 => Some(p / q),
            _ => None,
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, SpacePoint::Projective { q, .. } if q.norm() == 0.0)
    }

    fn homogeneous(&self) -> Option<(Complex64, Complex64)> {
        match self {
            SpacePoint::Projective { p, q } => Some((*p, *q)),
            _ => None,
        }
    }

    fn coordinates(&self) -> &CVector {
        match self {
            SpacePoint::Vector(v) | SpacePoint::Element(v) => v,
            SpacePoint::Projective { .. } => panic!("projective points have no linear coordinates"),
        }
    }

    /// Distance between points of the same kind: chordal on the projective
    /// line, relative Euclidean otherwise.
    pub fn distance(&self, other: &SpacePoint) -> f64 {
        match (self, other) {
            (SpacePoint::Projective { p: p1, q: q1 }, SpacePoint::Projective { p: p2, q: q2 }) => {
                (p1 * q2 - p2 * q1).norm() / ((p1.norm_sqr() + q1.norm_sqr()) * (p2.norm_sqr() + q2.norm_sqr())).sqrt()
            }
            (SpacePoint::Vector(a), SpacePoint::Vector(b)) | (SpacePoint::Element(a), SpacePoint::Element(b))
                if a.len() == b.len() =>
            {
                (a - b).norm() / a.norm().max(1.0)
            }
            _ => f64::INFINITY,
        }
    }

    /// JSON form: vectors and algebra coordinates as arrays of `[re, im]`,
    /// projective points as `[re, im]` or `"inf"`.
    pub fn to_json(&self) -> Value {
        let pairs = |v: &CVector| Value::Array(v.iter().map(|z| json!([z.re, z.im])).collect());
        match self {
            SpacePoint::Vector(v) | SpacePoint::Element(v) => pairs(v),
            SpacePoint::Projective { .. } => match self.affine() {
                Some(x) => json!([x.re, x.im]),
                None => json!("inf"),
            },
        }
    }

    pub fn from_json(space: &HomogeneousSpace, value: &Value) -> Result<Self> {
        let bad = |msg: &str| Error::Parse { pos: 0, msg: msg.to_string() };
        let pair = |v: &Value| -> Result<Complex64> {
            match v {
                Value::Array(a) if a.len() == 2 => {
                    let re = a[0].as_f64().ok_or_else(|| bad("expected a number"))?;
                    let im = a[1].as_f64().ok_or_else(|| bad("expected a number"))?;
                    Ok(Complex64::new(re, im))
                }
                Value::Number(n) => Ok(Complex64::new(n.as_f64().unwrap_or(f64::NAN), 0.0)),
                _ => Err(bad("expected [re, im]")),
            }
        };
        let list = |len: usize| -> Result<CVector> {
            let a = value.as_array().ok_or_else(|| bad("expected an array of [re, im] pairs"))?;
            if a.len() != len {
                return Err(Error::DimensionMismatch(format!("expected {len} entries, got {}", a.len())));
            }
            Ok(CVector::from_vec(a.iter().map(pair).collect::<Result<_>>()?))
        };
        match space.kind {
            SpaceKind::Linear => Ok(SpacePoint::Vector(list(space.algebra.n())?)),
            SpaceKind::Adjoint => Ok(SpacePoint::Element(list(space.algebra.dim())?)),
            SpaceKind::ProjectiveLine => match value {
                Value::String(s) if s == "inf" => Ok(SpacePoint::infinity()),
                other => Ok(SpacePoint::finite(pair(other)?)),
            },
        }
    }
}

impl HomogeneousSpace {
    pub fn new(kind: SpaceKind, algebra: &Algebra) -> Result<Self> {
        if kind == SpaceKind::ProjectiveLine && algebra.n() != 2 {
            return Err(Error::DimensionMismatch("the projective line needs 2x2 matrices".into()));
        }
        Ok(HomogeneousSpace { kind, algebra: algebra.clone() })
    }

    pub fn linear(algebra: &Algebra) -> Self {
        HomogeneousSpace { kind: SpaceKind::Linear, algebra: algebra.clone() }
    }

    pub fn projective_line(algebra: &Algebra) -> Result<Self> {
        HomogeneousSpace::new(SpaceKind::ProjectiveLine, algebra)
    }

    pub fn adjoint(algebra: &Algebra) -> Self {
        HomogeneousSpace { kind: SpaceKind::Adjoint, algebra: algebra.clone() }
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    fn check_point(&self, x: &SpacePoint) -> Result<()> {
        let ok = match (self.kind, x) {
            (SpaceKind::Linear, SpacePoint::Vector(v)) => v.len() == self.algebra.n(),
            (SpaceKind::Adjoint, SpacePoint::Element(v)) => v.len() == self.algebra.dim(),
            (SpaceKind::ProjectiveLine, SpacePoint::Projective { .. }) => true,
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!("point does not belong to a {:?} space", self.kind)))
        }
    }

    /// `σ · x` for a matrix `σ` of the group.
    pub fn act_matrix(&self, sigma: &CMatrix, x: &SpacePoint) -> Result<SpacePoint> {
        self.check_point(x)?;
        match x {
            SpacePoint::Vector(v) => Ok(SpacePoint::Vector(sigma * v)),
            SpacePoint::Projective { p, q } => {
                let np = sigma[(0, 0)] * p + sigma[(0, 1)] * q;
                let nq = sigma[(1, 0)] * p + sigma[(1, 1)] * q;
                SpacePoint::projective(np, nq).ok_or(Error::NotInGroup { residual: f64::INFINITY })
            }
            SpacePoint::Element(c) => {
                let inv = inverse(sigma).ok_or(Error::NotInGroup { residual: f64::INFINITY })?;
                let m = sigma * self.algebra.matrix_of(c.as_slice()) * inv;
                Ok(SpacePoint::Element(self.algebra.project(&m)?))
            }
        }
    }

    /// Linear map `X ↦ (field of X at x)` on algebra coordinates. Projective
    /// fields use the homogeneous form `β q² + (α−δ) p q − γ p²`.
    pub fn field_map(&self, x: &SpacePoint) -> Result<CMatrix> {
        self.check_point(x)?;
        let cols: Vec<CVector> = self
            .algebra
            .basis()
            .iter()
            .map(|b| match x {
                SpacePoint::Vector(v) => b * v,
                SpacePoint::Projective { p, q } => {
                    CVector::from_element(1, b[(0, 1)] * q * q + (b[(0, 0)] - b[(1, 1)]) * p * q - b[(1, 0)] * p * p)
                }
                SpacePoint::Element(c) => vectorize(&commutator(b, &self.algebra.matrix_of(c.as_slice()))),
            })
            .collect();
        Ok(CMatrix::from_columns(&cols))
    }
}

/// `σ · x`.
pub fn act(space: &HomogeneousSpace, sigma: &GroupElement, x: &SpacePoint) -> Result<SpacePoint> {
    space.act_matrix(sigma.matrix(), x)
}

/// Chart used for projective tangent vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Chart {
    /// `x = p/q`, used when `|q| ≥ |p|`.
    Affine,
    /// `y = q/p`, used near infinity.
    Inverted,
}

fn chart_of(p: Complex64, q: Complex64) -> (Chart, Complex64) {
    if q.norm() >= p.norm() {
        (Chart::Affine, p / q)
    } else {
        (Chart::Inverted, q / p)
    }
}

// x' = β + (α−δ)x − γx²  or, in y = 1/x,  y' = γ − (α−δ)y − βy².
fn chart_field(m: &CMatrix, chart: Chart, z: Complex64) -> Complex64 {
    let (al, be, ga, de) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    match chart {
        Chart::Affine => be + (al - de) * z - ga * z * z,
        Chart::Inverted => ga - (al - de) * z - be * z * z,
    }
}

/// Fundamental vector field of `X` at `x`: `X·x` (linear), `[X, x]`
/// (adjoint), or the one-component field of the projective chart
/// containing `x` (see [`Chart`]), together with that chart.
pub fn fundamental_field_in_chart(
    space: &HomogeneousSpace,
    x_elem: &AlgebraElement,
    x: &SpacePoint,
) -> Result<(CVector, Option<Chart>)> {
    space.check_point(x)?;
    let m = x_elem.matrix();
    Ok(match x {
        SpacePoint::Vector(v) => (m * v, None),
        SpacePoint::Element(c) => {
            let y = space.algebra.matrix_of(c.as_slice());
            (space.algebra.project(&commutator(m, &y))?, None)
        }
        SpacePoint::Projective { p, q } => {
            let (chart, z) = chart_of(*p, *q);
            (CVector::from_element(1, chart_field(m, chart, z)), Some(chart))
        }
    })
}

/// Fundamental vector field of `X` at `x` in kind-matched coordinates.
pub fn fundamental_field(space: &HomogeneousSpace, x_elem: &AlgebraElement, x: &SpacePoint) -> Result<CVector> {
    Ok(fundamental_field_in_chart(space, x_elem, x)?.0)
}

type PointFn = Arc<dyn Fn(f64) -> Result<SpacePoint> + Send + Sync>;

/// A curve in a homogeneous space sampled on a grid, with dense output.
#[derive(Clone)]
pub struct PointCurve {
    space: HomogeneousSpace,
    grid: CurveGrid,
    points: Vec<SpacePoint>,
    dense: PointFn,
}

impl fmt::Debug for PointCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PointCurve").field("space", &self.space).field("nodes", &self.points.len()).finish()
    }
}

impl PointCurve {
    /// The orbit `t ↦ σ(t)·x0` of a group curve.
    pub fn orbit(space: &HomogeneousSpace, curve: &GroupCurve, x0: &SpacePoint) -> Result<Self> {
        let points = curve.values().iter().map(|m| space.act_matrix(m, x0)).collect::<Result<Vec<_>>>()?;
        let (sp, c, x) = (space.clone(), curve.clone(), x0.clone());
        let dense: PointFn = Arc::new(move |s| sp.act_matrix(&c.value_at_arc(s)?, &x));
        Ok(PointCurve { space: space.clone(), grid: curve.grid().clone(), points, dense })
    }

    /// Samples a closed-form curve on `grid`.
    pub fn from_fn<F>(space: &HomogeneousSpace, grid: CurveGrid, f: F) -> Result<Self>
    where
        F: Fn(Complex64) -> Result<SpacePoint> + Send + Sync + 'static,
    {
        let points = grid.times().iter().map(|&t| f(t)).collect::<Result<Vec<_>>>()?;
        let g = grid.clone();
        let dense: PointFn = Arc::new(move |s| f(g.time_at(s)));
        Ok(PointCurve { space: space.clone(), grid, points, dense })
    }

    pub fn space(&self) -> &HomogeneousSpace {
        &self.space
    }

    pub fn grid(&self) -> &CurveGrid {
        &self.grid
    }

    pub fn times(&self) -> &[Complex64] {
        self.grid.times()
    }

    pub fn points(&self) -> &[SpacePoint] {
        &self.points
    }

    pub fn value_at_arc(&self, s: f64) -> Result<SpacePoint> {
        (self.dense)(s)
    }

    pub fn value_at(&self, t: Complex64) -> Result<SpacePoint> {
        self.value_at_arc(self.grid.arc_of(t)?)
    }

    /// Largest node-wise distance to `other`, through `other`'s dense output.
    pub fn distance_to(&self, other: &PointCurve) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for (t, x) in self.times().iter().zip(&self.points) {
            worst = worst.max(x.distance(&other.value_at(*t)?));
        }
        Ok(worst)
    }

    /// CSV with header `t_re,t_im` followed by `x{k}_re,x{k}_im` per
    /// coordinate, or homogeneous `p_re,p_im,q_re,q_im` on the projective
    /// line.
    pub fn to_csv(&self) -> String {
        use std::fmt::Write as _;
        let mut out = String::from("t_re,t_im");
        if self.space.kind == SpaceKind::ProjectiveLine {
            out.push_str(",p_re,p_im,q_re,q_im");
        } else {
            for k in 0..self.points.first().map_or(0, |p| p.coordinates().len()) {
                write!(out, ",x{k}_re,x{k}_im").unwrap();
            }
        }
        out.push('\n');
        for (t, x) in self.times().iter().zip(&self.points) {
            write!(out, "{:.16e},{:.16e}", t.re, t.im).unwrap();
            let zs: Vec<Complex64> = match x {
                SpacePoint::Projective { p, q } => vec![*p, *q],
                _ => x.coordinates().iter().copied().collect(),
            };
            for z in zs {
                write!(out, ",{:.16e},{:.16e}", z.re, z.im).unwrap();
            }
            out.push('\n');
        }
        out
    }

    /// JSON rows `{"t": [re, im], "x": point}`.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.times()
                .iter()
                .zip(&self.points)
                .map(|(t, x)| json!({ "t": [t.re, t.im], "x": x.to_json() }))
                .collect(),
        )
    }
}

// Coordinates of a point for direct integration: linear entries, algebra
// coordinates, or a projective chart value.
#[derive(Clone)]
enum State {
    Linear(CVector),
    Chart(Chart, Complex64),
}

fn state_of(x: &SpacePoint) -> State {
    match x {
        SpacePoint::Vector(v) | SpacePoint::Element(v) => State::Linear(v.clone()),
        SpacePoint::Projective { p, q } => {
            let (chart, z) = chart_of(*p, *q);
            State::Chart(chart, z)
        }
    }
}

fn point_of(kind: SpaceKind, s: &State) -> SpacePoint {
    match (kind, s) {
        (SpaceKind::Linear, State::Linear(v)) => SpacePoint::Vector(v.clone()),
        (_, State::Linear(v)) => SpacePoint::Element(v.clone()),
        (_, State::Chart(Chart::Affine, z)) => SpacePoint::finite(*z),
        (_, State::Chart(Chart::Inverted, z)) => SpacePoint::projective(ONE, *z).expect("(1 : y) is never zero"),
    }
}

fn linear_rhs(space: &HomogeneousSpace, a: &CMatrix, v: &CVector) -> Result<CVector> {
    Ok(match space.kind {
        SpaceKind::Linear => a * v,
        _ => {
            let y = space.algebra.matrix_of(v.as_slice());
            let (coords, _) = space.algebra.project_with_residual(&commutator(a, &y));
            coords
        }
    })
}

/// Classical RK4 for the induced system on the nodes of `grid`. Projective
/// states switch chart whenever the chart coordinate leaves the unit disk.
fn integrate_direct<G: Generator + ?Sized>(
    system: &G,
    space: &HomogeneousSpace,
    x0: &SpacePoint,
    grid: &CurveGrid,
) -> Result<Vec<SpacePoint>> {
    let times = grid.times();
    let mut state = state_of(x0);
    let mut out = vec![x0.clone()];
    let half = Complex64::new(0.5, 0.0);
    for k in 0..times.len() - 1 {
        let (t, h) = (times[k], times[k + 1] - times[k]);
        let a0 = system.matrix_at(t)?;
        let am = system.matrix_at(t + h * half)?;
        let a1 = system.matrix_at(t + h)?;
        state = match state {
            State::Linear(v) => {
                let k1 = linear_rhs(space, &a0, &v)?;
                let k2 = linear_rhs(space, &am, &(&v + &k1 * (h * half)))?;
                let k3 = linear_rhs(space, &am, &(&v + &k2 * (h * half)))?;
                let k4 = linear_rhs(space, &a1, &(&v + &k3 * h))?;
                State::Linear(v + (k1 + (k2 + k3) * Complex64::new(2.0, 0.0) + k4) * (h / 6.0))
            }
            State::Chart(chart, z) => {
                let (chart, z) = if z.norm() > 1.0 {
                    (if chart == Chart::Affine { Chart::Inverted } else { Chart::Affine }, z.inv())
                } else {
                    (chart, z)
                };
                let k1 = chart_field(&a0, chart, z);
                let k2 = chart_field(&am, chart, z + k1 * h * half);
                let k3 = chart_field(&am, chart, z + k2 * h * half);
                let k4 = chart_field(&a1, chart, z + k3 * h);
                State::Chart(chart, z + (k1 + (k2 + k3) * 2.0 + k4) * (h / 6.0))
            }
        };
        out.push(point_of(space.kind, &state));
    }
    Ok(out)
}

/// Solution of the induced system through `x0`, taken as `σ(t)·x0` for the
/// flow `σ` of `system`, and cross-checked against direct integration of
/// `x' = Σ f_i(t) X_i(x)` on the same grid.
pub fn induce_from_flow<G: Generator + ?Sized>(
    system: &G,
    space: &HomogeneousSpace,
    x0: &SpacePoint,
    flow_curve: &GroupCurve,
) -> Result<PointCurve> {
    space.check_point(x0)?;
    let orbit = PointCurve::orbit(space, flow_curve, x0)?;
    let direct = integrate_direct(system, space, x0, flow_curve.grid())?;
    let residual = orbit.points.iter().zip(&direct).map(|(a, b)| a.distance(b)).fold(0.0, f64::max);
    if !(residual <= CROSS_CHECK_TOL) {
        return Err(Error::CrossCheckFailure { what: "induced system".into(), residual, tolerance: CROSS_CHECK_TOL });
    }
    Ok(orbit)
}

/// Flows `system` from the identity and returns the cross-checked induced
/// solution through `x0`.
pub fn induce_and_solve<G>(
    system: &G,
    space: &HomogeneousSpace,
    x0: &SpacePoint,
    path: &TimePath,
    opts: &FlowOptions,
) -> Result<PointCurve>
where
    G: Generator + Clone + 'static,
{
    space.check_point(x0)?;
    let sigma = flow_with(system, path, &GroupElement::identity(space.algebra()), opts)?;
    induce_from_flow(system, space, x0, &sigma)
}

/// Residual `sup ‖x'(t) − a(t)·x(t)‖` of a point curve against the induced
/// system, with `x'` from fourth-order differences of the dense output (in
/// the chart of each node for projective curves).
pub fn verify_point_curve<G: Generator + ?Sized>(system: &G, curve: &PointCurve) -> Result<f64> {
    let space = curve.space.clone();
    let grid = curve.grid.clone();
    let mut worst: f64 = 0.0;
    for (k, x) in curve.points.iter().enumerate() {
        let s = grid.arcs()[k];
        let a = system.evaluate(grid.times()[k])?;
        let (field, chart) = fundamental_field_in_chart(&space, &a, x)?;
        let dense = curve.dense.clone();
        let coords = move |u: f64| -> Result<CMatrix> {
            let y = dense(u)?;
            Ok(match (&y, chart) {
                (SpacePoint::Projective { p, q }, Some(Chart::Affine)) => CMatrix::from_element(1, 1, p / q),
                (SpacePoint::Projective { p, q }, _) => CMatrix::from_element(1, 1, q / p),
                (other, _) => CMatrix::from_column_slice(other.coordinates().len(), 1, other.coordinates().as_slice()),
            })
        };
        let d = grid.derivative(coords, s, grid.spacing())?;
        let scale = match x {
            SpacePoint::Projective { .. } => 1.0,
            other => other.coordinates().norm().max(1.0),
        };
        worst = worst.max((d.column(0) - field).norm() / scale);
    }
    Ok(worst)
}

/// A subalgebra given by an orthonormal basis in algebra coordinates.
#[derive(Clone)]
pub struct StabilizerAlgebra {
    algebra: Algebra,
    coords: Vec<CVector>,
    singular_values: Vec<f64>,
}

impl fmt::Debug for StabilizerAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StabilizerAlgebra")
            .field("algebra", &self.algebra.name())
            .field("dim", &self.coords.len())
            .field("singular_values", &self.singular_values)
            .finish()
    }
}

impl StabilizerAlgebra {
    /// Span of the given coordinate vectors, orthonormalized.
    pub fn from_coords(algebra: &Algebra, vectors: &[CVector]) -> Self {
        StabilizerAlgebra {
            algebra: algebra.clone(),
            coords: crate::linalg::span(vectors, RANK_CUTOFF),
            singular_values: Vec::new(),
        }
    }

    pub(crate) fn from_kernel(algebra: &Algebra, coords: Vec<CVector>, singular_values: Vec<f64>) -> Self {
        StabilizerAlgebra { algebra: algebra.clone(), coords, singular_values }
    }

    pub fn whole(algebra: &Algebra) -> Self {
        let e: Vec<CVector> = (0..algebra.dim()).map(|k| AlgebraElement::basis(algebra, k).coords().clone()).collect();
        StabilizerAlgebra { algebra: algebra.clone(), coords: e, singular_values: Vec::new() }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Orthonormal basis in coordinates.
    pub fn coords(&self) -> &[CVector] {
        &self.coords
    }

    pub fn basis(&self) -> Vec<AlgebraElement> {
        self.coords.iter().map(|c| AlgebraElement::from_coords(&self.algebra, c.clone())).collect()
    }

    /// Singular values of the defining linear system, descending.
    pub fn singular_values(&self) -> &[f64] {
        &self.singular_values
    }

    /// Ratio between the smallest retained and largest discarded singular
    /// values; large when the rank decision is clear cut.
    pub fn singular_gap(&self) -> f64 {
        let sv = &self.singular_values;
        let rank = sv.len().saturating_sub(self.coords.len());
        if rank == 0 || rank >= sv.len() {
            return f64::INFINITY;
        }
        sv[rank - 1] / sv[rank].max(f64::MIN_POSITIVE)
    }

    /// Distance from `x` (coordinates) to the subspace.
    pub fn distance(&self, x: &CVector) -> f64 {
        distance_to_span(x, &self.coords)
    }

    /// Largest distance of `[X_i, X_j]` from the subspace.
    pub fn closure_residual(&self) -> f64 {
        let basis = self.basis();
        let mut worst: f64 = 0.0;
        for i in 0..basis.len() {
            for j in i + 1..basis.len() {
                let m = commutator(basis[i].matrix(), basis[j].matrix());
                let (c, _) = self.algebra.project_with_residual(&m);
                worst = worst.max(self.distance(&c));
            }
        }
        worst
    }

    /// Image under `Adj_σ`, orthonormalized.
    pub fn transport(&self, sigma: &CMatrix) -> Result<StabilizerAlgebra> {
        let inv = inverse(sigma).ok_or(Error::NotInGroup { residual: f64::INFINITY })?;
        let moved = self
            .basis()
            .iter()
            .map(|x| self.algebra.project(&(sigma * x.matrix() * &inv)))
            .collect::<Result<Vec<_>>>()?;
        Ok(StabilizerAlgebra::from_coords(&self.algebra, &moved))
    }

    /// Sine of the largest principal angle to `other`; 1 if dimensions differ.
    pub fn gap(&self, other: &StabilizerAlgebra) -> f64 {
        crate::linalg::subspace_gap(&self.coords, &other.coords)
    }
}

/// Kernel of `X ↦ fundamental_field(X, x)`.
pub fn isotropy_algebra(space: &HomogeneousSpace, x: &SpacePoint) -> Result<StabilizerAlgebra> {
    stabilizer_intersection(space.algebra(), &[(space.clone(), x.clone())])
}

/// Elements whose fundamental fields vanish at every listed point: the
/// kernel of the stacked field maps. Each block is scaled to unit norm so
/// the rank cutoff is uniform across the data.
pub fn stabilizer_intersection(algebra: &Algebra, data: &[(HomogeneousSpace, SpacePoint)]) -> Result<StabilizerAlgebra> {
    if data.is_empty() {
        return Ok(StabilizerAlgebra::whole(algebra));
    }
    let mut blocks = Vec::new();
    for (space, x) in data {
        if space.algebra().basis() != algebra.basis() {
            return Err(Error::DimensionMismatch("stabilizer data over different groups".into()));
        }
        let m = space.field_map(x)?;
        let norm = m.norm();
        blocks.push(if norm > 0.0 { m / Complex64::new(norm, 0.0) } else { m });
    }
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut stacked = CMatrix::zeros(rows, algebra.dim());
    let mut r = 0;
    for b in &blocks {
        stacked.view_mut((r, 0), (b.nrows(), b.ncols())).copy_from(b);
        r += b.nrows();
    }
    let (coords, singular_values) = kernel(&stacked, RANK_CUTOFF);
    Ok(StabilizerAlgebra { algebra: algebra.clone(), coords, singular_values })
}

/// `Σ λ_j x^(j)(t)` for `n` independent solutions of a linear system.
pub fn linear_superposition(fundamental: &[PointCurve], lambda: &[Complex64]) -> Result<PointCurve> {
    let first = fundamental.first().ok_or(Error::DependentSolutions { det: 0.0 })?;
    let n = first.space.algebra().n();
    if first.space.kind != SpaceKind::Linear || fundamental.len() != n || lambda.len() != n {
        return Err(Error::DimensionMismatch(format!("need {n} linear solutions and {n} constants")));
    }
    let cols: Vec<CVector> = fundamental.iter().map(|c| c.points[0].coordinates().clone()).collect();
    let det = CMatrix::from_columns(&cols).determinant().norm();
    if det <= 1e-8 {
        return Err(Error::DependentSolutions { det });
    }
    for c in fundamental {
        if c.grid.path() != first.grid.path() {
            return Err(Error::DimensionMismatch("solutions live on different paths".into()));
        }
    }
    let curves: Vec<PointCurve> = fundamental.to_vec();
    let lam: Vec<Complex64> = lambda.to_vec();
    let combine = move |s: f64| -> Result<SpacePoint> {
        let mut acc = CVector::zeros(n);
        for (c, l) in curves.iter().zip(&lam) {
            acc += c.value_at_arc(s)?.coordinates() * *l;
        }
        Ok(SpacePoint::Vector(acc))
    };
    let points = first.grid.arcs().iter().map(|&s| combine(s)).collect::<Result<Vec<_>>>()?;
    Ok(PointCurve { space: first.space.clone(), grid: first.grid.clone(), points, dense: Arc::new(combine) })
}

const COINCIDENCE_TOL: f64 = 1e-12;

fn cross(a: (Complex64, Complex64), b: (Complex64, Complex64)) -> Complex64 {
    a.0 * b.1 - b.0 * a.1
}

fn projective_parts(x: &SpacePoint) -> Result<(Complex64, Complex64)> {
    x.homogeneous().ok_or_else(|| Error::DimensionMismatch("expected a projective point".into()))
}

/// Riccati superposition `x = (x3(x1−x2) − λ x1(x3−x2)) / ((x1−x2) − λ(x3−x2))`
/// in homogeneous coordinates.
pub fn riccati_superposition(x1: &SpacePoint, x2: &SpacePoint, x3: &SpacePoint, lambda: Complex64) -> Result<SpacePoint> {
    let (a, b, c) = (projective_parts(x1)?, projective_parts(x2)?, projective_parts(x3)?);
    let (d12, d32, d13) = (cross(a, b), cross(c, b), cross(a, c));
    if d12.norm() <= COINCIDENCE_TOL || d32.norm() <= COINCIDENCE_TOL || d13.norm() <= COINCIDENCE_TOL {
        return Err(Error::DegenerateTriple);
    }
    SpacePoint::projective(c.0 * d12 - lambda * a.0 * d32, c.1 * d12 - lambda * a.1 * d32).ok_or(Error::DegenerateTriple)
}

/// [`riccati_superposition`] applied pointwise to three solution curves.
pub fn riccati_superposition_curves(
    x1: &PointCurve,
    x2: &PointCurve,
    x3: &PointCurve,
    lambda: Complex64,
) -> Result<PointCurve> {
    let (c1, c2, c3) = (x1.clone(), x2.clone(), x3.clone());
    let combine = move |s: f64| riccati_superposition(&c1.value_at_arc(s)?, &c2.value_at_arc(s)?, &c3.value_at_arc(s)?, lambda);
    let points = x1.grid.arcs().iter().map(|&s| combine(s)).collect::<Result<Vec<_>>>()?;
    Ok(PointCurve { space: x1.space.clone(), grid: x1.grid.clone(), points, dense: Arc::new(combine) })
}

/// Cross ratio `(x1−x2)(x3−x4) / ((x1−x4)(x3−x2))` in homogeneous form.
pub fn anharmonic_ratio(x1: &SpacePoint, x2: &SpacePoint, x3: &SpacePoint, x4: &SpacePoint) -> Result<Complex64> {
    let (a, b, c, d) = (projective_parts(x1)?, projective_parts(x2)?, projective_parts(x3)?, projective_parts(x4)?);
    let den = cross(a, d) * cross(c, b);
    if den.norm() <= COINCIDENCE_TOL {
        return Err(Error::DegenerateQuadruple);
    }
    Ok(cross(a, b) * cross(c, d) / den)
}
