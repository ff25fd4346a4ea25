// Copyright 2026 The lievessiot Authors
// SPDX-License-Identifier: Apache-2.0

use std::fmt;
use std::fmt::Write as _;
use std::sync::Arc;

use num_complex::Complex64;

use super::grid::CurveGrid;
use crate::error::{Error, Result};
use crate::lie::{Algebra, AlgebraElement, GroupElement};
use crate::linalg::{frobenius, inverse, CMatrix};

pub(crate) type DenseFn = Arc<dyn Fn(f64) -> Result<CMatrix> + Send + Sync>;
pub(crate) type GeneratorFn = Arc<dyn Fn(Complex64) -> Result<CMatrix> + Send + Sync>;

/// A curve `t -> σ(t)` in a matrix group sampled on a [`CurveGrid`], with a
/// dense-output rule for evaluation between nodes.
///
/// Curves may also carry a closed-form logarithmic derivative, which then
/// takes precedence over finite differences.
#[derive(Clone)]
pub struct GroupCurve {
    algebra: Algebra,
    grid: CurveGrid,
    values: Arc<Vec<CMatrix>>,
    dense: DenseFn,
    generator: Option<GeneratorFn>,
}

impl fmt::Debug for GroupCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroupCurve")
            .field("algebra", &self.algebra.name())
            .field("nodes", &self.grid.len())
            .field("closed_form_generator", &self.generator.is_some())
            .finish()
    }
}

impl GroupCurve {
    pub(crate) fn from_parts(algebra: &Algebra, grid: CurveGrid, values: Vec<CMatrix>, dense: DenseFn) -> Self {
        GroupCurve { algebra: algebra.clone(), grid, values: Arc::new(values), dense, generator: None }
    }

    /// Samples a closed-form matrix function on `grid`; the function also
    /// serves as the dense output.
    pub fn from_fn<F>(algebra: &Algebra, grid: CurveGrid, f: F) -> Result<Self>
    where
        F: Fn(Complex64) -> Result<CMatrix> + Send + Sync + 'static,
    {
        let values = grid.times().iter().map(|&t| f(t)).collect::<Result<Vec<_>>>()?;
        let f = Arc::new(f);
        let g2 = grid.clone();
        let dense: DenseFn = Arc::new(move |s| f(g2.time_at(s)));
        Ok(GroupCurve::from_parts(algebra, grid, values, dense))
    }

    /// The constant curve `t -> g`.
    pub fn constant(grid: CurveGrid, g: &GroupElement) -> Self {
        let m = g.matrix().clone();
        let values = vec![m.clone(); grid.len()];
        let dense: DenseFn = Arc::new(move |_| Ok(m.clone()));
        let n = g.algebra().n();
        let mut curve = GroupCurve::from_parts(g.algebra(), grid, values, dense);
        curve.generator = Some(Arc::new(move |_| Ok(CMatrix::zeros(n, n))));
        curve
    }

    /// Attaches an exact logarithmic derivative `t -> σ'(t) σ(t)⁻¹`.
    pub fn with_generator<F>(mut self, g: F) -> Self
    where
        F: Fn(Complex64) -> Result<CMatrix> + Send + Sync + 'static,
    {
        self.generator = Some(Arc::new(g));
        self
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn grid(&self) -> &CurveGrid {
        &self.grid
    }

    pub fn times(&self) -> &[Complex64] {
        self.grid.times()
    }

    pub fn values(&self) -> &[CMatrix] {
        &self.values
    }

    pub fn first(&self) -> &CMatrix {
        &self.values[0]
    }

    pub fn last(&self) -> &CMatrix {
        self.values.last().unwrap()
    }

    pub fn has_closed_generator(&self) -> bool {
        self.generator.is_some()
    }

    /// Dense output at arclength position `s`.
    pub fn value_at_arc(&self, s: f64) -> Result<CMatrix> {
        (self.dense)(s)
    }

    /// Dense output at a time `t` on the curve's path.
    pub fn value_at(&self, t: Complex64) -> Result<CMatrix> {
        let s = self.grid.arc_of(t)?;
        self.value_at_arc(s)
    }

    pub fn element_at(&self, t: Complex64) -> Result<GroupElement> {
        Ok(GroupElement::trusted(&self.algebra, self.value_at(t)?))
    }

    /// Largest group-constraint residual over the nodes.
    pub fn max_constraint_residual(&self) -> f64 {
        let c = self.algebra.constraint();
        self.values.iter().map(|m| c.residual(m)).fold(0.0, f64::max)
    }

    fn map_dense(&self, f: impl Fn(CMatrix) -> Result<CMatrix> + Send + Sync + 'static) -> Result<GroupCurve> {
        let f = Arc::new(f);
        let values = self.values.iter().map(|m| f(m.clone())).collect::<Result<Vec<_>>>()?;
        let inner = self.dense.clone();
        let f2 = f.clone();
        let dense: DenseFn = Arc::new(move |s| f2(inner(s)?));
        Ok(GroupCurve::from_parts(&self.algebra, self.grid.clone(), values, dense))
    }

    /// Pointwise `σ(t) τ`; still a solution of every system `σ` solves.
    pub fn right_translate(&self, tau: &GroupElement) -> GroupCurve {
        let m = tau.matrix().clone();
        let mut out = self.map_dense(move |x| Ok(x * &m)).expect("right translation is total");
        out.generator = self.generator.clone();
        out
    }

    /// Pointwise `τ σ(t)`.
    pub fn left_translate(&self, tau: &GroupElement) -> GroupCurve {
        let m = tau.matrix().clone();
        self.map_dense(move |x| Ok(&m * x)).expect("left translation is total")
    }

    /// Pointwise inverse `σ(t)⁻¹`.
    /// A closed-form generator carries over as `−σ⁻¹ (l∂σ) σ`.
    pub fn inverse(&self) -> GroupCurve {
        let mut out = self
            .map_dense(|x| inverse(&x).ok_or(Error::NotInGroup { residual: f64::INFINITY }))
            .expect("group curves are invertible");
        if let Some(g) = self.generator.clone() {
            let curve = self.clone();
            out.generator = Some(Arc::new(move |t| {
                let s = curve.value_at(t)?;
                let inv = inverse(&s).ok_or(Error::SectionSingular { t })?;
                Ok(-(&inv * g(t)? * s))
            }));
        }
        out
    }

    /// Pointwise product `σ(t) τ(t)`; both curves must share the path.
    pub fn product(&self, other: &GroupCurve) -> Result<GroupCurve> {
        if self.grid.path() != other.grid.path() {
            return Err(Error::DimensionMismatch("curves live on different paths".into()));
        }
        let (a, b) = (self.dense.clone(), other.dense.clone());
        let grid = if self.grid.spacing() <= other.grid.spacing() { self.grid.clone() } else { other.grid.clone() };
        let values = grid.arcs().iter().map(|&s| Ok(a(s)? * b(s)?)).collect::<Result<Vec<_>>>()?;
        let dense: DenseFn = Arc::new(move |s| Ok(a(s)? * b(s)?));
        Ok(GroupCurve::from_parts(&self.algebra, grid, values, dense))
    }

    /// `σ'(t) σ(t)⁻¹` as a matrix; finite differences on the dense output
    /// unless a closed-form generator is attached.
    pub fn log_derivative_matrix(&self, t: Complex64) -> Result<CMatrix> {
        let s = self.grid.arc_of(t)?;
        self.log_derivative_matrix_at_arc(s)
    }

    pub(crate) fn log_derivative_matrix_at_arc(&self, s: f64) -> Result<CMatrix> {
        if let Some(g) = &self.generator {
            return g(self.grid.time_at(s));
        }
        let value = self.value_at_arc(s)?;
        let dense = self.dense.clone();
        let d = self.grid.derivative(move |x| dense(x), s, self.grid.spacing())?;
        let inv = inverse(&value).ok_or(Error::NotInGroup { residual: f64::INFINITY })?;
        Ok(d * inv)
    }

    /// Logarithmic derivative as an algebra element.
    pub fn logarithmic_derivative(&self, t: Complex64) -> Result<AlgebraElement> {
        AlgebraElement::from_matrix(&self.algebra, self.log_derivative_matrix(t)?)
    }

    /// CSV with header `t_re,t_im,m00_re,m00_im,...` (row-major entries),
    /// 17 significant digits, `\n` line endings.
    pub fn to_csv(&self) -> String {
        let n = self.algebra.n();
        let mut out = String::from("t_re,t_im");
        for i in 0..n {
            for j in 0..n {
                write!(out, ",m{i}{j}_re,m{i}{j}_im").unwrap();
            }
        }
        out.push('\n');
        for (t, m) in self.grid.times().iter().zip(self.values.iter()) {
            write!(out, "{:.16e},{:.16e}", t.re, t.im).unwrap();
            for i in 0..n {
                for j in 0..n {
                    write!(out, ",{:.16e},{:.16e}", m[(i, j)].re, m[(i, j)].im).unwrap();
                }
            }
            out.push('\n');
        }
        out
    }

    /// Largest relative distance between this curve and `other`, compared
    /// at this curve's nodes through `other`'s dense output.
    pub fn distance_to(&self, other: &GroupCurve) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for (t, m) in self.grid.times().iter().zip(self.values.iter()) {
            let o = other.value_at(*t)?;
            worst = worst.max(frobenius(&(m - &o)) / frobenius(m).max(1.0));
        }
        Ok(worst)
    }
}
