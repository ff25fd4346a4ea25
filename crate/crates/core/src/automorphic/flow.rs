// Copyright 2026 The lievessiot Authors
// SPDX-License-Identifier: Apache-2.0

use std::cell::Cell;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::curve::{DenseFn, GroupCurve};
use super::grid::CurveGrid;
use super::Generator;
use crate::error::{Error, Result};
use crate::lie::GroupElement;
use crate::linalg::{commutator, expm, frobenius, is_finite, CMatrix};
use crate::timefunc::{TimePath, POLE_CLEARANCE};

/// Agreement required between the runs at `h` and `h/2`.
pub const DEFAULT_REFINE_TOL: f64 = 1e-6;
/// Largest admissible group-constraint residual on a flow.
const CONSTRAINT_TOL: f64 = 1e-6;

thread_local! {
    static GENERIC_STEPS: Cell<u64> = const { Cell::new(0) };
}

/// Number of generic integrator steps taken on this thread since the last
/// reset. Quadrature-based integration never advances it.
pub fn generic_step_count() -> u64 {
    GENERIC_STEPS.with(Cell::get)
}

pub fn reset_generic_step_count() {
    GENERIC_STEPS.with(|c| c.set(0));
}

/// One-step methods for `σ' = a(t) σ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Integrator {
    /// `σ_{k+1} = exp(h a(t_k + h/2)) σ_k`, order 2.
    #[default]
    ExpMid,
    /// Runge–Kutta–Munthe-Kaas, order 4.
    Rkmk4,
}

impl Integrator {
    pub fn order(self) -> u32 {
        match self {
            Integrator::ExpMid => 2,
            Integrator::Rkmk4 => 4,
        }
    }
}

impl fmt::Display for Integrator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Integrator::ExpMid => "expmid",
            Integrator::Rkmk4 => "rkmk4",
        })
    }
}

impl FromStr for Integrator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "expmid" => Ok(Integrator::ExpMid),
            "rkmk4" => Ok(Integrator::Rkmk4),
            other => Err(Error::UnknownName(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowOptions {
    /// Largest grid spacing.
    pub step: f64,
    pub integrator: Integrator,
    /// Halve the step until consecutive runs agree to this relative
    /// tolerance; `None` runs once at `step`.
    pub refine: Option<f64>,
    pub max_refinements: usize,
}

impl Default for FlowOptions {
    fn default() -> Self {
        FlowOptions { step: 1e-2, integrator: Integrator::ExpMid, refine: Some(DEFAULT_REFINE_TOL), max_refinements: 10 }
    }
}

impl FlowOptions {
    pub fn with_step(step: f64) -> Self {
        FlowOptions { step, ..FlowOptions::default() }
    }
}

// dexp⁻¹_u(v) truncated after the terms needed for order 4.
fn dexpinv(u: &CMatrix, v: &CMatrix) -> CMatrix {
    let uv = commutator(u, v);
    let uuv = commutator(u, &uv);
    v - uv * Complex64::new(0.5, 0.0) + uuv * Complex64::new(1.0 / 12.0, 0.0)
}

/// Propagator of one step of length `h` (complex) from `t`.
pub fn step_map<G: Generator + ?Sized>(system: &G, t: Complex64, h: Complex64, method: Integrator) -> Result<CMatrix> {
    GENERIC_STEPS.with(|c| c.set(c.get() + 1));
    let half = Complex64::new(0.5, 0.0);
    let omega = match method {
        Integrator::ExpMid => system.matrix_at(t + h * half)? * h,
        Integrator::Rkmk4 => {
            let am = system.matrix_at(t + h * half)?;
            let k1 = system.matrix_at(t)? * h;
            let k2 = dexpinv(&(&k1 * half), &am) * h;
            let k3 = dexpinv(&(&k2 * half), &am) * h;
            let k4 = dexpinv(&k3, &system.matrix_at(t + h)?) * h;
            (k1 + (k2 + k3) * Complex64::new(2.0, 0.0) + k4) / Complex64::new(6.0, 0.0)
        }
    };
    Ok(expm(&omega))
}

fn flow_on_grid<G>(system: Arc<G>, grid: CurveGrid, sigma0: &GroupElement, method: Integrator) -> Result<GroupCurve>
where
    G: Generator + 'static,
{
    let algebra = sigma0.algebra().clone();
    let times = grid.times().to_vec();
    let mut values = Vec::with_capacity(times.len());
    values.push(sigma0.matrix().clone());
    for k in 0..times.len() - 1 {
        let p = step_map(system.as_ref(), times[k], times[k + 1] - times[k], method)?;
        let next = p * &values[k];
        let residual = algebra.constraint().residual(&next);
        if !is_finite(&next) || residual > CONSTRAINT_TOL {
            return Err(Error::StepTooLarge { residual: if residual.is_finite() { residual } else { f64::INFINITY } });
        }
        values.push(next);
    }
    let nodes = Arc::new(values.clone());
    let g2 = grid.clone();
    let dense: DenseFn = Arc::new(move |s| {
        let k = g2.interval(s);
        let theta = g2.time_at(s) - g2.times()[k];
        if theta.norm() == 0.0 {
            return Ok(nodes[k].clone());
        }
        Ok(step_map(system.as_ref(), g2.times()[k], theta, method)? * &nodes[k])
    });
    Ok(GroupCurve::from_parts(&algebra, grid, values, dense))
}

fn relative_gap(coarse: &GroupCurve, fine: &GroupCurve) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (k, m) in coarse.values().iter().enumerate() {
        let o = fine.value_at_arc(coarse.grid().arcs()[k])?;
        worst = worst.max(frobenius(&(m - o)) / frobenius(m).max(1.0));
    }
    Ok(worst)
}

/// Solves `σ' = a(t) σ`, `σ(start) = σ0`, along `path` with default
/// options at the given step.
pub fn flow<G>(system: &G, path: &TimePath, sigma0: &GroupElement, step: f64) -> Result<GroupCurve>
where
    G: Generator + Clone + 'static,
{
    flow_with(system, path, sigma0, &FlowOptions::with_step(step))
}

/// Solves `σ' = a(t) σ` along `path`. With refinement enabled the step is
/// halved until the runs at `h` and `h/2` agree at the coarse nodes, and the
/// finer run is returned.
pub fn flow_with<G>(system: &G, path: &TimePath, sigma0: &GroupElement, opts: &FlowOptions) -> Result<GroupCurve>
where
    G: Generator + Clone + 'static,
{
    path.check_clearance(&system.pole_locations(), POLE_CLEARANCE)?;
    let residual = sigma0.constraint_residual();
    if residual > CONSTRAINT_TOL {
        return Err(Error::NotInGroup { residual });
    }
    let system = Arc::new(system.clone());
    let grid = CurveGrid::new(path, opts.step)?;
    let mut current = flow_on_grid(system.clone(), grid, sigma0, opts.integrator)?;
    let Some(tol) = opts.refine else {
        return Ok(current);
    };
    for _ in 0..opts.max_refinements {
        let counts: Vec<usize> = current.grid().counts().iter().map(|c| c * 2).collect();
        let finer = flow_on_grid(system.clone(), CurveGrid::with_counts(path, &counts), sigma0, opts.integrator)?;
        let gap = relative_gap(&current, &finer)?;
        current = finer;
        if gap <= tol {
            return Ok(current);
        }
    }
    Err(Error::NoConvergence { levels: opts.max_refinements })
}
