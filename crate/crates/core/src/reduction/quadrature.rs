// Copyright 2026 The lievessiot Authors
// SPDX-License-Identifier: Apache-2.0

use std::sync::{Arc, OnceLock};

use num_complex::Complex64;

use crate::automorphic::{AutomorphicSystem, CurveGrid, Generator, GroupCurve};
use crate::error::{Error, Result};
use crate::lie::Algebra;
use crate::linalg::{commutator, complement, expm, expm_frechet, span, CMatrix, CVector};
use crate::timefunc::{GaussRule, TimePath, POLE_CLEARANCE};

/// Grid spacing used by the quadrature integrators unless overridden.
pub const DEFAULT_QUADRATURE_STEP: f64 = 0.05;
/// Relative cutoff deciding the dimension of bracket spans.
const SPAN_CUTOFF: f64 = 1e-10;

/// Derived series `g = g_0 ⊃ g_1 ⊃ … ⊃ g_m = 0`, each level an
/// orthonormal basis in algebra coordinates.
#[derive(Debug, Clone)]
pub struct SolvableChain {
    algebra: Algebra,
    levels: Vec<Vec<CVector>>,
}

impl SolvableChain {
    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn levels(&self) -> &[Vec<CVector>] {
        &self.levels
    }

    pub fn dims(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }

    /// Largest distance of `[X, Y]`, `X, Y ∈ g_k`, from `g_{k+1}`.
    pub fn inclusion_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for w in self.levels.windows(2) {
            for v in bracket_images(&self.algebra, &w[0]) {
                worst = worst.max(crate::linalg::distance_to_span(&v, &w[1]));
            }
        }
        worst
    }
}

fn bracket_images(algebra: &Algebra, basis: &[CVector]) -> Vec<CVector> {
    let mats: Vec<CMatrix> = basis.iter().map(|c| algebra.matrix_of(c.as_slice())).collect();
    let mut out = Vec::new();
    for i in 0..mats.len() {
        for j in i + 1..mats.len() {
            out.push(algebra.project_with_residual(&commutator(&mats[i], &mats[j])).0);
        }
    }
    out
}

/// The derived series of `algebra`; [`Error::NotSolvable`] if it stalls
/// above zero.
pub fn derived_chain(algebra: &Algebra) -> Result<SolvableChain> {
    let mut levels = vec![span(&unit_vectors(algebra.dim()), SPAN_CUTOFF)];
    loop {
        let current = levels.last().unwrap();
        if current.is_empty() {
            return Ok(SolvableChain { algebra: algebra.clone(), levels });
        }
        let next = span(&bracket_images(algebra, current), SPAN_CUTOFF);
        if next.len() == current.len() {
            return Err(Error::NotSolvable { dim: next.len() });
        }
        levels.push(next);
    }
}

fn unit_vectors(dim: usize) -> Vec<CVector> {
    (0..dim)
        .map(|k| {
            let mut v = CVector::zeros(dim);
            v[k] = Complex64::new(1.0, 0.0);
            v
        })
        .collect()
}

/// `(P_0(x), …, P_n(x))`.
fn legendre_all(n: usize, x: f64) -> Vec<f64> {
    let mut p = vec![1.0; n + 1];
    if n >= 1 {
        p[1] = x;
    }
    for k in 2..=n {
        p[k] = ((2 * k - 1) as f64 * x * p[k - 1] - (k - 1) as f64 * p[k - 2]) / k as f64;
    }
    p
}

/// Weights `S_j(u)` with `∫_0^u p = Σ_j S_j(u) p(u_j)` for polynomials of
/// degree below the rule order, nodes `u_j` of the rule mapped to `[0, 1]`.
fn partial_weights(rule: &GaussRule, u: f64) -> Vec<f64> {
    let n = rule.nodes.len();
    let x = 2.0 * u - 1.0;
    let p = legendre_all(n, x);
    // ∫_{-1}^x P_m = (P_{m+1} − P_{m−1}) / (2m+1),  ∫_{-1}^x P_0 = x + 1.
    let integrals: Vec<f64> =
        (0..n).map(|m| if m == 0 { x + 1.0 } else { (p[m + 1] - p[m - 1]) / (2 * m + 1) as f64 }).collect();
    (0..n)
        .map(|j| {
            let pj = legendre_all(n, rule.nodes[j]);
            // Factor 1/2 maps dx to du.
            0.5 * rule.weights[j] * (0..n).map(|m| (2 * m + 1) as f64 / 2.0 * pj[m] * integrals[m]).sum::<f64>()
        })
        .collect()
}

fn node_weights() -> &'static Vec<Vec<f64>> {
    static W: OnceLock<Vec<Vec<f64>>> = OnceLock::new();
    W.get_or_init(|| {
        let rule = GaussRule::default_rule();
        rule.nodes.iter().map(|&x| partial_weights(rule, 0.5 * (x + 1.0))).collect()
    })
}

#[derive(Debug, Clone)]
struct Panel {
    a: Complex64,
    b: Complex64,
    s0: f64,
    s1: f64,
}

impl Panel {
    fn point(&self, u: f64) -> Complex64 {
        self.a + (self.b - self.a) * u
    }
}

// Panels no longer than half their distance to the nearest pole, so the
// interpolating polynomial on each panel converges fast.
fn split(p: Panel, poles: &[Complex64], out: &mut Vec<Panel>) {
    let mid = (p.a + p.b) * 0.5;
    let d = poles.iter().map(|z| (z - mid).norm()).fold(f64::INFINITY, f64::min);
    if (p.b - p.a).norm() > 0.5 * d && (p.s1 - p.s0) > 1e-9 {
        let sm = 0.5 * (p.s0 + p.s1);
        split(Panel { a: p.a, b: mid, s0: p.s0, s1: sm }, poles, out);
        split(Panel { a: mid, b: p.b, s0: sm, s1: p.s1 }, poles, out);
    } else {
        out.push(p);
    }
}

fn build_panels(grid: &CurveGrid, poles: &[Complex64]) -> Vec<Panel> {
    let mut out = Vec::new();
    for k in 0..grid.len() - 1 {
        let p = Panel { a: grid.times()[k], b: grid.times()[k + 1], s0: grid.arcs()[k], s1: grid.arcs()[k + 1] };
        split(p, poles, &mut out);
    }
    out
}

/// One abelian quotient step: coordinates on a complement of `g_{k+1}`
/// in `g_k`.
#[derive(Debug, Clone)]
struct Stage {
    coords: Vec<CVector>,
    mats: Vec<CMatrix>,
}

impl Stage {
    fn phi(&self, algebra: &Algebra, b: &CMatrix) -> Vec<Complex64> {
        let c = algebra.project_with_residual(b).0;
        self.coords.iter().map(|v| v.dotc(&c)).collect()
    }

    fn combine(&self, w: &[Complex64], n: usize) -> CMatrix {
        let mut m = CMatrix::zeros(n, n);
        for (x, c) in self.mats.iter().zip(w) {
            m += x * *c;
        }
        m
    }
}

struct Quadrature {
    system: AutomorphicSystem,
    stages: Vec<Stage>,
    panels: Vec<Panel>,
    // [stage][panel] integral at the panel start
    start: Vec<Vec<Vec<Complex64>>>,
    // [stage][panel][node] projected generator values
    phi: Vec<Vec<Vec<Vec<Complex64>>>>,
}

fn add_scaled(acc: &mut [Complex64], v: &[Complex64], w: Complex64) {
    for (a, x) in acc.iter_mut().zip(v) {
        *a += x * w;
    }
}

impl Quadrature {
    fn build(system: &AutomorphicSystem, stages: Vec<Stage>, grid: &CurveGrid) -> Result<Self> {
        let algebra = system.algebra().clone();
        let n = algebra.n();
        let rule = GaussRule::default_rule();
        let nw = node_weights();
        let panels = build_panels(grid, &system.pole_locations());
        let mut b: Vec<Vec<CMatrix>> = panels
            .iter()
            .map(|p| rule.nodes.iter().map(|&x| system.matrix_at(p.point(0.5 * (x + 1.0)))).collect())
            .collect::<Result<_>>()?;
        let mut start = Vec::new();
        let mut phi = Vec::new();
        for stage in &stages {
            let d = stage.coords.len();
            let ph: Vec<Vec<Vec<Complex64>>> =
                b.iter().map(|row| row.iter().map(|m| stage.phi(&algebra, m)).collect()).collect();
            let mut st = Vec::with_capacity(panels.len());
            let mut acc = vec![Complex64::new(0.0, 0.0); d];
            for (p, vals) in panels.iter().zip(&ph) {
                st.push(acc.clone());
                let half = (p.b - p.a) * 0.5;
                for (v, w) in vals.iter().zip(&rule.weights) {
                    add_scaled(&mut acc, v, half * *w);
                }
            }
            for (pi, p) in panels.iter().enumerate() {
                let len = p.b - p.a;
                for i in 0..rule.nodes.len() {
                    let mut f = st[pi].clone();
                    for (j, v) in ph[pi].iter().enumerate() {
                        add_scaled(&mut f, v, len * nw[i][j]);
                    }
                    let x = stage.combine(&f, n);
                    let dx = stage.combine(&ph[pi][i], n);
                    let (e, de) = expm_frechet(&x, &dx);
                    let einv = expm(&-&x);
                    let ld = de * &einv;
                    b[pi][i] = &einv * (&b[pi][i] - ld) * e;
                }
            }
            start.push(st);
            phi.push(ph);
        }
        Ok(Quadrature { system: system.clone(), stages, panels, start, phi })
    }

    fn locate(&self, s: f64) -> (usize, f64) {
        let k = self.panels.partition_point(|p| p.s1 < s).min(self.panels.len() - 1);
        let p = &self.panels[k];
        (k, ((s - p.s0) / (p.s1 - p.s0)).clamp(0.0, 1.0))
    }

    fn integrals_at(&self, s: f64) -> (Complex64, Vec<Vec<Complex64>>) {
        let (k, u) = self.locate(s);
        let p = &self.panels[k];
        let w = partial_weights(GaussRule::default_rule(), u);
        let len = p.b - p.a;
        let f = (0..self.stages.len())
            .map(|st| {
                let mut f = self.start[st][k].clone();
                for (j, v) in self.phi[st][k].iter().enumerate() {
                    add_scaled(&mut f, v, len * w[j]);
                }
                f
            })
            .collect();
        (p.point(u), f)
    }

    fn value(&self, s: f64) -> CMatrix {
        let n = self.system.algebra().n();
        let (_, f) = self.integrals_at(s);
        let mut out = CMatrix::identity(n, n);
        for (stage, fk) in self.stages.iter().zip(&f) {
            out *= expm(&stage.combine(fk, n));
        }
        out
    }

    /// `l∂` of the product of the lifted sections, from the exact
    /// derivative of each exponential factor.
    fn generator(&self, s: f64) -> Result<CMatrix> {
        let algebra = self.system.algebra();
        let n = algebra.n();
        let (t, f) = self.integrals_at(s);
        let mut b = self.system.matrix_at(t)?;
        let mut prefix = CMatrix::identity(n, n);
        let mut prefix_inv = CMatrix::identity(n, n);
        let mut total = CMatrix::zeros(n, n);
        for (stage, fk) in self.stages.iter().zip(&f) {
            let x = stage.combine(fk, n);
            let dx = stage.combine(&stage.phi(algebra, &b), n);
            let (e, de) = expm_frechet(&x, &dx);
            let einv = expm(&-&x);
            let ld = de * &einv;
            total += &prefix * &ld * &prefix_inv;
            b = &einv * (&b - ld) * &e;
            prefix *= &e;
            prefix_inv = &einv * prefix_inv;
        }
        Ok(total)
    }
}

fn integrate_stages(system: &AutomorphicSystem, stages: Vec<Stage>, path: &TimePath, step: f64) -> Result<GroupCurve> {
    path.check_clearance(&system.pole_locations(), POLE_CLEARANCE)?;
    let grid = CurveGrid::new(path, step)?;
    let q = Arc::new(Quadrature::build(system, stages, &grid)?);
    let values: Vec<CMatrix> = grid.arcs().iter().map(|&s| q.value(s)).collect();
    let (qv, qg) = (q.clone(), q.clone());
    let g2 = grid.clone();
    let curve = GroupCurve::from_parts(system.algebra(), grid, values, Arc::new(move |s| Ok(qv.value(s))));
    Ok(curve.with_generator(move |t| qg.generator(g2.arc_of(t)?)))
}

fn stage_from(algebra: &Algebra, coords: Vec<CVector>) -> Stage {
    let mats = coords.iter().map(|c| algebra.matrix_of(c.as_slice())).collect();
    Stage { coords, mats }
}

/// `σ(t) = exp(Σ_i (∫_{t0}^t f_i) A_i)` on an abelian algebra, `t0` the
/// path start.
pub fn abelian_integrate(system: &AutomorphicSystem, path: &TimePath) -> Result<GroupCurve> {
    abelian_integrate_with(system, path, DEFAULT_QUADRATURE_STEP)
}

pub fn abelian_integrate_with(system: &AutomorphicSystem, path: &TimePath, step: f64) -> Result<GroupCurve> {
    let algebra = system.algebra();
    if !algebra.is_abelian() {
        return Err(Error::NotAbelian { max: algebra.max_structure_constant() });
    }
    let stage = stage_from(algebra, unit_vectors(algebra.dim()));
    integrate_stages(system, vec![stage], path, step)
}

/// Solves `σ' = a σ`, `σ(t0) = Id`, on a solvable algebra by iterated
/// quadratures along the derived series: each level integrates the
/// abelian quotient, lifts it by the exponential and gauges the remainder
/// into the next level. No generic time stepping is involved.
pub fn solvable_integrate(system: &AutomorphicSystem, path: &TimePath) -> Result<GroupCurve> {
    solvable_integrate_with(system, path, DEFAULT_QUADRATURE_STEP)
}

pub fn solvable_integrate_with(system: &AutomorphicSystem, path: &TimePath, step: f64) -> Result<GroupCurve> {
    let algebra = system.algebra();
    if algebra.is_abelian() {
        return abelian_integrate_with(system, path, step);
    }
    let chain = derived_chain(algebra)?;
    let stages = chain
        .levels()
        .windows(2)
        .map(|w| stage_from(algebra, complement(&w[1], &w[0], SPAN_CUTOFF)))
        .collect();
    integrate_stages(system, stages, path, step)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_weights_integrate_polynomials() {
        let rule = GaussRule::default_rule();
        let us: Vec<f64> = rule.nodes.iter().map(|x| 0.5 * (x + 1.0)).collect();
        for u in [0.0, 0.3, 0.77, 1.0] {
            let w = partial_weights(rule, u);
            for deg in [0, 1, 5, 15] {
                let got: f64 = w.iter().zip(&us).map(|(w, x)| w * x.powi(deg)).sum();
                let expect = u.powi(deg + 1) / (deg + 1) as f64;
                assert!((got - expect).abs() < 1e-14, "u={u} deg={deg}");
            }
        }
    }

    #[test]
    fn panels_refine_near_poles() {
        let path = TimePath::real(0.0, 1.0).unwrap();
        let grid = CurveGrid::new(&path, 0.5).unwrap();
        let far = build_panels(&grid, &[Complex64::new(10.0, 0.0)]);
        assert_eq!(far.len(), 2);
        let near = build_panels(&grid, &[Complex64::new(0.5, 1e-3)]);
        assert!(near.len() > 10);
        for w in near.windows(2) {
            assert!((w[0].s1 - w[1].s0).abs() < 1e-15);
        }
    }
}
