// Copyright 2026 The lievessiot Authors
// SPDX-License-Identifier: Apache-2.0

//! Transversal symmetries: the adjoint equation `V' = [a(t), V]`,
//! polynomial right-invariant symmetries, the commutation of flows with
//! right translations, centralizers and the stabilizer/centralizer
//! diagnostic.

use std::fmt::Write as _;
use std::sync::Arc;

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::automorphic::{flow_with, AutomorphicSystem, CurveGrid, FlowOptions};
use crate::error::{Error, Result};
use crate::exact::{self, Exact};
use crate::homogeneous::{act, stabilizer_intersection, HomogeneousSpace, SpacePoint, StabilizerAlgebra, RANK_CUTOFF};
use crate::lie::{adjoint, Algebra, AlgebraElement, GroupElement};
use crate::linalg::{distance_to_span, frobenius, CMatrix, CVector};
use crate::timefunc::{Poly, RationalFunction, TimePath};

/// Largest admissible distance between the integrated adjoint curve and
/// `Adj_σ(V0)`.
pub const ADJOINT_CROSS_CHECK_TOL: f64 = 1e-5;
/// Largest distance of a stabilizer basis vector from the centralizer.
pub const CONTAINMENT_TOL: f64 = 1e-7;
/// Largest admissible gap between a transported and a recomputed stabilizer.
pub const TRANSPORT_TOL: f64 = 1e-6;
/// Largest admissible bracket-closure residual of a centralizer.
pub const CLOSURE_TOL: f64 = 1e-8;

type DenseCoords = Arc<dyn Fn(f64) -> Result<CVector> + Send + Sync>;

/// A curve `V(t)` in the Lie algebra: coordinates at the nodes of a grid
/// plus dense output between them.
#[derive(Clone)]
pub struct AlgebraCurve {
    algebra: Algebra,
    grid: CurveGrid,
    values: Vec<CVector>,
    dense: DenseCoords,
}

impl std::fmt::Debug for AlgebraCurve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AlgebraCurve")
            .field("algebra", &self.algebra.name())
            .field("nodes", &self.values.len())
            .finish()
    }
}

impl AlgebraCurve {
    /// Samples `f` at the grid nodes and keeps it as dense output.
    pub fn from_fn<F>(algebra: &Algebra, grid: CurveGrid, f: F) -> Result<Self>
    where
        F: Fn(Complex64) -> Result<CVector> + Send + Sync + 'static,
    {
        let values = grid.times().iter().map(|&t| f(t)).collect::<Result<Vec<_>>>()?;
        let g = grid.clone();
        let dense: DenseCoords = Arc::new(move |s| f(g.time_at(s)));
        Ok(AlgebraCurve { algebra: algebra.clone(), grid, values, dense })
    }

    /// Node values with `dV/dt` at each node; cubic Hermite in between.
    fn hermite(algebra: &Algebra, grid: CurveGrid, values: Vec<CVector>, derivs: Vec<CVector>) -> Self {
        let g = grid.clone();
        let (v, d) = (Arc::new(values.clone()), Arc::new(derivs));
        let dense: DenseCoords = Arc::new(move |s| {
            let k = g.interval(s);
            let (s0, s1) = (g.arcs()[k], g.arcs()[k + 1]);
            let h = g.times()[k + 1] - g.times()[k];
            let u = if s1 > s0 { (s - s0) / (s1 - s0) } else { 0.0 };
            let (u2, u3) = (u * u, u * u * u);
            let h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
            let h10 = u3 - 2.0 * u2 + u;
            let h01 = -2.0 * u3 + 3.0 * u2;
            let h11 = u3 - u2;
            let r = |x: f64| Complex64::new(x, 0.0);
            Ok(&v[k] * r(h00) + &d[k] * (h * h10) + &v[k + 1] * r(h01) + &d[k + 1] * (h * h11))
        });
        AlgebraCurve { algebra: algebra.clone(), grid, values, dense }
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

    /// Coordinates at the nodes.
    pub fn values(&self) -> &[CVector] {
        &self.values
    }

    pub fn value_at(&self, t: Complex64) -> Result<CVector> {
        (self.dense)(self.grid.arc_of(t)?)
    }

    pub fn element_at(&self, t: Complex64) -> Result<AlgebraElement> {
        Ok(AlgebraElement::from_coords(&self.algebra, self.value_at(t)?))
    }

    /// Pointwise bracket `[V(t), W(t)]` on the grid of `self`.
    pub fn bracket(&self, other: &AlgebraCurve) -> Result<AlgebraCurve> {
        if self.grid.path() != other.grid.path() {
            return Err(Error::DimensionMismatch("curves live on different paths".into()));
        }
        let alg = self.algebra.clone();
        let br = move |x: &CVector, y: &CVector| -> Result<CVector> {
            let m = crate::linalg::commutator(&alg.matrix_of(x.as_slice()), &alg.matrix_of(y.as_slice()));
            alg.project(&m)
        };
        let values = self
            .grid
            .arcs()
            .iter()
            .zip(&self.values)
            .map(|(&s, x)| br(x, &(other.dense)(s)?))
            .collect::<Result<Vec<_>>>()?;
        let (a, b) = (self.dense.clone(), other.dense.clone());
        let dense: DenseCoords = Arc::new(move |s| br(&a(s)?, &b(s)?));
        Ok(AlgebraCurve { algebra: self.algebra.clone(), grid: self.grid.clone(), values, dense })
    }

    /// Largest coordinate distance to `other` at the nodes of `self`.
    pub fn distance_to(&self, other: &AlgebraCurve) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for (&s, v) in self.grid.arcs().iter().zip(&self.values) {
            worst = worst.max((v - (other.dense)(s)?).norm());
        }
        Ok(worst)
    }

    /// CSV with header `t_re,t_im,g0_re,g0_im,...`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t_re,t_im");
        for k in 0..self.algebra.dim() {
            write!(out, ",g{k}_re,g{k}_im").unwrap();
        }
        out.push('\n');
        for (t, v) in self.grid.times().iter().zip(&self.values) {
            write!(out, "{:.16e},{:.16e}", t.re, t.im).unwrap();
            for z in v.iter() {
                write!(out, ",{:.16e},{:.16e}", z.re, z.im).unwrap();
            }
            out.push('\n');
        }
        out
    }
}

/// The adjoint equation `g' = C(t) g` of an automorphic system on algebra
/// coordinates, `C(t)_kj = Σ_i f_i(t) c_ij^k`.
#[derive(Debug, Clone)]
pub struct AdjointSystem {
    system: AutomorphicSystem,
    exact: Vec<Vec<RationalFunction>>,
}

/// The adjoint equation of `system`, with `C(t)` kept as exact rational
/// entries.
pub fn adjoint_system(system: &AutomorphicSystem) -> AdjointSystem {
    let alg = system.algebra();
    let s = alg.dim();
    let f = system.coeffs().entries();
    let mut exact = vec![vec![RationalFunction::zero(); s]; s];
    for (k, row) in exact.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            for (i, fi) in f.iter().enumerate() {
                let c = alg.exact_structure(i, j, k);
                if !exact::is_zero(c) {
                    *entry = &*entry + &fi.scale(c);
                }
            }
        }
    }
    AdjointSystem { system: system.clone(), exact }
}

impl AdjointSystem {
    pub fn system(&self) -> &AutomorphicSystem {
        &self.system
    }

    pub fn algebra(&self) -> &Algebra {
        self.system.algebra()
    }

    /// Exact entries `C_kj(t)`.
    pub fn exact_matrix(&self) -> &[Vec<RationalFunction>] {
        &self.exact
    }

    /// `C(t)`; [`Error::PoleError`] at a pole.
    pub fn matrix_at(&self, t: Complex64) -> Result<CMatrix> {
        let coeffs = self.system.coeffs().eval(t)?;
        Ok(self.algebra().ad_matrix(&coeffs))
    }

    /// `C(t) v` on coordinates.
    pub fn rhs(&self, t: Complex64, v: &CVector) -> Result<CVector> {
        Ok(self.matrix_at(t)? * v)
    }
}

fn rk4_linear(adj: &AdjointSystem, times: &[Complex64], v0: &CVector) -> Result<(Vec<CVector>, Vec<CVector>)> {
    let mut values = vec![v0.clone()];
    let mut derivs = vec![adj.rhs(times[0], v0)?];
    for w in times.windows(2) {
        let (t, h) = (w[0], w[1] - w[0]);
        let v = values.last().unwrap();
        let half = h * 0.5;
        let k1 = derivs.last().unwrap().clone();
        let k2 = adj.rhs(t + half, &(v + &k1 * half))?;
        let k3 = adj.rhs(t + half, &(v + &k2 * half))?;
        let k4 = adj.rhs(t + h, &(v + &k3 * h))?;
        let next = v + (k1 + (k2 + k3) * Complex64::new(2.0, 0.0) + k4) * (h / 6.0);
        derivs.push(adj.rhs(w[1], &next)?);
        values.push(next);
    }
    Ok((values, derivs))
}

/// Integrates `V' = [a(t), V]` from `V0` at the start of `path` by the
/// classical fourth-order Runge–Kutta scheme on the grid of the flow `σ`
/// with `σ(t0) = Id`, then checks `V(t) = Adj_σ(t)(V0)` at every node.
pub fn solve_adjoint(
    system: &AutomorphicSystem,
    v0: &AlgebraElement,
    path: &TimePath,
    opts: &FlowOptions,
) -> Result<AlgebraCurve> {
    let alg = system.algebra();
    if v0.algebra().basis() != alg.basis() {
        return Err(Error::DimensionMismatch("initial value lies in a different algebra".into()));
    }
    let sigma = flow_with(system, path, &GroupElement::identity(alg), opts)?;
    let adj = adjoint_system(system);
    let (values, derivs) = rk4_linear(&adj, sigma.times(), v0.coords())?;
    let scale = v0.norm().max(1.0);
    let mut residual: f64 = 0.0;
    for (m, v) in sigma.values().iter().zip(&values) {
        let moved = adjoint(&GroupElement::trusted(alg, m.clone()), v0)?;
        residual = residual.max((moved.coords() - v).norm() / scale);
    }
    if !(residual <= ADJOINT_CROSS_CHECK_TOL) {
        return Err(Error::CrossCheckFailure {
            what: "adjoint curve against Adj_σ(V0)".into(),
            residual,
            tolerance: ADJOINT_CROSS_CHECK_TOL,
        });
    }
    Ok(AlgebraCurve::hermite(alg, sigma.grid().clone(), values, derivs))
}

/// `sup ‖V'(t) − C(t) V(t)‖` over the nodes, with `V'` by fourth-order
/// finite differences of the dense output.
pub fn adjoint_residual(system: &AutomorphicSystem, curve: &AlgebraCurve) -> Result<f64> {
    let adj = adjoint_system(system);
    let grid = curve.grid();
    let as_matrix = |s: f64| -> Result<CMatrix> {
        let v = (curve.dense)(s)?;
        Ok(CMatrix::from_column_slice(v.len(), 1, v.as_slice()))
    };
    let mut worst: f64 = 0.0;
    for (&s, (&t, v)) in grid.arcs().iter().zip(grid.times().iter().zip(curve.values())) {
        let dv = grid.derivative(as_matrix, s, grid.spacing())?;
        let rhs = adj.rhs(t, v)?;
        worst = worst.max((dv.column(0) - rhs).norm());
    }
    Ok(worst)
}

/// A solution of the adjoint equation with polynomial coordinates.
#[derive(Debug, Clone)]
pub struct PolynomialSymmetry {
    algebra: Algebra,
    coords: Vec<Poly>,
}

impl PolynomialSymmetry {
    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    /// Coordinates `g_k(t)`.
    pub fn coords(&self) -> &[Poly] {
        &self.coords
    }

    pub fn eval(&self, t: Complex64) -> CVector {
        CVector::from_iterator(self.coords.len(), self.coords.iter().map(|p| crate::timefunc::horner(&p.to_c64(), t)))
    }

    pub fn element_at(&self, t: Complex64) -> AlgebraElement {
        AlgebraElement::from_coords(&self.algebra, self.eval(t))
    }

    /// Exact defect `g' − C(t) g`, one rational function per coordinate.
    pub fn exact_defect(&self, system: &AutomorphicSystem) -> Vec<RationalFunction> {
        let adj = adjoint_system(system);
        let g: Vec<RationalFunction> = self.coords.iter().map(|p| RationalFunction::from_poly(p.clone())).collect();
        adj.exact
            .iter()
            .zip(&g)
            .map(|(row, gk)| row.iter().zip(&g).fold(gk.derivative(), |acc, (c, gj)| &acc - &(c * gj)))
            .collect()
    }

    /// Samples the symmetry on `grid`.
    pub fn on_grid(&self, grid: CurveGrid) -> Result<AlgebraCurve> {
        let me = self.clone();
        AlgebraCurve::from_fn(&self.algebra, grid, move |t| Ok(me.eval(t)))
    }

    /// Coordinates as polynomial strings.
    pub fn to_strings(&self) -> Vec<String> {
        self.coords.iter().map(|p| p.to_string()).collect()
    }
}

/// Polynomial solutions of the adjoint equation of degree at most `degree`.
#[derive(Debug, Clone)]
pub struct PolynomialAnsatz {
    pub degree: usize,
    pub basis: Vec<PolynomialSymmetry>,
}

/// Solves `g_k' = Σ_ij f_i c_ij^k g_j` exactly for polynomial `g_k` of
/// degree at most `degree`: clears the common denominator `D` of the
/// `f_i`, matches coefficients of `D g' − (D C) g = 0` and returns a basis
/// of the rational null space.
pub fn right_symmetry_ansatz(system: &AutomorphicSystem, degree: usize) -> PolynomialAnsatz {
    let alg = system.algebra();
    let s = alg.dim();
    let adj = adjoint_system(system);
    let common = system.coeffs().entries().iter().fold(Poly::one(), |acc, f| acc.lcm(f.denominator()));
    let dpoly = RationalFunction::from_poly(common.clone());
    let cleared: Vec<Vec<Poly>> = adj
        .exact
        .iter()
        .map(|row| {
            row.iter()
                .map(|c| {
                    let p = &dpoly * c;
                    debug_assert!(p.is_polynomial());
                    p.numerator().scale(&(exact::exact_int(1) / p.denominator().coeff(0)))
                })
                .collect()
        })
        .collect();
    let width = degree + 1;
    let deg_d = common.degree().unwrap_or(0);
    let deg_p = cleared.iter().flatten().filter_map(Poly::degree).max().unwrap_or(0);
    let top = (deg_d + degree).max(deg_p + degree);
    let zero = exact::exact_int(0);
    let mut rows: Vec<Vec<Exact>> = Vec::new();
    for k in 0..s {
        for e in 0..=top {
            let mut row = vec![zero.clone(); s * width];
            for m in 1..width {
                // D(t) · m u_{k,m} t^{m-1} contributes to t^e through D_{e-m+1}.
                if e + 1 >= m {
                    let dc = common.coeff(e + 1 - m);
                    if !exact::is_zero(&dc) {
                        row[k * width + m] = &row[k * width + m] + &(dc * exact::exact_int(m as i64));
                    }
                }
            }
            for (j, p) in cleared[k].iter().enumerate() {
                for m in 0..width.min(e + 1) {
                    let pc = p.coeff(e - m);
                    if !exact::is_zero(&pc) {
                        row[j * width + m] = &row[j * width + m] - &pc;
                    }
                }
            }
            if row.iter().any(|x| !exact::is_zero(x)) {
                rows.push(row);
            }
        }
    }
    let null = exact::nullspace(rows, s * width);
    let basis = null
        .into_iter()
        .map(|v| PolynomialSymmetry {
            algebra: alg.clone(),
            coords: (0..s).map(|k| Poly::new(v[k * width..(k + 1) * width].to_vec())).collect(),
        })
        .collect::<Vec<_>>();
    for sym in &basis {
        assert!(sym.exact_defect(system).iter().all(RationalFunction::is_zero), "polynomial symmetry has a nonzero defect");
    }
    PolynomialAnsatz { degree, basis }
}

/// `sup ‖Φ(τ) − Φ(Id)·τ‖_F` over the grid, with `Φ(σ0)` the flow of the
/// system from `σ0` at the start of `path`: flows commute with right
/// translations.
pub fn left_invariant_symmetry_check(
    system: &AutomorphicSystem,
    tau: &GroupElement,
    path: &TimePath,
    opts: &FlowOptions,
) -> Result<f64> {
    let alg = system.algebra();
    let from_tau = flow_with(system, path, tau, opts)?;
    let from_id = flow_with(system, path, &GroupElement::identity(alg), opts)?;
    let mut worst: f64 = 0.0;
    for (&t, m) in from_tau.times().iter().zip(from_tau.values()) {
        worst = worst.max(frobenius(&(m - from_id.value_at(t)? * tau.matrix())));
    }
    Ok(worst)
}

/// `sup ‖Φ(τ) − τ·Φ(Id)‖_F`: left translations do not commute with the flow
/// unless `τ` commutes with every `a(t)`.
pub fn left_translation_defect(
    system: &AutomorphicSystem,
    tau: &GroupElement,
    path: &TimePath,
    opts: &FlowOptions,
) -> Result<f64> {
    let alg = system.algebra();
    let from_tau = flow_with(system, path, tau, opts)?;
    let from_id = flow_with(system, path, &GroupElement::identity(alg), opts)?;
    let mut worst: f64 = 0.0;
    for (&t, m) in from_tau.times().iter().zip(from_tau.values()) {
        worst = worst.max(frobenius(&(m - tau.matrix() * from_id.value_at(t)?)));
    }
    Ok(worst)
}

/// Elements commuting with every entry of `data`: the kernel of the stacked
/// maps `X ↦ [X, V_k]`, each block scaled to unit norm.
pub fn centralizer(algebra: &Algebra, data: &[AlgebraElement]) -> Result<StabilizerAlgebra> {
    let blocks: Vec<CMatrix> = data
        .iter()
        .filter(|v| v.norm() > 0.0)
        .map(|v| {
            if v.algebra().basis() != algebra.basis() {
                return Err(Error::DimensionMismatch("centralizer data over different algebras".into()));
            }
            let m = algebra.ad_matrix(v.coords().as_slice());
            let norm = m.norm();
            Ok(if norm > 0.0 { m / Complex64::new(norm, 0.0) } else { m })
        })
        .collect::<Result<_>>()?;
    if blocks.is_empty() {
        return Ok(StabilizerAlgebra::whole(algebra));
    }
    let s = algebra.dim();
    let mut stacked = CMatrix::zeros(blocks.len() * s, s);
    for (b, m) in blocks.iter().enumerate() {
        stacked.view_mut((b * s, 0), (s, s)).copy_from(m);
    }
    let (coords, sv) = crate::linalg::kernel(&stacked, RANK_CUTOFF);
    let out = StabilizerAlgebra::from_kernel(algebra, coords, sv);
    let residual = out.closure_residual();
    if !(residual <= CLOSURE_TOL) {
        return Err(Error::CrossCheckFailure { what: "centralizer bracket closure".into(), residual, tolerance: CLOSURE_TOL });
    }
    Ok(out)
}

/// Gap between `Adj_σ(t1)(g0)` and the stabilizer of the transported data
/// at `t1`, where `g0` stabilizes `data` at the start `t0` of `path`, `σ`
/// is the flow with `σ(t0) = Id` and each point moves to `σ(t1)·x`.
pub fn stabilizer_transport_gap(
    system: &AutomorphicSystem,
    data: &[(HomogeneousSpace, SpacePoint)],
    path: &TimePath,
    opts: &FlowOptions,
) -> Result<f64> {
    let alg = system.algebra();
    let g0 = stabilizer_intersection(alg, data)?;
    let sigma = flow_with(system, path, &GroupElement::identity(alg), opts)?;
    let s1 = GroupElement::trusted(alg, sigma.last().clone());
    let moved = data
        .iter()
        .map(|(space, x)| Ok((space.clone(), act(space, &s1, x)?)))
        .collect::<Result<Vec<_>>>()?;
    let g1 = stabilizer_intersection(alg, &moved)?;
    Ok(g0.transport(s1.matrix())?.gap(&g1))
}

/// Outcome of [`galois_centralizer_diagnostic`].
#[derive(Debug, Clone)]
pub struct GaloisReport {
    pub t0: Complex64,
    pub t1: Complex64,
    /// Stabilizer of the declared invariant data at `t0`.
    pub stabilizer: StabilizerAlgebra,
    pub ansatz: PolynomialAnsatz,
    /// Centralizer of the polynomial symmetries at `t0`.
    pub centralizer: StabilizerAlgebra,
    /// Largest distance of a stabilizer basis vector from the centralizer.
    pub containment_distance: f64,
    pub contained: bool,
    pub transport_gap: f64,
}

impl GaloisReport {
    pub fn to_json(&self) -> Value {
        let pairs = |v: &CVector| Value::Array(v.iter().map(|z| json!([z.re, z.im])).collect());
        let sub = |a: &StabilizerAlgebra| {
            json!({
                "dim": a.dim(),
                "basis": a.coords().iter().map(pairs).collect::<Vec<_>>(),
                "singular_values": a.singular_values(),
                "singular_gap": finite_or_null(a.singular_gap()),
            })
        };
        json!({
            "t0": [self.t0.re, self.t0.im],
            "t1": [self.t1.re, self.t1.im],
            "stabilizer": sub(&self.stabilizer),
            "ansatz": {
                "degree": self.ansatz.degree,
                "basis": self.ansatz.basis.iter().map(PolynomialSymmetry::to_strings).collect::<Vec<_>>(),
            },
            "centralizer": sub(&self.centralizer),
            "containment_distance": self.containment_distance,
            "contained": self.contained,
            "transport_gap": self.transport_gap,
        })
    }
}

fn finite_or_null(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

/// Checks that the stabilizer `g0` of the declared invariant data at `t0`
/// lies in the centralizer of the polynomial symmetries of degree at most
/// `degree` evaluated at `t0`, and that `g0` is carried by the flow onto
/// the stabilizer of the transported data at the end of `path`. Without a
/// path the transport is the identity and the gap is zero.
pub fn galois_centralizer_diagnostic(
    system: &AutomorphicSystem,
    data: &[(HomogeneousSpace, SpacePoint)],
    degree: usize,
    t0: Complex64,
    path: Option<&TimePath>,
    opts: &FlowOptions,
) -> Result<GaloisReport> {
    let alg = system.algebra();
    let stabilizer = stabilizer_intersection(alg, data)?;
    let ansatz = right_symmetry_ansatz(system, degree);
    let at_t0: Vec<AlgebraElement> = ansatz.basis.iter().map(|r| r.element_at(t0)).collect();
    let centralizer = centralizer(alg, &at_t0)?;
    let containment_distance =
        stabilizer.coords().iter().map(|v| distance_to_span(v, centralizer.coords())).fold(0.0, f64::max);
    if !(containment_distance <= CONTAINMENT_TOL) {
        return Err(Error::ContainmentViolation { distance: containment_distance });
    }
    let (t1, transport_gap) = match path {
        None => (t0, 0.0),
        Some(p) => {
            if (p.start() - t0).norm() > 0.0 {
                return Err(Error::DimensionMismatch("the transport path must start at t0".into()));
            }
            (p.end(), stabilizer_transport_gap(system, data, p, opts)?)
        }
    };
    if !(transport_gap <= TRANSPORT_TOL) {
        return Err(Error::CrossCheckFailure {
            what: "stabilizer transport along the flow".into(),
            residual: transport_gap,
            tolerance: TRANSPORT_TOL,
        });
    }
    Ok(GaloisReport {
        t0,
        t1,
        stabilizer,
        ansatz,
        centralizer,
        containment_distance,
        contained: true,
        transport_gap,
    })
}
