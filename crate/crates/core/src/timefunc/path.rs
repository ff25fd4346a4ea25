// Copyright 2026 The lievessiot Authors
// SPDX-License-Identifier: Apache-2.0

//! Polyline contours in the complex time plane and adaptive
//! Gauss–Legendre quadrature along them.

use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_ORDER: usize = 16;
const MAX_LEVELS: usize = 20;
const QUAD_RTOL: f64 = 1e-10;

/// An oriented polyline `t_0 -> t_1 -> ... -> t_m` in the complex plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimePath {
    nodes: Vec<Complex64>,
    orders: Vec<usize>,
}

/// Position on a path: segment index and local parameter `u` in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathPoint {
    pub segment: usize,
    pub u: f64,
}

impl TimePath {
    pub fn new(nodes: Vec<Complex64>) -> Result<Self> {
        let orders = vec![DEFAULT_ORDER; nodes.len().saturating_sub(1)];
        TimePath::with_orders(nodes, orders)
    }

    pub fn with_orders(nodes: Vec<Complex64>, orders: Vec<usize>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::DimensionMismatch("a time path needs at least two nodes".into()));
        }
        if orders.len() != nodes.len() - 1 || orders.iter().any(|&o| o == 0) {
            return Err(Error::DimensionMismatch("one positive quadrature order per segment".into()));
        }
        if nodes.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::DimensionMismatch("consecutive path nodes must differ".into()));
        }
        if nodes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::DimensionMismatch("path nodes must be finite".into()));
        }
        Ok(TimePath { nodes, orders })
    }

    /// The real segment `[a, b]`.
    pub fn real(a: f64, b: f64) -> Result<Self> {
        TimePath::new(vec![Complex64::new(a, 0.0), Complex64::new(b, 0.0)])
    }

    pub fn nodes(&self) -> &[Complex64] {
        &self.nodes
    }

    pub fn start(&self) -> Complex64 {
        self.nodes[0]
    }

    pub fn end(&self) -> Complex64 {
        *self.nodes.last().unwrap()
    }

    pub fn segments(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn segment(&self, k: usize) -> (Complex64, Complex64) {
        (self.nodes[k], self.nodes[k + 1])
    }

    pub fn order(&self, k: usize) -> usize {
        self.orders[k]
    }

    pub fn length(&self) -> f64 {
        self.nodes.windows(2).map(|w| (w[1] - w[0]).norm()).sum()
    }

    pub fn point(&self, at: PathPoint) -> Complex64 {
        let (a, b) = self.segment(at.segment);
        a + (b - a) * at.u
    }

    /// Distance from `z` to the polyline.
    pub fn distance_to(&self, z: Complex64) -> f64 {
        (0..self.segments())
            .map(|k| {
                let (a, b) = self.segment(k);
                let d = b - a;
                let u = (((z - a) * d.conj()).re / d.norm_sqr()).clamp(0.0, 1.0);
                (a + d * u - z).norm()
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Locates `t` on the path (first segment within `tol` of it).
    pub fn locate(&self, t: Complex64, tol: f64) -> Option<PathPoint> {
        (0..self.segments()).find_map(|k| {
            let (a, b) = self.segment(k);
            let d = b - a;
            let u = ((t - a) * d.conj()).re / d.norm_sqr();
            let uc = u.clamp(0.0, 1.0);
            ((a + d * uc - t).norm() <= tol * (1.0 + d.norm())).then_some(PathPoint { segment: k, u: uc })
        })
    }

    /// The sub-path from the start to `at`; `None` when `at` is the start.
    pub fn prefix(&self, at: PathPoint) -> Option<TimePath> {
        let mut nodes = self.nodes[..=at.segment].to_vec();
        let mut orders = self.orders[..at.segment].to_vec();
        let end = self.point(at);
        if at.u > 0.0 && end != *nodes.last().unwrap() {
            nodes.push(end);
            orders.push(self.orders[at.segment]);
        }
        (nodes.len() >= 2).then(|| TimePath { nodes, orders })
    }

    /// Fails with [`Error::PoleOnPath`] if any pole lies within `clearance`.
    pub fn check_clearance(&self, poles: &[Complex64], clearance: f64) -> Result<()> {
        for &p in poles {
            let d = self.distance_to(p);
            if d < clearance {
                return Err(Error::PoleOnPath { pole: p, distance: d });
            }
        }
        Ok(())
    }

    /// Uniform subdivision of every segment into pieces no longer than
    /// `step`. Returns the node list with the owning segment of each node.
    pub fn subdivide(&self, step: f64) -> Vec<(Complex64, PathPoint)> {
        let mut out = vec![(self.start(), PathPoint { segment: 0, u: 0.0 })];
        for k in 0..self.segments() {
            let (a, b) = self.segment(k);
            let m = ((b - a).norm() / step).ceil().max(1.0) as usize;
            for j in 1..=m {
                let u = j as f64 / m as f64;
                out.push((a + (b - a) * u, PathPoint { segment: k, u }));
            }
        }
        out
    }
}

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    /// Nodes are roots of `P_n`, found by Newton iteration from the
    /// standard cosine guesses.
    pub fn new(n: usize) -> GaussRule {
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            dp = if d != 0.0 { d } else { dp };
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        let mut pairs: Vec<(f64, f64)> = nodes.into_iter().zip(weights).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        GaussRule {
            nodes: pairs.iter().map(|p| p.0).collect(),
            weights: pairs.iter().map(|p| p.1).collect(),
        }
    }

    /// Shared 16-point rule.
    pub fn default_rule() -> &'static GaussRule {
        static RULE: OnceLock<GaussRule> = OnceLock::new();
        RULE.get_or_init(|| GaussRule::new(DEFAULT_ORDER))
    }

    /// Applies the rule to the straight segment `a -> b`; also returns the
    /// matching estimate of `∫ |f| |dt|`.
    pub fn apply<F>(&self, f: &mut F, a: Complex64, b: Complex64) -> Result<(Complex64, f64)>
    where
        F: FnMut(Complex64) -> Result<Complex64>,
    {
        let half = (b - a) * 0.5;
        let mid = (a + b) * 0.5;
        let mut sum = Complex64::new(0.0, 0.0);
        let mut abs = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            let v = f(mid + half * *x)?;
            sum += v * *w;
            abs += v.norm() * *w;
        }
        Ok((sum * half, abs * half.norm()))
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Adaptive composite Gauss–Legendre integration of `f` along `path`:
/// each panel is bisected until the panel estimate and the sum of its two
/// halves agree to `1e-10` relative to `∫|f|`.
pub fn integrate<F>(mut f: F, path: &TimePath) -> Result<Complex64>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    let mut total = Complex64::new(0.0, 0.0);
    for k in 0..path.segments() {
        let (a, b) = path.segment(k);
        let order = path.order(k);
        let owned;
        let rule = if order == DEFAULT_ORDER {
            GaussRule::default_rule()
        } else {
            owned = GaussRule::new(order);
            &owned
        };
        let (whole, _) = rule.apply(&mut f, a, b)?;
        total += adapt(&mut f, rule, a, b, whole, 0)?;
    }
    Ok(total)
}

fn adapt<F>(f: &mut F, rule: &GaussRule, a: Complex64, b: Complex64, whole: Complex64, level: usize) -> Result<Complex64>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    let m = (a + b) * 0.5;
    let (left, la) = rule.apply(f, a, m)?;
    let (right, ra) = rule.apply(f, m, b)?;
    let refined = left + right;
    let tol = QUAD_RTOL * refined.norm().max(la + ra);
    if (refined - whole).norm() <= tol {
        return Ok(refined);
    }
    if level + 1 >= MAX_LEVELS {
        return Err(Error::NoConvergence { levels: MAX_LEVELS });
    }
    Ok(adapt(f, rule, a, m, left, level + 1)? + adapt(f, rule, m, b, right, level + 1)?)
}
