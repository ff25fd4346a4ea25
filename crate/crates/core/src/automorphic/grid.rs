// Copyright 2026 The lievessiot Authors
// SPDX-License-Identifier: Apache-2.0

//! Sample grids along a time path, parameterized by arclength, and the
//! finite-difference derivative used for logarithmic derivatives.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::timefunc::TimePath;

/// Relative tolerance for deciding that a time lies on the path.
const ON_PATH_TOL: f64 = 1e-9;

/// Ordered nodes along a [`TimePath`], each with its arclength position.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveGrid {
    path: TimePath,
    times: Vec<Complex64>,
    arcs: Vec<f64>,
    seg_arcs: Vec<f64>,
    spacing: f64,
}

impl CurveGrid {
    /// Subdivides each path segment uniformly into pieces of length at most
    /// `step`.
    pub fn new(path: &TimePath, step: f64) -> Result<Self> {
        if !(step > 0.0) || !step.is_finite() {
            return Err(Error::DimensionMismatch(format!("step must be positive, got {step}")));
        }
        let counts: Vec<usize> = (0..path.segments())
            .map(|k| {
                let (a, b) = path.segment(k);
                ((b - a).norm() / step).ceil().max(1.0) as usize
            })
            .collect();
        Ok(CurveGrid::with_counts(path, &counts))
    }

    /// Uses `counts[k]` equal pieces on segment `k`.
    pub fn with_counts(path: &TimePath, counts: &[usize]) -> Self {
        let mut seg_arcs = vec![0.0];
        for k in 0..path.segments() {
            let (a, b) = path.segment(k);
            seg_arcs.push(seg_arcs[k] + (b - a).norm());
        }
        let mut times = vec![path.start()];
        let mut arcs = vec![0.0];
        let mut spacing: f64 = 0.0;
        for k in 0..path.segments() {
            let (a, b) = path.segment(k);
            let m = counts[k].max(1);
            let len = (b - a).norm();
            spacing = spacing.max(len / m as f64);
            for j in 1..=m {
                let u = j as f64 / m as f64;
                times.push(if j == m { b } else { a + (b - a) * u });
                arcs.push(if j == m { seg_arcs[k + 1] } else { seg_arcs[k] + len * u });
            }
        }
        CurveGrid { path: path.clone(), times, arcs, seg_arcs, spacing }
    }

    pub fn path(&self) -> &TimePath {
        &self.path
    }

    pub fn times(&self) -> &[Complex64] {
        &self.times
    }

    pub fn arcs(&self) -> &[f64] {
        &self.arcs
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Largest distance between consecutive nodes.
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn total_length(&self) -> f64 {
        *self.seg_arcs.last().unwrap()
    }

    /// Number of nodes per path segment, for building refined grids.
    pub fn counts(&self) -> Vec<usize> {
        (0..self.path.segments())
            .map(|k| {
                self.arcs
                    .iter()
                    .filter(|&&s| s > self.seg_arcs[k] + 1e-15 && s <= self.seg_arcs[k + 1] + 1e-15)
                    .count()
            })
            .collect()
    }

    /// Arclength position of `t`, which must lie on the path.
    pub fn arc_of(&self, t: Complex64) -> Result<f64> {
        let at = self.path.locate(t, ON_PATH_TOL).ok_or(Error::OutOfDomain { t })?;
        let (a, b) = self.path.segment(at.segment);
        Ok(self.seg_arcs[at.segment] + (b - a).norm() * at.u)
    }

    /// Path segment containing arclength `s`; vertices belong to the later
    /// segment except at the very end.
    pub fn segment_of(&self, s: f64) -> usize {
        let last = self.path.segments() - 1;
        (0..=last).find(|&k| s < self.seg_arcs[k + 1]).unwrap_or(last)
    }

    pub fn time_at(&self, s: f64) -> Complex64 {
        let k = self.segment_of(s);
        let (a, b) = self.path.segment(k);
        let len = self.seg_arcs[k + 1] - self.seg_arcs[k];
        a + (b - a) * ((s - self.seg_arcs[k]) / len)
    }

    /// Index `k` of the grid interval `[node k, node k+1]` containing `s`.
    pub fn interval(&self, s: f64) -> usize {
        let n = self.arcs.len();
        match self.arcs.binary_search_by(|x| x.total_cmp(&s)) {
            Ok(k) => k.min(n - 2),
            Err(k) => k.saturating_sub(1).min(n - 2),
        }
    }

    /// `df/dt` at arclength `s` by a five-point, fourth-order stencil of
    /// spacing `min(step, segment/4)`, kept inside the path segment (shifted
    /// one-sided near its ends).
    pub fn derivative<F>(&self, f: F, s: f64, step: f64) -> Result<CMatrix>
    where
        F: Fn(f64) -> Result<CMatrix>,
    {
        let k = self.segment_of(s);
        let (lo, hi) = (self.seg_arcs[k], self.seg_arcs[k + 1]);
        let delta = step.min((hi - lo) / 4.0);
        let j_lo = ((lo - s) / delta - 1e-9).ceil() as i64;
        let j_hi = ((hi - s) / delta + 1e-9).floor() as i64;
        let start = (-2i64).clamp(j_lo, j_hi - 4);
        let offsets: Vec<f64> = (start..start + 5).map(|j| j as f64).collect();
        let w = fornberg_first_derivative(&offsets);
        let mut acc: Option<CMatrix> = None;
        for (o, wk) in offsets.iter().zip(&w) {
            let sample = f((s + o * delta).clamp(lo, hi))? * Complex64::new(*wk, 0.0);
            acc = Some(match acc {
                Some(a) => a + sample,
                None => sample,
            });
        }
        let (a, b) = self.path.segment(k);
        let dir = (b - a) / (b - a).norm();
        Ok(acc.unwrap() / (dir * delta))
    }
}

/// Weights of the first derivative at 0 for the given node offsets
/// (Fornberg's recursion).
pub fn fornberg_first_derivative(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let m = 1;
    let mut c = vec![vec![vec![0.0; n]; n]; m + 1];
    c[0][0][0] = 1.0;
    let mut c1 = 1.0;
    let x0 = 0.0;
    let mut c4 = x[0] - x0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i] - x0;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i][i] = c1 * (k as f64 * c[k - 1][i - 1][i - 1] - c5 * c[k][i - 1][i - 1]) / c2;
                }
                c[0][i][i] = -c1 * c5 * c[0][i - 1][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][i][j] = (c4 * c[k][i - 1][j] - k as f64 * c[k - 1][i - 1][j]) / c3;
            }
            c[0][i][j] = c4 * c[0][i - 1][j] / c3;
        }
        c1 = c2;
    }
    (0..n).map(|j| c[1][n - 1][j]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    #[test]
    fn centered_weights() {
        let w = fornberg_first_derivative(&[-2.0, -1.0, 0.0, 1.0, 2.0]);
        let expect = [1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0];
        for (a, b) in w.iter().zip(expect) {
            assert!((a - b).abs() < 1e-14);
        }
        let w = fornberg_first_derivative(&[0.0, 1.0, 2.0, 3.0, 4.0]);
        let expect = [-25.0 / 12.0, 4.0, -3.0, 4.0 / 3.0, -1.0 / 4.0];
        for (a, b) in w.iter().zip(expect) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn grid_counts_and_location() {
        let p = TimePath::new(vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.5)]).unwrap();
        let g = CurveGrid::new(&p, 0.1).unwrap();
        assert_eq!(g.counts(), vec![10, 5]);
        assert_eq!(g.len(), 16);
        let s = g.arc_of(c(1.0, 0.25)).unwrap();
        assert!((s - 1.25).abs() < 1e-15);
        assert_eq!(g.segment_of(s), 1);
        assert!((g.time_at(s) - c(1.0, 0.25)).norm() < 1e-15);
        assert_eq!(g.interval(0.0), 0);
        assert_eq!(g.interval(1.5), 14);
        assert!(matches!(g.arc_of(c(3.0, 0.0)), Err(Error::OutOfDomain { .. })));
    }

    #[test]
    fn derivative_along_complex_segment() {
        // f(t) = t^3 on a segment in direction i; derivative 3t^2.
        let p = TimePath::new(vec![c(0.0, 0.0), c(0.0, 1.0)]).unwrap();
        let g = CurveGrid::new(&p, 0.05).unwrap();
        let f = |s: f64| -> Result<CMatrix> {
            let t = g.time_at(s);
            Ok(CMatrix::from_element(1, 1, t * t * t))
        };
        for s in [0.0, 0.01, 0.5, 0.99, 1.0] {
            let t = g.time_at(s);
            let d = g.derivative(f, s, 0.05).unwrap()[(0, 0)];
            assert!((d - t * t * 3.0).norm() < 1e-12, "s = {s}");
        }
    }
}
