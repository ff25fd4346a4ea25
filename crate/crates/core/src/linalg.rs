// Copyright 2026 The lievessiot Authors
// SPDX-License-Identifier: Apache-2.0

//! Dense complex linear algebra used throughout the crate: the matrix
//! exponential and its directional derivative, kernels and spans via the
//! singular value decomposition, and subspace comparisons.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Builds an `n x n` matrix from real row-major data.
pub fn real_matrix(n: usize, rows: &[f64]) -> CMatrix {
    assert_eq!(rows.len(), n * n);
    CMatrix::from_row_iterator(n, n, rows.iter().map(|&x| c(x, 0.0)))
}

pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn is_finite(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn commutator(x: &CMatrix, y: &CMatrix) -> CMatrix {
    x * y - y * x
}

/// Row-major flattening, the vectorization used for basis projections.
pub fn vectorize(m: &CMatrix) -> CVector {
    let n = m.nrows();
    CVector::from_iterator(n * m.ncols(), (0..n).flat_map(|i| (0..m.ncols()).map(move |j| (i, j))).map(|(i, j)| m[(i, j)]))
}

pub fn inverse(m: &CMatrix) -> Option<CMatrix> {
    m.clone().try_inverse()
}

fn one_norm(m: &CMatrix) -> f64 {
    (0..m.ncols())
        .map(|j| m.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371920351148152;

/// Matrix exponential by scaling and squaring with the degree-13 diagonal
/// Padé approximant.
pub fn expm(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm needs a square matrix");
    if n == 0 {
        return a.clone();
    }
    let norm = one_norm(a);
    let s = if norm > THETA13 {
        (norm / THETA13).log2().ceil().max(0.0) as i32
    } else {
        0
    };
    let scaled = a * c(0.5f64.powi(s), 0.0);
    let id = CMatrix::identity(n, n);
    let a2 = &scaled * &scaled;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let b = |k: usize| c(PADE13[k], 0.0);

    let u_inner = &a6 * (&a6 * b(13) + &a4 * b(11) + &a2 * b(9)) + &a6 * b(7) + &a4 * b(5) + &a2 * b(3) + &id * b(1);
    let u = &scaled * u_inner;
    let v = &a6 * (&a6 * b(12) + &a4 * b(10) + &a2 * b(8)) + &a6 * b(6) + &a4 * b(4) + &a2 * b(2) + &id * b(0);

    let p = &v + &u;
    let q = &v - &u;
    let mut r = q.lu().solve(&p).expect("Padé denominator is nonsingular for scaled arguments");
    for _ in 0..s {
        r = &r * &r;
    }
    r
}

/// Returns `(exp(a), L(a, e))`, where `L` is the Fréchet derivative of the
/// exponential at `a` in direction `e`, via the block-triangular identity
/// `exp([[a, e], [0, a]]) = [[exp(a), L], [0, exp(a)]]`.
pub fn expm_frechet(a: &CMatrix, e: &CMatrix) -> (CMatrix, CMatrix) {
    let n = a.nrows();
    let mut block = CMatrix::zeros(2 * n, 2 * n);
    block.view_mut((0, 0), (n, n)).copy_from(a);
    block.view_mut((0, n), (n, n)).copy_from(e);
    block.view_mut((n, n), (n, n)).copy_from(a);
    let big = expm(&block);
    (big.view((0, 0), (n, n)).into_owned(), big.view((0, n), (n, n)).into_owned())
}

/// Orthonormal kernel basis of `m` together with all singular values
/// (descending). A singular value counts as zero when it is at most
/// `cutoff * max(1, largest singular value)`.
pub fn kernel(m: &CMatrix, cutoff: f64) -> (Vec<CVector>, Vec<f64>) {
    let cols = m.ncols();
    if cols == 0 {
        return (Vec::new(), Vec::new());
    }
    // Pad so the thin SVD yields a full set of right singular vectors.
    let rows = m.nrows().max(cols);
    let mut padded = CMatrix::zeros(rows, cols);
    padded.view_mut((0, 0), (m.nrows(), cols)).copy_from(m);
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V^H");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let sv: Vec<f64> = order.iter().map(|&k| svd.singular_values[k]).collect();
    let scale = sv.first().copied().unwrap_or(0.0).max(1.0);
    let basis = order
        .iter()
        .filter(|&&k| svd.singular_values[k] <= cutoff * scale)
        .map(|&k| v_t.row(k).transpose().map(|z| z.conj()))
        .collect();
    (basis, sv)
}

/// Orthonormal basis of the span of `vectors`, rank decided with a relative
/// singular value cutoff.
pub fn span(vectors: &[CVector], cutoff: f64) -> Vec<CVector> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let m = CMatrix::from_columns(vectors);
    let svd = m.svd(true, false);
    let u = svd.u.expect("requested U");
    let scale = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    if scale == 0.0 {
        return Vec::new();
    }
    let mut idx: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&k| svd.singular_values[k] > cutoff * scale.max(1.0))
        .collect();
    idx.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    idx.into_iter().map(|k| u.column(k).into_owned()).collect()
}

/// Distance from `v` to the span of the orthonormal set `basis`.
pub fn distance_to_span(v: &CVector, basis: &[CVector]) -> f64 {
    let mut r = v.clone();
    for q in basis {
        let proj = q.dotc(&r);
        r -= q * proj;
    }
    r.norm()
}

/// Sine of the largest principal angle between two subspaces given by
/// orthonormal bases; 1 when the dimensions differ.
pub fn subspace_gap(a: &[CVector], b: &[CVector]) -> f64 {
    if a.len() != b.len() {
        return 1.0;
    }
    if a.is_empty() {
        return 0.0;
    }
    let one_way = |x: &[CVector], y: &[CVector]| {
        let residuals: Vec<CVector> = x
            .iter()
            .map(|v| {
                let mut r = v.clone();
                for q in y {
                    let p = q.dotc(&r);
                    r -= q * p;
                }
                r
            })
            .collect();
        CMatrix::from_columns(&residuals)
            .singular_values()
            .iter()
            .cloned()
            .fold(0.0, f64::max)
    };
    one_way(a, b).max(one_way(b, a)).min(1.0)
}

/// Completes an orthonormal set `inner` (inside the span of `outer`) to an
/// orthonormal basis of `span(outer)`. Candidates are taken from `outer`
/// greedily by largest remaining norm (column-pivoted Gram-Schmidt).
pub fn complement(inner: &[CVector], outer: &[CVector], cutoff: f64) -> Vec<CVector> {
    let mut basis: Vec<CVector> = inner.to_vec();
    let mut out = Vec::new();
    let target = outer.len();
    let mut remaining: Vec<CVector> = outer.to_vec();
    while basis.len() < target {
        let mut best: Option<(usize, CVector, f64)> = None;
        for (k, v) in remaining.iter().enumerate() {
            let mut r = v.clone();
            for _ in 0..2 {
                for q in &basis {
                    let p = q.dotc(&r);
                    r -= q * p;
                }
            }
            let nrm = r.norm();
            if best.as_ref().map_or(true, |b| nrm > b.2) {
                best = Some((k, r, nrm));
            }
        }
        match best {
            Some((k, r, nrm)) if nrm > cutoff => {
                let q = r / c(nrm, 0.0);
                basis.push(q.clone());
                out.push(q);
                remaining.remove(k);
            }
            _ => break,
        }
    }
    out
}
