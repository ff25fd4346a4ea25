// Copyright 2026 The lievessiot Authors
// SPDX-License-Identifier: Apache-2.0

//! Matrix Lie algebras and groups.
//!
//! A [`LieAlgebraBasis`] is a list of linearly independent `n x n` matrices
//! `A_1..A_s` closed under the commutator, with structure constants
//! `[A_i, A_j] = Σ_k c_ij^k A_k`. Elements carry both their coordinates and
//! their matrix.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{self, Exact};
use crate::linalg::{c, commutator, expm, frobenius, inverse, is_finite, vectorize, CMatrix, CVector, ONE, ZERO};

/// Tolerance for structural identities (closure, Jacobi).
pub const STRUCTURE_TOL: f64 = 1e-10;
/// Tolerance for membership of a matrix in the algebra span or group.
pub const MEMBERSHIP_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupConstraint {
    GeneralLinear,
    SpecialLinear,
    UpperTriangular,
    Diagonal,
    Symplectic,
}

impl GroupConstraint {
    /// How far `m` is from satisfying the defining equations of the group.
    pub fn residual(&self, m: &CMatrix) -> f64 {
        let n = m.nrows();
        let scale = frobenius(m).max(1.0);
        match self {
            GroupConstraint::GeneralLinear => 0.0,
            GroupConstraint::SpecialLinear => (m.determinant() - ONE).norm(),
            GroupConstraint::UpperTriangular => {
                let mut r: f64 = 0.0;
                for i in 0..n {
                    for j in 0..i {
                        r = r.max(m[(i, j)].norm());
                    }
                }
                r / scale
            }
            GroupConstraint::Diagonal => {
                let mut r: f64 = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        if i != j {
                            r = r.max(m[(i, j)].norm());
                        }
                    }
                }
                r / scale
            }
            GroupConstraint::Symplectic => {
                let j = symplectic_form(n);
                frobenius(&(m.transpose() * &j * m - &j)) / (scale * scale)
            }
        }
    }
}

/// The standard form `J = [[0, I], [-I, 0]]` of size `n` (even).
pub fn symplectic_form(n: usize) -> CMatrix {
    let m = n / 2;
    let mut j = CMatrix::zeros(n, n);
    for i in 0..m {
        j[(i, m + i)] = ONE;
        j[(m + i, i)] = -ONE;
    }
    j
}

/// A matrix Lie algebra with a fixed basis and its structure constants.
pub struct LieAlgebraBasis {
    name: String,
    n: usize,
    basis: Vec<CMatrix>,
    structure: Vec<Complex64>,
    exact_structure: Vec<Exact>,
    constraint: GroupConstraint,
    pinv: CMatrix,
}

/// Shared handle to an algebra; elements and systems hold one of these.
pub type Algebra = Arc<LieAlgebraBasis>;

impl fmt::Debug for LieAlgebraBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LieAlgebraBasis")
            .field("name", &self.name)
            .field("n", &self.n)
            .field("dim", &self.dim())
            .field("constraint", &self.constraint)
            .finish()
    }
}

/// Materializes the structure constants of a list of matrices and checks
/// that they span a Lie algebra.
pub fn compute_structure_constants(name: &str, basis: Vec<CMatrix>, constraint: GroupConstraint) -> Result<Algebra> {
    let s = basis.len();
    let n = basis.first().map_or(0, |m| m.nrows());
    if s == 0 || n == 0 {
        return Err(Error::DimensionMismatch("an algebra basis needs at least one nonempty matrix".into()));
    }
    if basis.iter().any(|m| m.nrows() != n || m.ncols() != n) {
        return Err(Error::DimensionMismatch("basis matrices must be square and of equal size".into()));
    }
    if basis.iter().any(|m| !is_finite(m)) {
        return Err(Error::DimensionMismatch("basis entries must be finite".into()));
    }
    let cols: Vec<CVector> = basis.iter().map(vectorize).collect();
    let v = CMatrix::from_columns(&cols);
    let sv = v.clone().svd(false, false).singular_values;
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    let rank = sv.iter().filter(|&&x| x > STRUCTURE_TOL * smax.max(1.0)).count();
    if rank < s {
        return Err(Error::DependentBasis { rank, expected: s });
    }
    let pinv = v.pseudo_inverse(0.0).map_err(|e| Error::DimensionMismatch(e.to_string()))?;

    // Exact route: brackets of the binary-exact entries projected through an
    // exact pivot system. Falls back to the numerical constants when a
    // bracket is only numerically inside the span.
    let exact_basis: Vec<Vec<Exact>> = basis
        .iter()
        .map(|m| vectorize(m).iter().map(|&z| exact::from_c64(z).unwrap()).collect())
        .collect();
    let exact_constants = exact_structure(&exact_basis, n);

    let mut structure = vec![ZERO; s * s * s];
    let mut worst: f64 = 0.0;
    for i in 0..s {
        for j in 0..s {
            let br = commutator(&basis[i], &basis[j]);
            let coords = &pinv * vectorize(&br);
            let recon = combine(&basis, coords.as_slice(), n);
            let resid = frobenius(&(recon - &br));
            let bound = STRUCTURE_TOL * (1.0 + frobenius(&basis[i]) * frobenius(&basis[j]));
            worst = worst.max(resid / bound * STRUCTURE_TOL);
            if resid > bound {
                return Err(Error::NotClosed { residual: resid });
            }
            for k in 0..s {
                structure[(i * s + j) * s + k] = coords[k];
            }
        }
    }
    let exact_structure = match exact_constants {
        Some(e) => {
            for (z, q) in structure.iter_mut().zip(&e) {
                *z = exact::to_c64(q);
            }
            e
        }
        None => {
            // Enforce exact antisymmetry on the numerical constants.
            for i in 0..s {
                for j in 0..s {
                    for k in 0..s {
                        let idx = (i * s + j) * s + k;
                        if i == j {
                            structure[idx] = ZERO;
                        } else if i > j {
                            structure[idx] = -structure[(j * s + i) * s + k];
                        }
                    }
                }
            }
            structure.iter().map(|&z| exact::from_c64(z).unwrap()).collect()
        }
    };
    let alg = LieAlgebraBasis {
        name: name.to_string(),
        n,
        basis,
        structure,
        exact_structure,
        constraint,
        pinv,
    };
    let jac = alg.jacobi_residual();
    if jac > STRUCTURE_TOL {
        return Err(Error::NotClosed { residual: jac });
    }
    Ok(Arc::new(alg))
}

fn combine(basis: &[CMatrix], coords: &[Complex64], n: usize) -> CMatrix {
    let mut m = CMatrix::zeros(n, n);
    for (b, &x) in basis.iter().zip(coords) {
        if x != ZERO {
            m += b * x;
        }
    }
    m
}

/// Exact structure constants when every bracket lies exactly in the span.
fn exact_structure(basis: &[Vec<Exact>], n: usize) -> Option<Vec<Exact>> {
    let s = basis.len();
    let solver = ExactProjector::new(basis)?;
    let mut out = vec![Exact::zero(); s * s * s];
    for i in 0..s {
        for j in (i + 1)..s {
            let br = exact_commutator(&basis[i], &basis[j], n);
            let coords = solver.project(&br)?;
            for k in 0..s {
                out[(i * s + j) * s + k] = coords[k].clone();
                out[(j * s + i) * s + k] = -coords[k].clone();
            }
        }
    }
    Some(out)
}

fn exact_commutator(a: &[Exact], b: &[Exact], n: usize) -> Vec<Exact> {
    let mut out = vec![Exact::zero(); n * n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = Exact::zero();
            for k in 0..n {
                acc += &a[i * n + k] * &b[k * n + j] - &b[i * n + k] * &a[k * n + j];
            }
            out[i * n + j] = acc;
        }
    }
    out
}

/// Exact coordinate solve through `s` pivot entries of the vectorized
/// basis, followed by an exact membership check.
#[derive(Debug, Clone)]
pub struct ExactProjector {
    basis: Vec<Vec<Exact>>,
    pivots: Vec<usize>,
    solve: Vec<Vec<Exact>>,
}

impl ExactProjector {
    pub fn new(basis: &[Vec<Exact>]) -> Option<Self> {
        let s = basis.len();
        let mut rows = basis.to_vec();
        let pivots = exact::rref(&mut rows);
        if pivots.len() < s {
            return None;
        }
        // coords solve  Σ_i c_i basis_i[p] = x[p]  for the pivot positions p.
        let m: Vec<Vec<Exact>> = pivots.iter().map(|&p| (0..s).map(|i| basis[i][p].clone()).collect()).collect();
        let solve = exact::invert(&m)?;
        Some(ExactProjector { basis: basis.to_vec(), pivots, solve })
    }

    /// Coordinates of the row-major matrix `x`, `None` if not in the span.
    pub fn project(&self, x: &[Exact]) -> Option<Vec<Exact>> {
        let s = self.basis.len();
        let rhs: Vec<&Exact> = self.pivots.iter().map(|&p| &x[p]).collect();
        let coords: Vec<Exact> = (0..s)
            .map(|i| self.solve[i].iter().zip(&rhs).fold(Exact::zero(), |acc, (a, b)| acc + a * *b))
            .collect();
        for (pos, target) in x.iter().enumerate() {
            let v = coords.iter().zip(&self.basis).fold(Exact::zero(), |acc, (c, b)| acc + c * &b[pos]);
            if v != *target {
                return None;
            }
        }
        Some(coords)
    }

    /// The row-major coefficient tables used by the rational-function
    /// projection: coordinate `i` is `Σ_p weights[i][p] * x[pivot p]`.
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn weights(&self) -> &[Vec<Exact>] {
        &self.solve
    }

    pub fn basis(&self) -> &[Vec<Exact>] {
        &self.basis
    }
}

impl LieAlgebraBasis {
    pub fn name(&self) -> &str {
        &self.name
    }

    /// Matrix size `n`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Algebra dimension `s`.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[CMatrix] {
        &self.basis
    }

    pub fn constraint(&self) -> GroupConstraint {
        self.constraint
    }

    /// `c_ij^k`.
    pub fn structure(&self, i: usize, j: usize, k: usize) -> Complex64 {
        let s = self.dim();
        self.structure[(i * s + j) * s + k]
    }

    pub fn exact_structure(&self, i: usize, j: usize, k: usize) -> &Exact {
        let s = self.dim();
        &self.exact_structure[(i * s + j) * s + k]
    }

    pub fn is_abelian(&self) -> bool {
        self.max_structure_constant() <= STRUCTURE_TOL
    }

    pub fn max_structure_constant(&self) -> f64 {
        self.structure.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Exact row-major entries of the basis matrices.
    pub fn exact_basis(&self) -> Vec<Vec<Exact>> {
        self.basis
            .iter()
            .map(|m| vectorize(m).iter().map(|&z| exact::from_c64(z).unwrap()).collect())
            .collect()
    }

    pub fn exact_projector(&self) -> Option<ExactProjector> {
        ExactProjector::new(&self.exact_basis())
    }

    /// `Σ coords_i A_i`.
    pub fn matrix_of(&self, coords: &[Complex64]) -> CMatrix {
        combine(&self.basis, coords, self.n)
    }

    /// Least-squares coordinates of `m` and the reconstruction residual.
    pub fn project_with_residual(&self, m: &CMatrix) -> (CVector, f64) {
        let coords = &self.pinv * vectorize(m);
        let resid = frobenius(&(self.matrix_of(coords.as_slice()) - m));
        (coords, resid)
    }

    /// Coordinates of `m`; [`Error::ProjectionFailure`] if `m` leaves the
    /// span by more than the membership tolerance (relative to `‖m‖`).
    pub fn project(&self, m: &CMatrix) -> Result<CVector> {
        if m.nrows() != self.n || m.ncols() != self.n {
            return Err(Error::DimensionMismatch(format!("expected {0}x{0} matrix", self.n)));
        }
        let (coords, resid) = self.project_with_residual(m);
        if resid > MEMBERSHIP_TOL * frobenius(m).max(1.0) {
            return Err(Error::ProjectionFailure { residual: resid });
        }
        Ok(coords)
    }

    /// Matrix of `ad_X` on coordinates: `(ad_X)_kj = Σ_i x_i c_ij^k`.
    pub fn ad_matrix(&self, coords: &[Complex64]) -> CMatrix {
        let s = self.dim();
        let mut m = CMatrix::zeros(s, s);
        for (i, &x) in coords.iter().enumerate() {
            if x == ZERO {
                continue;
            }
            for j in 0..s {
                for k in 0..s {
                    m[(k, j)] += x * self.structure(i, j, k);
                }
            }
        }
        m
    }

    /// `max_{i,j,k} |c_ij^k + c_ji^k|`.
    pub fn antisymmetry_residual(&self) -> f64 {
        let s = self.dim();
        let mut r: f64 = 0.0;
        for i in 0..s {
            for j in 0..s {
                for k in 0..s {
                    r = r.max((self.structure(i, j, k) + self.structure(j, i, k)).norm());
                }
            }
        }
        r
    }

    /// Largest coefficient of `[[A_i,A_j],A_l] + [[A_j,A_l],A_i] + [[A_l,A_i],A_j]`
    /// computed through the structure constants.
    pub fn jacobi_residual(&self) -> f64 {
        let s = self.dim();
        let mut r: f64 = 0.0;
        for i in 0..s {
            for j in 0..s {
                for l in 0..s {
                    for m in 0..s {
                        let mut acc = ZERO;
                        for k in 0..s {
                            acc += self.structure(i, j, k) * self.structure(k, l, m)
                                + self.structure(j, l, k) * self.structure(k, i, m)
                                + self.structure(l, i, k) * self.structure(k, j, m);
                        }
                        r = r.max(acc.norm());
                    }
                }
            }
        }
        r
    }

    /// `max_{i,j} ‖[A_i,A_j] - Σ_k c_ij^k A_k‖_F / (1 + ‖A_i‖‖A_j‖)`.
    pub fn closure_residual(&self) -> f64 {
        let s = self.dim();
        let mut r: f64 = 0.0;
        for i in 0..s {
            for j in 0..s {
                let br = commutator(&self.basis[i], &self.basis[j]);
                let coords: Vec<Complex64> = (0..s).map(|k| self.structure(i, j, k)).collect();
                let resid = frobenius(&(self.matrix_of(&coords) - br));
                r = r.max(resid / (1.0 + frobenius(&self.basis[i]) * frobenius(&self.basis[j])));
            }
        }
        r
    }
}

/// An element of a Lie algebra: coordinates plus the matrix they name.
#[derive(Clone)]
pub struct AlgebraElement {
    algebra: Algebra,
    coords: CVector,
    matrix: CMatrix,
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AlgebraElement")
            .field("algebra", &self.algebra.name)
            .field("coords", &self.coords.as_slice())
            .finish()
    }
}

impl AlgebraElement {
    pub fn from_coords(algebra: &Algebra, coords: CVector) -> Self {
        assert_eq!(coords.len(), algebra.dim(), "coordinate count must match the algebra dimension");
        let matrix = algebra.matrix_of(coords.as_slice());
        AlgebraElement { algebra: algebra.clone(), coords, matrix }
    }

    pub fn from_slice(algebra: &Algebra, coords: &[Complex64]) -> Self {
        AlgebraElement::from_coords(algebra, CVector::from_column_slice(coords))
    }

    /// Projects a matrix onto the algebra, failing if it leaves the span.
    pub fn from_matrix(algebra: &Algebra, matrix: CMatrix) -> Result<Self> {
        let coords = algebra.project(&matrix)?;
        Ok(AlgebraElement { algebra: algebra.clone(), coords, matrix })
    }

    pub fn zero(algebra: &Algebra) -> Self {
        AlgebraElement::from_coords(algebra, CVector::zeros(algebra.dim()))
    }

    /// The `k`-th basis element.
    pub fn basis(algebra: &Algebra, k: usize) -> Self {
        let mut v = CVector::zeros(algebra.dim());
        v[k] = ONE;
        AlgebraElement::from_coords(algebra, v)
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn coords(&self) -> &CVector {
        &self.coords
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn norm(&self) -> f64 {
        frobenius(&self.matrix)
    }

    pub fn scale(&self, a: Complex64) -> Self {
        AlgebraElement::from_coords(&self.algebra, &self.coords * a)
    }

    pub fn add(&self, other: &AlgebraElement) -> Self {
        AlgebraElement::from_coords(&self.algebra, &self.coords + &other.coords)
    }

    pub fn sub(&self, other: &AlgebraElement) -> Self {
        AlgebraElement::from_coords(&self.algebra, &self.coords - &other.coords)
    }

    pub fn bracket(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        bracket(self, other)
    }
}

/// `[X, Y] = XY - YX`, coordinates recovered by projection.
pub fn bracket(x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
    if !Arc::ptr_eq(&x.algebra, &y.algebra) && x.algebra.basis != y.algebra.basis {
        return Err(Error::DimensionMismatch("bracket of elements from different algebras".into()));
    }
    AlgebraElement::from_matrix(&x.algebra, commutator(&x.matrix, &y.matrix))
}

/// An invertible matrix known to satisfy the constraint of its algebra's
/// group.
#[derive(Clone)]
pub struct GroupElement {
    algebra: Algebra,
    matrix: CMatrix,
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroupElement").field("algebra", &self.algebra.name).field("matrix", &self.matrix).finish()
    }
}

impl GroupElement {
    /// Checks invertibility and the group constraint to [`MEMBERSHIP_TOL`].
    pub fn new(algebra: &Algebra, matrix: CMatrix) -> Result<Self> {
        let n = algebra.n();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::DimensionMismatch(format!("expected {n}x{n} group element")));
        }
        if !is_finite(&matrix) {
            return Err(Error::NotInGroup { residual: f64::INFINITY });
        }
        let scale = frobenius(&matrix).max(1.0).powi(n as i32);
        if matrix.determinant().norm() <= 1e-12 * scale {
            return Err(Error::NotInGroup { residual: f64::INFINITY });
        }
        let residual = algebra.constraint().residual(&matrix);
        if residual > MEMBERSHIP_TOL {
            return Err(Error::NotInGroup { residual });
        }
        Ok(GroupElement { algebra: algebra.clone(), matrix })
    }

    /// Wraps a matrix produced by a group-preserving computation.
    pub(crate) fn trusted(algebra: &Algebra, matrix: CMatrix) -> Self {
        GroupElement { algebra: algebra.clone(), matrix }
    }

    pub fn identity(algebra: &Algebra) -> Self {
        GroupElement::trusted(algebra, CMatrix::identity(algebra.n(), algebra.n()))
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn constraint_residual(&self) -> f64 {
        self.algebra.constraint().residual(&self.matrix)
    }

    pub fn inverse(&self) -> GroupElement {
        GroupElement::trusted(&self.algebra, inverse(&self.matrix).expect("group elements are invertible"))
    }

    pub fn mul(&self, other: &GroupElement) -> GroupElement {
        GroupElement::trusted(&self.algebra, &self.matrix * &other.matrix)
    }
}

/// The exponential map of the algebra.
pub fn exp(x: &AlgebraElement) -> GroupElement {
    GroupElement::trusted(&x.algebra, expm(&x.matrix))
}

/// `Adj_σ(X) = σ X σ⁻¹`, re-expanded in the basis.
pub fn adjoint(sigma: &GroupElement, x: &AlgebraElement) -> Result<AlgebraElement> {
    if sigma.matrix.nrows() != x.matrix.nrows() {
        return Err(Error::DimensionMismatch("adjoint action needs matching sizes".into()));
    }
    let inv = inverse(&sigma.matrix).ok_or(Error::NotInGroup { residual: f64::INFINITY })?;
    AlgebraElement::from_matrix(&x.algebra, &sigma.matrix * &x.matrix * inv)
}

fn unit(n: usize, i: usize, j: usize) -> CMatrix {
    let mut m = CMatrix::zeros(n, n);
    m[(i, j)] = ONE;
    m
}

/// Catalog of standard algebras.
///
/// | name               | basis (in order)                                      |
/// |--------------------|-------------------------------------------------------|
/// | `gl`               | `E_ij`, row-major                                     |
/// | `sl`               | `E_ij (i != j)` row-major, then `E_ii - E_(i+1)(i+1)` |
/// | `sl2_riccati`      | `B1 = [[0,1],[0,0]]`, `B2 = diag(1/2,-1/2)`, `B3 = [[0,0],[-1,0]]` |
/// | `diagonal`         | `E_ii`                                                |
/// | `upper_triangular` | `E_ij, i <= j`, row-major                             |
/// | `strictly_upper`   | `E_ij, i < j`, row-major                              |
/// | `sp`               | `n = 2m`: `[[E_ij,0],[0,-E_ji]]`, then symmetric upper-right, then symmetric lower-left blocks |
///
/// With the Riccati basis, `a B1 + b B2 + c B3 = [[b/2, a], [-c, -b/2]]`.
pub fn builtin_algebra(name: &str, n: usize) -> Result<Algebra> {
    let dims = |ok: bool| {
        if ok {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!("invalid size {n} for `{name}`")))
        }
    };
    let (basis, constraint, label) = match name {
        "gl" => {
            dims(n >= 1)?;
            let b = (0..n).flat_map(|i| (0..n).map(move |j| unit(n, i, j))).collect();
            (b, GroupConstraint::GeneralLinear, format!("gl({n})"))
        }
        "sl" => {
            dims(n >= 2)?;
            let mut b: Vec<CMatrix> = (0..n)
                .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| unit(n, i, j)))
                .collect();
            b.extend((0..n - 1).map(|i| unit(n, i, i) - unit(n, i + 1, i + 1)));
            (b, GroupConstraint::SpecialLinear, format!("sl({n})"))
        }
        "sl2_riccati" => {
            dims(n == 2 || n == 0)?;
            let b1 = unit(2, 0, 1);
            let b2 = (unit(2, 0, 0) - unit(2, 1, 1)) * c(0.5, 0.0);
            let b3 = -unit(2, 1, 0);
            (vec![b1, b2, b3], GroupConstraint::SpecialLinear, "sl2_riccati".to_string())
        }
        "diagonal" => {
            dims(n >= 1)?;
            ((0..n).map(|i| unit(n, i, i)).collect(), GroupConstraint::Diagonal, format!("diagonal({n})"))
        }
        "upper_triangular" => {
            dims(n >= 1)?;
            let b = (0..n).flat_map(|i| (i..n).map(move |j| unit(n, i, j))).collect();
            (b, GroupConstraint::UpperTriangular, format!("upper_triangular({n})"))
        }
        "strictly_upper" => {
            dims(n >= 2)?;
            let b = (0..n).flat_map(|i| (i + 1..n).map(move |j| unit(n, i, j))).collect();
            (b, GroupConstraint::UpperTriangular, format!("strictly_upper({n})"))
        }
        "sp" => {
            dims(n >= 2 && n % 2 == 0)?;
            let m = n / 2;
            let mut b = Vec::new();
            for i in 0..m {
                for j in 0..m {
                    b.push(unit(n, i, j) - unit(n, m + j, m + i));
                }
            }
            for i in 0..m {
                for j in i..m {
                    b.push(if i == j { unit(n, i, m + i) } else { unit(n, i, m + j) + unit(n, j, m + i) });
                }
            }
            for i in 0..m {
                for j in i..m {
                    b.push(if i == j { unit(n, m + i, i) } else { unit(n, m + i, j) + unit(n, m + j, i) });
                }
            }
            (b, GroupConstraint::Symplectic, format!("sp({n})"))
        }
        other => return Err(Error::UnknownName(other.to_string())),
    };
    compute_structure_constants(&label, basis, constraint)
}

/// The Riccati algebra `sl2_riccati`.
pub fn riccati_algebra() -> Algebra {
    builtin_algebra("sl2_riccati", 2).expect("catalog algebra")
}

/// JSON form of a basis: matrices as nested row arrays of `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisSpec {
    pub name: String,
    pub constraint: GroupConstraint,
    pub matrices: Vec<Vec<Vec<[f64; 2]>>>,
}

impl BasisSpec {
    pub fn from_algebra(a: &LieAlgebraBasis) -> Self {
        BasisSpec {
            name: a.name.clone(),
            constraint: a.constraint,
            matrices: a.basis.iter().map(matrix_to_pairs).collect(),
        }
    }

    pub fn build(&self) -> Result<Algebra> {
        let basis = self.matrices.iter().map(|m| matrix_from_pairs(m)).collect::<Result<Vec<_>>>()?;
        compute_structure_constants(&self.name, basis, self.constraint)
    }
}

pub fn matrix_to_pairs(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect()
}

pub fn matrix_from_pairs(rows: &[Vec<[f64; 2]>]) -> Result<CMatrix> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch("matrix rows must form a square".into()));
    }
    Ok(DMatrix::from_fn(n, n, |i, j| c(rows[i][j][0], rows[i][j][1])))
}
