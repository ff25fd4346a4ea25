// Copyright 2026 The lievessiot Authors
// SPDX-License-Identifier: Apache-2.0

use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Failures raised by the algebraic and numerical routines of this crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix is not in the span of the algebra basis (residual {residual:.3e})")]
    ProjectionFailure { residual: f64 },

    #[error("basis is not closed under the bracket (max residual {residual:.3e})")]
    NotClosed { residual: f64 },

    #[error("basis matrices are linearly dependent (rank {rank} < {expected})")]
    DependentBasis { rank: usize, expected: usize },

    #[error("matrix is not in the group (constraint residual {residual:.3e})")]
    NotInGroup { residual: f64 },

    #[error("unknown catalog algebra `{0}`")]
    UnknownName(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("evaluation at a pole: t = {t}")]
    PoleError { t: Complex64 },

    #[error("path passes within {distance:.3e} of the pole {pole}")]
    PoleOnPath { pole: Complex64, distance: f64 },

    #[error("quadrature did not converge after {levels} refinement levels")]
    NoConvergence { levels: usize },

    #[error("step too large: group constraint residual {residual:.3e}")]
    StepTooLarge { residual: f64 },

    #[error("time {t} is outside the curve domain")]
    OutOfDomain { t: Complex64 },

    #[error("cross-check `{what}` failed: residual {residual:.3e} > {tolerance:.1e}")]
    CrossCheckFailure {
        what: String,
        residual: f64,
        tolerance: f64,
    },

    #[error("solutions are linearly dependent (|det| = {det:.3e})")]
    DependentSolutions { det: f64 },

    #[error("Riccati superposition needs three pairwise distinct solutions")]
    DegenerateTriple,

    #[error("anharmonic ratio undefined: coincident points")]
    DegenerateQuadruple,

    #[error("point is not in the orbit of the origin: {0}")]
    NotInOrbit(String),

    #[error("unsupported homogeneous space kind for {0}")]
    UnsupportedKind(String),

    #[error("curve is not a solution (residual {residual:.3e})")]
    NotASolution { residual: f64 },

    #[error("section is singular near t = {t}")]
    SectionSingular { t: Complex64 },

    #[error("algebra is not abelian (max structure constant {max:.3e})")]
    NotAbelian { max: f64 },

    #[error("algebra is not solvable: derived series stabilizes at dimension {dim}")]
    NotSolvable { dim: usize },

    #[error("stabilizer is not contained in the centralizer (distance {distance:.3e})")]
    ContainmentViolation { distance: f64 },

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}
