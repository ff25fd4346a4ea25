// Copyright 2026 The lievessiot Authors
// SPDX-License-Identifier: Apache-2.0

//! Automorphic and Lie–Vessiot systems on matrix Lie groups.
//!
//! An automorphic system is a non-autonomous equation `σ' = a(t) σ` on a
//! matrix group `G`, where `a(t) = Σ f_i(t) A_i` ranges over the Lie algebra
//! and the `f_i` are rational functions of complex time. This crate
//! provides:
//!
//! - [`lie`]: matrix Lie algebras, structure constants, exponentials and the
//!   adjoint action, with a catalog of standard algebras;
//! - [`timefunc`]: exact rational coefficient functions, poles and contour
//!   quadrature;
//! - [`automorphic`]: group-preserving flows, logarithmic derivatives,
//!   gauge transformations and right-translation superposition;
//! - [`homogeneous`]: induced systems on homogeneous spaces, isotropy
//!   algebras and the linear and Riccati superposition laws;
//! - [`reduction`]: Lie's reduction by a particular solution and
//!   integration by quadratures on abelian and solvable groups;
//! - [`symmetries`]: the adjoint equation, polynomial right-invariant
//!   symmetries, centralizers and the Galois stabilizer diagnostic.

pub mod automorphic;
pub mod error;
pub mod exact;
pub mod homogeneous;
pub mod lie;
pub mod linalg;
pub mod reduction;
pub mod symmetries;
pub mod timefunc;

pub use error::{Error, Result};
pub use linalg::{CMatrix, CVector};
pub use num_complex::Complex64;
