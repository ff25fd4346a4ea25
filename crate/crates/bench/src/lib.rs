// Copyright 2026 The lievessiot Authors
// SPDX-License-Identifier: Apache-2.0

//! Fixtures shared by the benchmarks.

use lievessiot::automorphic::AutomorphicSystem;
use lievessiot::lie::{builtin_algebra, riccati_algebra};

/// Riccati system with polynomial coefficients of degree two.
pub fn riccati_fixture() -> AutomorphicSystem {
    AutomorphicSystem::parse(&riccati_algebra(), &["1 + t^2", "2*t - 1", "(0.5+0.25i)*t"]).unwrap()
}

/// Upper-triangular 3×3 system with polynomial coefficients.
pub fn triangular_fixture() -> AutomorphicSystem {
    let alg = builtin_algebra("upper_triangular", 3).unwrap();
    let cs: Vec<String> = (0..alg.dim()).map(|k| format!("{k} + t^2 - {}*t", k + 1)).collect();
    AutomorphicSystem::parse(&alg, &cs).unwrap()
}
