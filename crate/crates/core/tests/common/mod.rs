// Copyright 2026 The lievessiot Authors
// SPDX-License-Identifier: Apache-2.0

#![allow(dead_code)]

use lievessiot::automorphic::AutomorphicSystem;
use lievessiot::lie::{riccati_algebra, Algebra, GroupElement};
use lievessiot::linalg::{c, frobenius, CMatrix};
use rand::Rng;

/// `x' = a + b x + c x²` as an automorphic system on the Riccati basis.
pub fn riccati(a: &str, b: &str, c: &str) -> AutomorphicSystem {
    AutomorphicSystem::parse(&riccati_algebra(), &[a, b, c]).unwrap()
}

pub fn m2(a: [f64; 4]) -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(a[0], 0.0), c(a[1], 0.0), c(a[2], 0.0), c(a[3], 0.0)])
}

pub fn close(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
    frobenius(&(a - b)) <= tol
}

/// Random element of SL(2) with moderate entries.
pub fn random_sl2<R: Rng>(rng: &mut R, algebra: &Algebra) -> GroupElement {
    loop {
        let a = c(rng.gen_range(-2.0..2.0), rng.gen_range(-1.0..1.0));
        let b = c(rng.gen_range(-2.0..2.0), rng.gen_range(-1.0..1.0));
        let cc = c(rng.gen_range(-2.0..2.0), rng.gen_range(-1.0..1.0));
        if a.norm() < 0.3 {
            continue;
        }
        let d = (c(1.0, 0.0) + b * cc) / a;
        let m = CMatrix::from_row_slice(2, 2, &[a, b, cc, d]);
        return GroupElement::new(algebra, m).unwrap();
    }
}
