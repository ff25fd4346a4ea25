// Copyright 2026 The lievessiot Authors
// SPDX-License-Identifier: Apache-2.0

mod common;

use common::{close, m2, random_sl2, riccati};
use lievessiot::automorphic::*;
use lievessiot::lie::{adjoint, builtin_algebra, riccati_algebra, AlgebraElement, GroupElement};
use lievessiot::linalg::{c, frobenius, inverse, CMatrix};
use lievessiot::timefunc::{parse, RationalMatrix, TimePath};
use lievessiot::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn unit_path() -> TimePath {
    TimePath::real(0.0, 1.0).unwrap()
}

fn rotation_system() -> AutomorphicSystem {
    riccati("1", "0", "1")
}

fn rotation(t: f64) -> CMatrix {
    m2([t.cos(), t.sin(), -t.sin(), t.cos()])
}

#[test]
fn evaluate_rotation_generator() {
    let x = evaluate_algebra(&rotation_system(), c(0.7, 0.2)).unwrap();
    assert!(close(x.matrix(), &m2([0.0, 1.0, -1.0, 0.0]), 1e-15));
}

#[test]
fn evaluate_zero_and_pole() {
    let sys = riccati("0", "0", "0");
    assert_eq!(evaluate_algebra(&sys, c(3.0, 0.0)).unwrap().norm(), 0.0);
    let gl1 = builtin_algebra("gl", 1).unwrap();
    let s = AutomorphicSystem::parse(&gl1, &["1/t"]).unwrap();
    assert_eq!(evaluate_algebra(&s, c(2.0, 0.0)).unwrap().coords()[0], c(0.5, 0.0));
    assert!(matches!(evaluate_algebra(&s, c(0.0, 0.0)), Err(Error::PoleError { .. })));
}

#[test]
fn coefficient_count_must_match() {
    assert!(AutomorphicSystem::parse(&riccati_algebra(), &["1", "2"]).is_err());
}

#[test]
fn flow_rotation() {
    let alg = riccati_algebra();
    let curve = flow(&rotation_system(), &unit_path(), &GroupElement::identity(&alg), 0.01).unwrap();
    assert!(close(curve.last(), &rotation(1.0), 1e-6));
    assert!(curve.max_constraint_residual() <= 1e-6);
    let rk = flow_with(
        &rotation_system(),
        &unit_path(),
        &GroupElement::identity(&alg),
        &FlowOptions { integrator: Integrator::Rkmk4, ..FlowOptions::with_step(0.05) },
    )
    .unwrap();
    assert!(close(rk.last(), &rotation(1.0), 1e-6));
    // Dense output between nodes.
    let mid = curve.value_at(c(0.123456, 0.0)).unwrap();
    assert!(close(&mid, &rotation(0.123456), 1e-6));
}

#[test]
fn zero_system_flow_is_constant() {
    let alg = riccati_algebra();
    let g0 = GroupElement::new(&alg, m2([2.0, 1.0, 1.0, 1.0])).unwrap();
    let curve = flow(&riccati("0", "0", "0"), &unit_path(), &g0, 0.1).unwrap();
    for v in curve.values() {
        assert!(close(v, g0.matrix(), 1e-14));
    }
}

#[test]
fn abelian_flow_matches_power() {
    let alg = builtin_algebra("diagonal", 2).unwrap();
    let sys = AutomorphicSystem::parse(&alg, &["1/t", "0"]).unwrap();
    let opts = FlowOptions { integrator: Integrator::Rkmk4, refine: Some(1e-9), ..FlowOptions::with_step(0.05) };
    let curve = flow_with(&sys, &TimePath::real(1.0, 2.0).unwrap(), &GroupElement::identity(&alg), &opts).unwrap();
    assert!(close(curve.last(), &m2([2.0, 0.0, 0.0, 1.0]), 1e-8));
}

#[test]
fn flow_rejects_pole_on_path() {
    let alg = builtin_algebra("diagonal", 2).unwrap();
    let sys = AutomorphicSystem::parse(&alg, &["1/t", "0"]).unwrap();
    let r = flow(&sys, &TimePath::real(-1.0, 1.0).unwrap(), &GroupElement::identity(&alg), 0.1);
    assert!(matches!(r, Err(Error::PoleOnPath { .. })));
}

#[test]
fn flow_along_complex_contour() {
    // u' = u/t from 1 to -1 through the upper half plane: u = exp(iπ).
    let gl1 = builtin_algebra("gl", 1).unwrap();
    let sys = AutomorphicSystem::parse(&gl1, &["1/t"]).unwrap();
    let path = TimePath::new(vec![c(1.0, 0.0), c(1.0, 1.0), c(-1.0, 1.0), c(-1.0, 0.0)]).unwrap();
    let opts = FlowOptions { integrator: Integrator::Rkmk4, ..FlowOptions::with_step(0.05) };
    let curve = flow_with(&sys, &path, &GroupElement::identity(&gl1), &opts).unwrap();
    assert!((curve.last()[(0, 0)] - c(-1.0, 0.0)).norm() < 1e-6);
}

#[test]
fn log_derivative_of_constant_and_unipotent_curves() {
    let alg = riccati_algebra();
    let grid = CurveGrid::new(&unit_path(), 0.1).unwrap();
    let k = GroupCurve::constant(grid.clone(), &GroupElement::identity(&alg));
    assert_eq!(k.logarithmic_derivative(c(0.5, 0.0)).unwrap().norm(), 0.0);
    let u = GroupCurve::from_fn(&alg, grid, |t| {
        Ok(CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), t, c(0.0, 0.0), c(1.0, 0.0)]))
    })
    .unwrap();
    assert!(!u.has_closed_generator());
    for t in [0.0, 0.05, 0.5, 1.0] {
        let ld = u.logarithmic_derivative(c(t, 0.0)).unwrap();
        assert!(close(ld.matrix(), &m2([0.0, 1.0, 0.0, 0.0]), 1e-12));
    }
    assert!(matches!(u.logarithmic_derivative(c(2.0, 0.0)), Err(Error::OutOfDomain { .. })));
}

#[test]
fn log_derivative_of_flow_recovers_generator() {
    let alg = riccati_algebra();
    let sys = riccati("t", "1/(t+2)", "1-t^2");
    let curve = flow(&sys, &unit_path(), &GroupElement::identity(&alg), 0.01).unwrap();
    for t in [0.0, 0.3, 0.77, 1.0] {
        let ld = logarithmic_derivative(&curve, c(t, 0.0)).unwrap();
        let a = sys.evaluate_algebra(c(t, 0.0)).unwrap();
        assert!(frobenius(&(ld.matrix() - a.matrix())) <= 1e-6, "t={t}");
    }
}

#[test]
fn closed_generator_takes_precedence() {
    let alg = riccati_algebra();
    let grid = CurveGrid::new(&unit_path(), 0.1).unwrap();
    let x = m2([0.0, 1.0, -1.0, 0.0]);
    let x2 = x.clone();
    let curve = GroupCurve::from_fn(&alg, grid, move |t| Ok(lievessiot::linalg::expm(&(&x2 * t))))
        .unwrap()
        .with_generator(move |_| Ok(x.clone()));
    let ld = curve.logarithmic_derivative(c(0.4, 0.0)).unwrap();
    assert_eq!(ld.matrix(), &m2([0.0, 1.0, -1.0, 0.0]));
}

#[test]
fn verify_solution_examples() {
    let alg = riccati_algebra();
    let sys = rotation_system();
    let curve = flow(&sys, &unit_path(), &GroupElement::identity(&alg), 0.01).unwrap();
    assert!(verify_solution(&sys, &curve).unwrap() <= 1e-5);
    let k = GroupCurve::constant(curve.grid().clone(), &GroupElement::identity(&alg));
    let r = verify_solution(&sys, &k).unwrap();
    assert!((r - 2f64.sqrt()).abs() < 1e-14);
    let tau = GroupElement::new(&alg, m2([1.0, 1.0, 0.0, 1.0])).unwrap();
    assert!(verify_solution(&sys, &curve.right_translate(&tau)).unwrap() <= 1e-5);
}

#[test]
fn right_translate_relates_flows() {
    let alg = riccati_algebra();
    let sys = riccati("t", "1", "-1/(t+3)");
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let g1 = random_sl2(&mut rng, &alg);
    let g2 = random_sl2(&mut rng, &alg);
    let s1 = flow(&sys, &unit_path(), &g1, 0.01).unwrap();
    let s2 = flow(&sys, &unit_path(), &g2, 0.01).unwrap();
    let moved = s1.right_translate(&g1.inverse().mul(&g2));
    assert!(moved.distance_to(&s2).unwrap() <= 1e-6);
    let same = s1.right_translate(&GroupElement::identity(&alg));
    assert_eq!(same.values(), s1.values());
}

#[test]
fn exact_gauge_by_identity_and_constant() {
    let sys = riccati("t^2", "1/(t-3)", "2");
    let same = gauge_transform_rational(&sys, &RationalMatrix::identity(2)).unwrap();
    assert_eq!(same.coeffs(), sys.coeffs());
    let tau = GroupElement::new(&riccati_algebra(), m2([2.0, 1.0, 1.0, 1.0])).unwrap();
    let b = gauge_transform_rational(&sys, &RationalMatrix::constant(tau.matrix()).unwrap()).unwrap();
    for t in [0.2, 1.5] {
        let expect = adjoint(&tau, &sys.evaluate_algebra(c(t, 0.0)).unwrap()).unwrap();
        let got = b.evaluate_algebra(c(t, 0.0)).unwrap();
        assert!(close(got.matrix(), expect.matrix(), 1e-12));
    }
}

#[test]
fn exact_gauge_triangularizes_riccati() {
    // f = t + 1/t solves x' = (1 - t²) + 2t x - x².
    let sys = riccati("1-t^2", "2t", "-1");
    let f = parse("t+1/t").unwrap();
    let neg = f.scale(&lievessiot::exact::exact_int(-1));
    let sigma_inv = RationalMatrix::from_entries(
        2,
        vec![parse("1").unwrap(), neg, parse("0").unwrap(), parse("1").unwrap()],
    );
    let b = gauge_transform_rational(&sys, &sigma_inv).unwrap();
    let m = b.rational_matrix();
    let expect = RationalMatrix::from_entries(
        2,
        ["-1/t", "0", "1", "1/t"].iter().map(|s| parse(s).unwrap()).collect(),
    );
    assert_eq!(m, expect);
}

#[test]
fn exact_gauge_projection_failure() {
    let sl2 = riccati_algebra();
    let sys = AutomorphicSystem::parse(&sl2, &["0", "0", "0"]).unwrap();
    // diag(t, 1) has a logarithmic derivative with nonzero trace.
    let s = RationalMatrix::from_entries(2, ["t", "0", "0", "1"].iter().map(|e| parse(e).unwrap()).collect());
    assert!(matches!(gauge_transform_rational(&sys, &s), Err(Error::ProjectionFailure { .. })));
}

#[test]
fn sampled_gauge_matches_exact() {
    let alg = riccati_algebra();
    let sys = riccati("t", "1", "t^2");
    let grid = CurveGrid::new(&unit_path(), 0.01).unwrap();
    let sec = RationalMatrix::from_entries(2, ["1", "t^2", "0", "1"].iter().map(|e| parse(e).unwrap()).collect());
    let sec2 = sec.clone();
    let curve = GroupCurve::from_fn(&alg, grid, move |t| sec2.eval(t)).unwrap();
    let sampled = gauge_transform(&sys, &curve);
    let exact = gauge_transform_rational(&sys, &sec).unwrap();
    for t in [0.0, 0.33, 1.0] {
        let a = sampled.evaluate(c(t, 0.0)).unwrap();
        let b = exact.evaluate_algebra(c(t, 0.0)).unwrap();
        assert!(close(a.matrix(), b.matrix(), 1e-8));
    }
    let id = GroupCurve::constant(CurveGrid::new(&unit_path(), 0.1).unwrap(), &GroupElement::identity(&alg));
    let same = gauge_transform(&sys, &id);
    let x = same.evaluate(c(0.4, 0.0)).unwrap();
    assert!(close(x.matrix(), sys.evaluate_algebra(c(0.4, 0.0)).unwrap().matrix(), 1e-15));
}

#[test]
fn gauge_composition_with_constant_factors() {
    let alg = riccati_algebra();
    let sys = riccati("t", "1", "-1/(t+3)");
    let sigma = flow(&sys, &unit_path(), &GroupElement::identity(&alg), 0.01).unwrap();
    let tau = GroupElement::new(&alg, m2([1.0, 2.0, 0.5, 2.0])).unwrap();
    let k = GroupCurve::constant(sigma.grid().clone(), &tau);
    assert!(gauge_composition_check(&sigma, &k).unwrap() <= 1e-7);
    assert!(gauge_composition_check(&k, &sigma).unwrap() <= 1e-7);
}

fn composition_residual(step: f64, seed: u64) -> f64 {
    let alg = riccati_algebra();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s1 = riccati("1+t", "t^2", "-1");
    let s2 = riccati("2", "1/(t+2)", "t");
    let opts = FlowOptions { refine: None, ..FlowOptions::with_step(step) };
    let a = flow_with(&s1, &unit_path(), &random_sl2(&mut rng, &alg), &opts).unwrap();
    let b = flow_with(&s2, &unit_path(), &random_sl2(&mut rng, &alg), &opts).unwrap();
    gauge_composition_check(&a, &b).unwrap()
}

#[test]
fn gauge_composition_of_random_flows_converges() {
    assert!(composition_residual(1e-3, 1) <= 1e-6);
    let coarse = composition_residual(0.04, 1);
    let fine = composition_residual(0.02, 1);
    let order = (coarse / fine).log2();
    assert!(order >= 1.8, "order {order}");
}

#[test]
fn inverse_curve_formula() {
    let alg = riccati_algebra();
    let sys = riccati("t", "2", "1/(t-3)");
    let s = flow(&sys, &unit_path(), &GroupElement::identity(&alg), 0.005).unwrap();
    let inv = s.inverse();
    for t in [0.1, 0.5, 0.9] {
        let tt = c(t, 0.0);
        let lhs = inv.log_derivative_matrix(tt).unwrap();
        let si = inverse(&s.value_at(tt).unwrap()).unwrap();
        let rhs = -(&si * s.log_derivative_matrix(tt).unwrap() * s.value_at(tt).unwrap());
        assert!(close(&lhs, &rhs, 1e-6));
    }
}

#[test]
fn csv_layout() {
    let alg = riccati_algebra();
    let grid = CurveGrid::new(&unit_path(), 0.5).unwrap();
    let k = GroupCurve::constant(grid, &GroupElement::identity(&alg));
    let csv = k.to_csv();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "t_re,t_im,m00_re,m00_im,m01_re,m01_im,m10_re,m10_im,m11_re,m11_im");
    assert_eq!(lines.len(), 4);
    let row: Vec<f64> = lines[2].split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(row[0], 0.5);
    assert_eq!(row[2], 1.0);
}

#[test]
fn step_counter_tracks_generic_steps() {
    let alg = riccati_algebra();
    reset_generic_step_count();
    let opts = FlowOptions { refine: None, ..FlowOptions::with_step(0.1) };
    flow_with(&rotation_system(), &unit_path(), &GroupElement::identity(&alg), &opts).unwrap();
    assert_eq!(generic_step_count(), 10);
}

#[test]
fn algebra_element_roundtrip() {
    let alg = riccati_algebra();
    let x = AlgebraElement::from_slice(&alg, &[c(1.0, 0.0), c(0.0, 2.0), c(3.0, 0.0)]);
    assert_eq!(x.matrix()[(0, 0)], c(0.0, 1.0));
    assert_eq!(x.matrix()[(1, 0)], c(-3.0, 0.0));
}
