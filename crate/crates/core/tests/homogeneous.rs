// Copyright 2026 The lievessiot Authors
// SPDX-License-Identifier: Apache-2.0

mod common;

use common::{m2, random_sl2, riccati};
use lievessiot::automorphic::{flow, AutomorphicSystem, CurveGrid, FlowOptions};
use lievessiot::homogeneous::*;
use lievessiot::lie::{adjoint, builtin_algebra, exp, riccati_algebra, AlgebraElement, GroupElement};
use lievessiot::linalg::{c, CMatrix, CVector};
use lievessiot::timefunc::TimePath;
use lievessiot::{Complex64, Error};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn unit_path() -> TimePath {
    TimePath::real(0.0, 1.0).unwrap()
}

fn pline() -> HomogeneousSpace {
    HomogeneousSpace::projective_line(&riccati_algebra()).unwrap()
}

fn basis_coords(k: usize) -> CVector {
    AlgebraElement::basis(&riccati_algebra(), k).coords().clone()
}

fn span_of(vs: &[CVector]) -> StabilizerAlgebra {
    StabilizerAlgebra::from_coords(&riccati_algebra(), vs)
}

#[test]
fn projective_line_needs_two_by_two() {
    assert!(HomogeneousSpace::projective_line(&builtin_algebra("gl", 3).unwrap()).is_err());
}

#[test]
fn act_examples() {
    let alg = riccati_algebra();
    let m = pline();
    let x = SpacePoint::finite(c(0.3, -1.0));
    assert!(act(&m, &GroupElement::identity(&alg), &x).unwrap().distance(&x) < 1e-16);
    let f = c(2.5, 0.5);
    let u = GroupElement::new(&alg, CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), f, c(0.0, 0.0), c(1.0, 0.0)])).unwrap();
    assert!((act(&m, &u, &SpacePoint::finite(c(0.0, 0.0))).unwrap().affine().unwrap() - f).norm() < 1e-15);
    let w = GroupElement::new(&alg, m2([0.0, 1.0, -1.0, 0.0])).unwrap();
    let y = act(&m, &w, &SpacePoint::infinity()).unwrap();
    assert_eq!(y.affine(), Some(c(0.0, 0.0)));
    let back = act(&m, &w, &SpacePoint::finite(c(0.0, 0.0))).unwrap();
    assert!(back.is_infinity());
}

#[test]
fn fundamental_field_examples() {
    let alg = riccati_algebra();
    let m = pline();
    let x = c(0.7, 0.2);
    let p = SpacePoint::finite(x);
    let expect = [c(1.0, 0.0), x, x * x];
    for k in 0..3 {
        let v = fundamental_field(&m, &AlgebraElement::basis(&alg, k), &p).unwrap();
        assert!((v[0] - expect[k]).norm() < 1e-15);
    }
    assert_eq!(fundamental_field(&m, &AlgebraElement::zero(&alg), &p).unwrap()[0], c(0.0, 0.0));
    let gl2 = builtin_algebra("gl", 2).unwrap();
    let lin = HomogeneousSpace::linear(&gl2);
    let v = fundamental_field(&lin, &AlgebraElement::basis(&gl2, 1), &SpacePoint::vector(&[c(0.0, 0.0), c(1.0, 0.0)])).unwrap();
    assert_eq!(v.as_slice(), &[c(1.0, 0.0), c(0.0, 0.0)]);
}

fn tan_shift(t: f64, x0: f64) -> SpacePoint {
    let s = t + x0.atan();
    SpacePoint::projective(c(s.sin(), 0.0), c(s.cos(), 0.0)).unwrap()
}

#[test]
fn induced_riccati_solutions_are_tangents() {
    let sys = riccati("1", "0", "1");
    for x0 in [0.0, 1.0, -2.0] {
        let curve = induce_and_solve(&sys, &pline(), &SpacePoint::finite(c(x0, 0.0)), &unit_path(), &FlowOptions::with_step(0.01)).unwrap();
        for (t, x) in curve.times().iter().zip(curve.points()) {
            assert!(x.distance(&tan_shift(t.re, x0)) <= 1e-6, "x0={x0} t={t}");
        }
        let mid = curve.value_at(c(0.5, 0.0)).unwrap();
        assert!(mid.distance(&tan_shift(0.5, x0)) <= 1e-6);
    }
}

#[test]
fn induced_from_infinity() {
    let sys = riccati("1", "0", "1");
    let curve = induce_and_solve(&sys, &pline(), &SpacePoint::infinity(), &unit_path(), &FlowOptions::with_step(0.01)).unwrap();
    // x = tan(t + π/2) = -cot t.
    let x = curve.value_at(c(1.0, 0.0)).unwrap().affine().unwrap();
    assert!((x + 1.0 / 1f64.tan()).norm() < 1e-6);
}

#[test]
fn induced_zero_system_is_constant() {
    let sys = riccati("0", "0", "0");
    let x0 = SpacePoint::finite(c(1.5, 0.5));
    let curve = induce_and_solve(&sys, &pline(), &x0, &unit_path(), &FlowOptions::with_step(0.1)).unwrap();
    assert!(curve.points().iter().all(|x| x.distance(&x0) < 1e-15));
}

#[test]
fn induced_linear_solution_is_fundamental_matrix_times_x0() {
    let gl2 = builtin_algebra("gl", 2).unwrap();
    let sys = AutomorphicSystem::parse(&gl2, &["t", "1", "-1", "1/(t+1)"]).unwrap();
    let lin = HomogeneousSpace::linear(&gl2);
    let x0 = SpacePoint::vector(&[c(1.0, 0.0), c(-2.0, 1.0)]);
    let u = flow(&sys, &unit_path(), &GroupElement::identity(&gl2), 0.01).unwrap();
    let x = induce_from_flow(&sys, &lin, &x0, &u).unwrap();
    let SpacePoint::Vector(v0) = &x0 else { unreachable!() };
    for (k, p) in x.points().iter().enumerate() {
        assert!(p.distance(&SpacePoint::Vector(&u.values()[k] * v0)) < 1e-14);
    }
    assert!(verify_point_curve(&sys, &x).unwrap() <= 1e-5);
}

#[test]
fn induced_adjoint_solution() {
    let alg = riccati_algebra();
    let sys = riccati("t", "1", "-1");
    let adj = HomogeneousSpace::adjoint(&alg);
    let x0 = SpacePoint::Element(basis_coords(1));
    let curve = induce_and_solve(&sys, &adj, &x0, &unit_path(), &FlowOptions::with_step(0.01)).unwrap();
    assert!(verify_point_curve(&sys, &curve).unwrap() <= 1e-5);
}

#[test]
fn cross_check_detects_wrong_generator() {
    let alg = riccati_algebra();
    let u = flow(&riccati("1", "0", "1"), &unit_path(), &GroupElement::identity(&alg), 0.01).unwrap();
    let r = induce_from_flow(&riccati("1", "0", "2"), &pline(), &SpacePoint::finite(c(0.0, 0.0)), &u);
    assert!(matches!(r, Err(Error::CrossCheckFailure { .. })));
}

#[test]
fn isotropy_examples() {
    let alg = riccati_algebra();
    let iso0 = isotropy_algebra(&pline(), &SpacePoint::finite(c(0.0, 0.0))).unwrap();
    assert!(iso0.gap(&span_of(&[basis_coords(1), basis_coords(2)])) <= 1e-12);
    assert!(iso0.closure_residual() <= 1e-8);
    let adj = HomogeneousSpace::adjoint(&alg);
    let iso = isotropy_algebra(&adj, &SpacePoint::Element(basis_coords(1))).unwrap();
    assert!(iso.gap(&span_of(&[basis_coords(1)])) <= 1e-12);
    let gl3 = builtin_algebra("gl", 3).unwrap();
    let lin = HomogeneousSpace::linear(&gl3);
    assert_eq!(isotropy_algebra(&lin, &SpacePoint::vector(&[c(0.0, 0.0); 3])).unwrap().dim(), 9);
    for v in iso0.coords() {
        assert!((v.norm() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn stabilizer_intersection_examples() {
    let alg = riccati_algebra();
    assert_eq!(stabilizer_intersection(&alg, &[]).unwrap().dim(), 3);
    let x = SpacePoint::finite(c(0.5, 0.1));
    let single = stabilizer_intersection(&alg, &[(pline(), x.clone())]).unwrap();
    assert!(single.gap(&isotropy_algebra(&pline(), &x).unwrap()) < 1e-12);
    let both = stabilizer_intersection(
        &alg,
        &[(pline(), SpacePoint::finite(c(0.0, 0.0))), (pline(), SpacePoint::infinity())],
    )
    .unwrap();
    assert!(both.gap(&span_of(&[basis_coords(1)])) <= 1e-12);
    assert!(both.singular_gap() > 1e6);
}

#[test]
fn isotropy_oracle_by_direct_solve() {
    // Field at x of aB1 + bB2 + cB3 is a + b x + c x²; its kernel is spanned
    // by (−x, 1, 0) and (0, −x, 1).
    let x = c(1.3, -0.4);
    let iso = isotropy_algebra(&pline(), &SpacePoint::finite(x)).unwrap();
    let oracle = span_of(&[
        CVector::from_vec(vec![-x, c(1.0, 0.0), c(0.0, 0.0)]),
        CVector::from_vec(vec![c(0.0, 0.0), -x, c(1.0, 0.0)]),
    ]);
    assert!(iso.gap(&oracle) < 1e-12);
}

fn linear_fundamental() -> (AutomorphicSystem, Vec<PointCurve>) {
    let gl2 = builtin_algebra("gl", 2).unwrap();
    let sys = AutomorphicSystem::parse(&gl2, &["1", "t", "-t", "2"]).unwrap();
    let lin = HomogeneousSpace::linear(&gl2);
    let u = flow(&sys, &unit_path(), &GroupElement::identity(&gl2), 0.01).unwrap();
    let e = [SpacePoint::vector(&[c(1.0, 0.0), c(0.0, 0.0)]), SpacePoint::vector(&[c(0.0, 0.0), c(1.0, 0.0)])];
    let curves = e.iter().map(|x| induce_from_flow(&sys, &lin, x, &u).unwrap()).collect();
    (sys, curves)
}

#[test]
fn linear_superposition_examples() {
    let (sys, fund) = linear_fundamental();
    let e0 = linear_superposition(&fund, &[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
    assert!(e0.distance_to(&fund[0]).unwrap() < 1e-15);
    let zero = linear_superposition(&fund, &[c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
    assert!(zero.points().iter().all(|p| p.distance(&SpacePoint::vector(&[c(0.0, 0.0); 2])) == 0.0));
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let lam = [c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)), c(rng.gen_range(-2.0..2.0), 0.3)];
    let x = linear_superposition(&fund, &lam).unwrap();
    assert!(verify_point_curve(&sys, &x).unwrap() <= 1e-5);
    let dup = [fund[0].clone(), fund[0].clone()];
    assert!(matches!(linear_superposition(&dup, &lam), Err(Error::DependentSolutions { .. })));
}

#[test]
fn riccati_superposition_values() {
    let p = |x: f64| SpacePoint::finite(c(x, 0.0));
    let x3 = riccati_superposition(&p(0.0), &p(1.0), &p(2.0), c(0.0, 0.0)).unwrap();
    assert!(x3.distance(&p(2.0)) < 1e-15);
    let x = riccati_superposition(&p(0.0), &p(1.0), &p(2.0), c(1.0, 0.0)).unwrap();
    assert!(x.distance(&p(1.0)) < 1e-15);
    for lam in [0.5, -3.0, 7.0] {
        // x1 = 0 reduces the formula to 2/(1+λ).
        let x = riccati_superposition(&p(0.0), &p(1.0), &p(2.0), c(lam, 0.0)).unwrap();
        assert!(x.distance(&p(2.0 / (1.0 + lam))) < 1e-15);
    }
    assert!(riccati_superposition(&p(0.0), &p(0.0), &p(2.0), c(1.0, 0.0)).is_err());
    let inf = riccati_superposition(&p(0.0), &p(1.0), &p(2.0), c(-1.0, 0.0)).unwrap();
    assert!(inf.is_infinity());
}

fn tangent_curve(x0: f64) -> PointCurve {
    let grid = CurveGrid::new(&unit_path(), 0.01).unwrap();
    PointCurve::from_fn(&pline(), grid, move |t| {
        let s = t + x0.atan();
        Ok(SpacePoint::projective(s.sin(), s.cos()).unwrap())
    })
    .unwrap()
}

#[test]
fn riccati_superposition_solves_equation() {
    let sys = riccati("1", "0", "1");
    let (a, b, d) = (tangent_curve(0.0), tangent_curve(1.0), tangent_curve(-2.0));
    let x = riccati_superposition_curves(&a, &b, &d, c(0.7, 0.2)).unwrap();
    assert!(verify_point_curve(&sys, &x).unwrap() <= 1e-5);
}

#[test]
fn anharmonic_examples() {
    let p = |x: f64| SpacePoint::finite(c(x, 0.0));
    let r = anharmonic_ratio(&p(0.0), &p(1.0), &p(2.0), &p(3.0)).unwrap();
    assert!((r - c(-1.0 / 3.0, 0.0)).norm() <= 1e-12);
    assert_eq!(anharmonic_ratio(&p(0.0), &p(1.0), &p(2.0), &p(2.0)).unwrap(), c(0.0, 0.0));
    assert!(matches!(anharmonic_ratio(&p(0.0), &p(1.0), &p(1.0), &p(3.0)), Err(Error::DegenerateQuadruple)));
    let r_inf = anharmonic_ratio(&p(0.0), &p(1.0), &SpacePoint::infinity(), &p(3.0)).unwrap();
    // (x1−x2)/(x1−x4) as x3 → ∞.
    assert!((r_inf - c(1.0 / 3.0, 0.0)).norm() < 1e-15);
}

#[test]
fn anharmonic_ratio_constant_along_flow() {
    let sys = riccati("t", "1-t", "1/(t+2)");
    let alg = riccati_algebra();
    let u = flow(&sys, &unit_path(), &GroupElement::identity(&alg), 0.01).unwrap();
    let curves: Vec<PointCurve> = [0.0, 1.0, 2.0, 3.0]
        .iter()
        .map(|&x| induce_from_flow(&sys, &pline(), &SpacePoint::finite(c(x, 0.0)), &u).unwrap())
        .collect();
    let ratios: Vec<Complex64> = (0..u.times().len())
        .map(|k| anharmonic_ratio(&curves[0].points()[k], &curves[1].points()[k], &curves[2].points()[k], &curves[3].points()[k]).unwrap())
        .collect();
    let variation = ratios.iter().map(|r| (r - ratios[0]).norm()).fold(0.0, f64::max);
    assert!(variation <= 1e-6);
    assert!((ratios[0] - c(-1.0 / 3.0, 0.0)).norm() <= 1e-12);
}

#[test]
fn json_roundtrip() {
    let alg = riccati_algebra();
    let m = pline();
    for x in [SpacePoint::finite(c(1.5, -2.0)), SpacePoint::infinity()] {
        let j = x.to_json();
        assert!(SpacePoint::from_json(&m, &j).unwrap().distance(&x) < 1e-16);
    }
    assert_eq!(SpacePoint::infinity().to_json(), serde_json::json!("inf"));
    let adj = HomogeneousSpace::adjoint(&alg);
    let e = SpacePoint::Element(basis_coords(2));
    assert_eq!(SpacePoint::from_json(&adj, &e.to_json()).unwrap(), e);
    let lin = HomogeneousSpace::linear(&alg);
    assert!(SpacePoint::from_json(&lin, &serde_json::json!([[1.0, 0.0]])).is_err());
}

fn arb_point() -> impl Strategy<Value = SpacePoint> {
    (-3.0..3.0f64, -3.0..3.0f64, 0u8..8).prop_map(|(re, im, k)| {
        if k == 0 {
            SpacePoint::infinity()
        } else {
            SpacePoint::finite(c(re, im))
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn action_axioms(seed in any::<u64>(), x in arb_point()) {
        let alg = riccati_algebra();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (s, t) = (random_sl2(&mut rng, &alg), random_sl2(&mut rng, &alg));
        let m = pline();
        let lhs = act(&m, &s.mul(&t), &x).unwrap();
        let rhs = act(&m, &s, &act(&m, &t, &x).unwrap()).unwrap();
        prop_assert!(lhs.distance(&rhs) <= 1e-10);
        prop_assert!(act(&m, &GroupElement::identity(&alg), &x).unwrap().distance(&x) <= 1e-10);
        let adj = HomogeneousSpace::adjoint(&alg);
        let v = SpacePoint::Element(CVector::from_vec(vec![c(1.0, 0.5), c(-0.3, 0.0), c(2.0, 1.0)]));
        let lhs = act(&adj, &s.mul(&t), &v).unwrap();
        let rhs = act(&adj, &s, &act(&adj, &t, &v).unwrap()).unwrap();
        prop_assert!(lhs.distance(&rhs) <= 1e-10);
    }

    #[test]
    fn fundamental_fields_are_equivariant(seed in any::<u64>(), re in -1.0..1.0f64, im in -1.0..1.0f64) {
        let alg = riccati_algebra();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_sl2(&mut rng, &alg);
        let xel = AlgebraElement::from_slice(&alg, &[c(rng.gen_range(-1.0..1.0), 0.0), c(rng.gen_range(-1.0..1.0), 0.2), c(0.4, rng.gen_range(-1.0..1.0))]);
        let m = pline();
        let x = SpacePoint::finite(c(re, im));
        let sx = act(&m, &s, &x).unwrap();
        let (field, chart) = fundamental_field_in_chart(&m, &adjoint(&s, &xel).unwrap(), &sx).unwrap();
        let coord = |p: SpacePoint| match (p, chart) {
            (SpacePoint::Projective { p, q }, Some(Chart::Affine)) => p / q,
            (SpacePoint::Projective { p, q }, _) => q / p,
            _ => unreachable!(),
        };
        let eps = 1e-4;
        let moved = |e: f64| coord(act(&m, &s, &act(&m, &exp(&xel.scale(c(e, 0.0))), &x).unwrap()).unwrap());
        let fd = (moved(-2.0 * eps) - moved(2.0 * eps) + (moved(eps) - moved(-eps)) * 8.0) / (12.0 * eps);
        prop_assert!((fd - field[0]).norm() <= 1e-6 * (1.0 + field[0].norm()));
    }

    #[test]
    fn isotropy_is_a_subalgebra(x in arb_point()) {
        let iso = isotropy_algebra(&pline(), &x).unwrap();
        prop_assert_eq!(iso.dim(), 2);
        prop_assert!(iso.closure_residual() <= 1e-8);
    }
}
