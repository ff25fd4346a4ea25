// Copyright 2026 The lievessiot Authors
// SPDX-License-Identifier: Apache-2.0

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lievessiot::automorphic::{flow_with, FlowOptions, Integrator};
use lievessiot::lie::GroupElement;
use lievessiot::reduction::solvable_integrate;
use lievessiot::symmetries::right_symmetry_ansatz;
use lievessiot::timefunc::TimePath;
use lievessiot_bench::{riccati_fixture, triangular_fixture};

fn flows(c: &mut Criterion) {
    let sys = riccati_fixture();
    let path = TimePath::real(0.0, 1.0).unwrap();
    let id = GroupElement::identity(sys.algebra());
    let mut group = c.benchmark_group("flow");
    for integrator in [Integrator::ExpMid, Integrator::Rkmk4] {
        let opts = FlowOptions { integrator, refine: None, ..FlowOptions::with_step(0.01) };
        group.bench_with_input(BenchmarkId::from_parameter(integrator), &opts, |b, opts| {
            b.iter(|| flow_with(&sys, &path, &id, opts).unwrap())
        });
    }
    group.finish();
}

fn quadrature(c: &mut Criterion) {
    let sys = triangular_fixture();
    let path = TimePath::real(0.0, 1.0).unwrap();
    c.bench_function("solvable_integrate", |b| b.iter(|| solvable_integrate(&sys, &path).unwrap()));
}

fn ansatz(c: &mut Criterion) {
    let sys = riccati_fixture();
    c.bench_function("right_symmetry_ansatz", |b| b.iter(|| right_symmetry_ansatz(&sys, 2)));
}

criterion_group!(benches, flows, quadrature, ansatz);
criterion_main!(benches);
