use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use crossres::circuit::{emit, parse, unitary_of};
use crossres::pulse::{echoed_unitary_analytic, echoed_unitary_numeric, static_zz};
use crossres::transpile::{
    euler_decompose_1q, rewrite_to_basis, synthesize_toffoli_ecr, toffoli_6cnot_nc, toffoli_linear,
    BasisSpec,
};
use crossres::{gates, CouplingMap};
use crossres_bench::{sample_coeffs, sample_transmons};

fn circuits(c: &mut Criterion) {
    let toffoli = toffoli_linear();
    c.bench_function("unitary_of toffoli", |b| {
        b.iter(|| unitary_of(black_box(&toffoli)).unwrap())
    });

    let nc = toffoli_6cnot_nc();
    let ecr = BasisSpec::ecr();
    c.bench_function("rewrite toffoli to ecr", |b| {
        b.iter(|| rewrite_to_basis(black_box(&nc), &ecr).unwrap())
    });

    let text = emit(&rewrite_to_basis(&nc, &ecr).unwrap());
    c.bench_function("parse + emit", |b| {
        b.iter(|| emit(&parse(black_box(&text)).unwrap()))
    });

    let linear = CouplingMap::linear(3).unwrap();
    c.bench_function("synthesize toffoli linear", |b| {
        b.iter(|| synthesize_toffoli_ecr(black_box(&linear)).unwrap())
    });

    let h = gates::matrix_of("h", &[]).unwrap();
    c.bench_function("euler decompose", |b| {
        b.iter(|| euler_decompose_1q(black_box(&h)).unwrap())
    });
}

fn pulse(c: &mut Criterion) {
    let coeffs = sample_coeffs();
    c.bench_function("echo analytic", |b| {
        b.iter(|| echoed_unitary_analytic(black_box(&coeffs), 0.25).unwrap())
    });
    c.bench_function("echo numeric", |b| {
        b.iter(|| echoed_unitary_numeric(black_box(&coeffs), 0.25).unwrap())
    });

    let p = sample_transmons(5);
    c.bench_function("static_zz d=5", |b| {
        b.iter(|| static_zz(black_box(&p)).unwrap())
    });
}

criterion_group!(benches, circuits, pulse);
criterion_main!(benches);
