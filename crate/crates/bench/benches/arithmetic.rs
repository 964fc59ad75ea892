use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use num_bigint::BigInt;

use orderkit::bounds::{evaluate, BoundInputs, EvalMode};
use orderkit::gamma_structures::{count_structures, m2z};
use orderkit::ideals::{class_monoid, class_monoid_with, maximal_of};
use orderkit::intmat::{hnf, snf};
use orderkit::numberfield::make_field_i64;
use orderkit::orders::quadratic_order;
use orderkit::IntMatrix;

fn lattice_reduction(c: &mut Criterion) {
    let rows: Vec<Vec<BigInt>> =
        (0..6).map(|i| (0..6).map(|j| BigInt::from((i * 7 + j * 13 + i * j * 5) % 31 - 15)).collect()).collect();
    let m = IntMatrix::from_rows(rows);
    c.bench_function("hnf 6x6", |b| b.iter(|| hnf(black_box(&m))));
    c.bench_function("snf 6x6", |b| b.iter(|| snf(black_box(&m))));
}

fn class_monoids(c: &mut Criterion) {
    let k = make_field_i64(&[5, 0, 1]).unwrap();
    let gamma = quadratic_order(&k, 6).unwrap();
    let maximal = maximal_of(&gamma).unwrap();
    c.bench_function("class monoid Z[6 sqrt -5]", |b| b.iter(|| class_monoid_with(&gamma, &maximal, false).unwrap()));
    let small = quadratic_order(&make_field_i64(&[3, 0, 1]).unwrap(), 1).unwrap();
    let small_max = maximal_of(&small).unwrap();
    c.bench_function("class monoid with census Z[sqrt -3]", |b| b.iter(|| class_monoid(&small, &small_max).unwrap()));
}

fn structures(c: &mut Criterion) {
    let k = make_field_i64(&[5, 0, 1]).unwrap();
    let gamma = quadratic_order(&k, 1).unwrap();
    let target = m2z();
    c.bench_function("structure count Z[sqrt -5] in M_2(Z)", |b| {
        b.iter(|| count_structures(&gamma, &gamma, &target).unwrap())
    });
}

fn bounds(c: &mut Criterion) {
    let small = BoundInputs { nu: BigInt::from(6), ..BoundInputs::default() };
    c.bench_function("height bound g=1 exact", |b| {
        b.iter(|| evaluate("thm-a-height", black_box(&small), EvalMode::Auto).unwrap())
    });
    let big = BoundInputs { g: 3, nu: BigInt::from(30), ..BoundInputs::default() };
    c.bench_function("height bound g=3 log only", |b| {
        b.iter(|| evaluate("thm-main-height", black_box(&big), EvalMode::LogOnly).unwrap())
    });
}

criterion_group!(benches, lattice_reduction, class_monoids, structures, bounds);
criterion_main!(benches);
