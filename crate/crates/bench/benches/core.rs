//! Benchmarks for the paths that dominate real runs: tuple enumeration,
//! the classification survey, exact moment computation, the symbolic
//! characteristic polynomial, and per-prime point counts.
//!
//! Sample sizes are kept small; the heavy cases take hundreds of
//! milliseconds per iteration and the goal is regression tracking,
//! not microsecond precision.

use std::time::Duration;

use criterion::{criterion_group, criterion_main, Criterion};
use satotate_core::group::{char_poly_symbolic, gamma_matrix};
use satotate_core::hodge::identity_component;
use satotate_core::moments::{exact_moment, TraceExpression, DEFAULT_MOMENT_BUDGET};
use satotate_core::shioda::{
    enumerate_tuples, verify_indecomposable_classification, Stage, DEFAULT_WORK_BUDGET,
};
use satotate_core::sweep::curve_trace;

fn enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumeration");
    group.sample_size(20);
    group.bench_function("members m=25 d=3", |b| {
        b.iter(|| enumerate_tuples(25, 3, Stage::Members).unwrap())
    });
    group.bench_function("candidates m=25 d=3", |b| {
        b.iter(|| enumerate_tuples(25, 3, Stage::Candidates).unwrap())
    });
    group.finish();
}

fn classification(c: &mut Criterion) {
    let mut group = c.benchmark_group("classification");
    group
        .sample_size(10)
        .measurement_time(Duration::from_secs(12));
    group.bench_function("survey m=25 d=1..6", |b| {
        b.iter(|| verify_indecomposable_classification(5, 1..=6, DEFAULT_WORK_BUDGET).unwrap())
    });
    group.finish();
}

fn moments(c: &mut Criterion) {
    let model = identity_component(5).unwrap();
    let gamma = gamma_matrix(5, 2).unwrap();
    let expr = TraceExpression::from_char_poly(&char_poly_symbolic(&model, &gamma, 0).unwrap());
    let mut group = c.benchmark_group("moments");
    group.sample_size(10);
    group.bench_function("exact n=8 p=5 k=0", |b| {
        b.iter(|| exact_moment(&expr, 8, DEFAULT_MOMENT_BUDGET).unwrap())
    });
    group.finish();
}

fn char_poly(c: &mut Criterion) {
    let model = identity_component(5).unwrap();
    let gamma = gamma_matrix(5, 2).unwrap();
    c.bench_function("char_poly symbolic p=5 k=0", |b| {
        b.iter(|| char_poly_symbolic(&model, &gamma, 0).unwrap())
    });
}

fn point_counts(c: &mut Criterion) {
    let mut group = c.benchmark_group("point_counts");
    group.sample_size(30);
    group.bench_function("curve_trace q=99991 m=25", |b| {
        b.iter(|| curve_trace(99991, 25).unwrap())
    });
    group.finish();
}

criterion_group!(
    benches,
    enumeration,
    classification,
    moments,
    char_poly,
    point_counts
);
criterion_main!(benches);
