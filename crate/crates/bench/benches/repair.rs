use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dbrepair::{
    brute_force_preferred, maximally_consistent, parse_problem, preferred_repairs,
    PreferenceCriterion, SearchLimits,
};
use dbrepair_bench::{chain, teachers, teachers_text};

fn engine(c: &mut Criterion) {
    let mut group = c.benchmark_group("preferred_repairs/teachers");
    for courses in [10, 50, 200] {
        let db = teachers(courses, 4);
        for criterion in [PreferenceCriterion::Inclusion, PreferenceCriterion::Cardinality] {
            group.bench_with_input(BenchmarkId::new(criterion.as_str(), courses), &db, |b, db| {
                b.iter(|| preferred_repairs(black_box(db), criterion, SearchLimits::default()).unwrap())
            });
        }
    }
    group.finish();

    let mut group = c.benchmark_group("preferred_repairs/chain");
    for n in [8, 32, 128] {
        let db = chain(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &db, |b, db| {
            b.iter(|| preferred_repairs(black_box(db), PreferenceCriterion::Inclusion, SearchLimits::default()).unwrap())
        });
    }
    group.finish();
}

// Both reference routes are exponential in the size of the full candidate
// universe, which for the chain is its length.
fn references(c: &mut Criterion) {
    let mut group = c.benchmark_group("reference");
    for n in [8, 12] {
        let db = chain(n);
        group.bench_with_input(BenchmarkId::new("oracle", n), &db, |b, db| {
            b.iter(|| brute_force_preferred(black_box(db), PreferenceCriterion::Inclusion).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("maximally_consistent", n), &db, |b, db| {
            b.iter(|| maximally_consistent(black_box(db), PreferenceCriterion::Inclusion).unwrap())
        });
    }
    group.finish();
}

fn parsing(c: &mut Criterion) {
    let text = teachers_text(1000, 100);
    c.bench_function("parse_problem/teachers_1000", |b| {
        b.iter(|| parse_problem(black_box(&text)).unwrap())
    });
}

criterion_group!(benches, engine, references, parsing);
criterion_main!(benches);
