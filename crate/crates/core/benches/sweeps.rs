//! Parallel versus sequential runs of the heavier sweeps. Without the
//! `parallel` feature both variants take the sequential path.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use silting_core::corpus;
use silting_core::group::{hom_count, presentation_from_poset, FiniteGroup};
use silting_core::model::explore_silt_poset;
use silting_core::par::set_parallel;
use silting_core::picture::{build_picture_category, check_associativity, PictureOptions};

const MODES: [(&str, bool); 2] = [("sequential", false), ("parallel", true)];

fn picture(c: &mut Criterion) {
    let mut g = c.benchmark_group("picture_lambda3");
    g.sample_size(10);
    let model = corpus::lambda(3);
    for (name, on) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            set_parallel(on);
            b.iter(|| build_picture_category(black_box(&model), PictureOptions::default()).unwrap())
        });
    }
    g.finish();
}

fn associativity(c: &mut Criterion) {
    let mut g = c.benchmark_group("associativity_lambda3");
    g.sample_size(10);
    let cat = build_picture_category(&corpus::lambda(3), PictureOptions::default()).unwrap();
    for (name, on) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            set_parallel(on);
            b.iter(|| check_associativity(black_box(&cat)))
        });
    }
    g.finish();
}

fn hom_counts(c: &mut Criterion) {
    let mut g = c.benchmark_group("hom_count_s3");
    let poset = explore_silt_poset(corpus::lambda(3).as_ref(), 10_000).unwrap();
    let pres = presentation_from_poset(&poset).unwrap().presentation;
    let s3 = FiniteGroup::symmetric(3);
    for (name, on) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            set_parallel(on);
            b.iter(|| hom_count(black_box(&pres), &s3, u64::MAX).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, picture, associativity, hom_counts);
criterion_main!(benches);
