use criterion::{black_box, criterion_group, criterion_main, Criterion};

use growtight::metric::{four_point_delta, lemma_suite, DeltaMode, FiniteMetricSpace};
use growtight::FreeGroup;

fn delta(c: &mut Criterion) {
    let tree = FiniteMetricSpace::cayley_ball(&FreeGroup::new(2), 2);
    let cycle = FiniteMetricSpace::cycle(24);
    let mut group = c.benchmark_group("four_point_delta");
    group.sample_size(10);
    group.bench_function("tree ball R = 2, exhaustive", |b| {
        b.iter(|| four_point_delta(black_box(&tree), DeltaMode::Exhaustive))
    });
    group.bench_function("cycle of 24, exhaustive", |b| {
        b.iter(|| four_point_delta(black_box(&cycle), DeltaMode::Exhaustive))
    });
    let big = FiniteMetricSpace::cayley_ball(&FreeGroup::new(2), 5);
    group.bench_function("tree ball R = 5, 100k samples", |b| {
        b.iter(|| {
            four_point_delta(
                black_box(&big),
                DeltaMode::Sampled {
                    samples: 100_000,
                    seed: 1,
                },
            )
        })
    });
    group.finish();
}

fn lemmas(c: &mut Criterion) {
    let cycle = FiniteMetricSpace::cycle(10);
    let mut group = c.benchmark_group("lemma_suite");
    group.sample_size(10);
    group.bench_function("cycle of 10", |b| {
        b.iter(|| lemma_suite(black_box(&cycle), num_rational::Rational64::from_integer(1)))
    });
    group.finish();
}

criterion_group!(benches, delta, lemmas);
criterion_main!(benches);
