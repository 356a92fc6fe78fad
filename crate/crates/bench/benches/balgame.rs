use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use balgame::balance::partial_color;
use balgame::{
    balance_middle, canonical_family, enumerate_psum, maximal_vclosed_subset, middle_layer, GameRegion,
    LatticeVector, Window,
};

fn psum(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumerate_psum");
    for n in [3, 4, 5] {
        let f = canonical_family(n).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &f, |b, f| {
            b.iter(|| enumerate_psum(black_box(f), 1 << 22).unwrap())
        });
    }
    g.finish();
}

fn window_solver(c: &mut Criterion) {
    let mut g = c.benchmark_group("maximal_vclosed_subset");
    g.sample_size(10);
    for (n, m) in [(3, 1), (4, 3)] {
        let f = canonical_family(n).unwrap();
        let region = GameRegion::uniform(n, m);
        let w = Window::below(&region, balgame::game::default_margin(&f)).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &(f, w), |b, (f, w)| {
            b.iter(|| maximal_vclosed_subset(black_box(w), f, 1 << 30).unwrap())
        });
    }
    g.finish();
}

fn partial(c: &mut Criterion) {
    let mut g = c.benchmark_group("partial_color");
    for n in [8, 10, 12] {
        let vs: Vec<LatticeVector> = middle_layer(n).unwrap().members().to_vec();
        g.bench_with_input(BenchmarkId::from_parameter(n), &vs, |b, vs| {
            b.iter(|| partial_color(black_box(vs)).unwrap())
        });
    }
    g.finish();
}

fn middle(c: &mut Criterion) {
    let mut g = c.benchmark_group("balance_middle");
    g.sample_size(10);
    for n in [6, 10, 12, 14, 16] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| balance_middle(black_box(n)).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, psum, window_solver, partial, middle);
criterion_main!(benches);
