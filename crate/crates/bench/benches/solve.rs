use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use cvfb_bench::{default_feedback, sample_ladder};
use cvfb_core::scenarios::build_source_network;
use cvfb_core::ScenarioConfig;

fn solve(c: &mut Criterion) {
    let cfg = ScenarioConfig::default();
    let f = cfg.frequency().unwrap();
    let src = build_source_network(&cfg);
    c.bench_function("solve/source", |b| {
        b.iter(|| black_box(&src).solve(f).unwrap())
    });

    let (fb, f) = default_feedback();
    c.bench_function("solve/feedback_loop", |b| {
        b.iter(|| black_box(&fb).solve(f).unwrap())
    });
    c.bench_function("loop_gain_margin/feedback_loop", |b| {
        b.iter(|| black_box(&fb).loop_gain_margin(f).unwrap())
    });

    let mut group = c.benchmark_group("solve/ladder");
    for n in [2, 8, 32] {
        let (net, f) = sample_ladder(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &net, |b, net| {
            b.iter(|| net.solve(f).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, solve);
criterion_main!(benches);
