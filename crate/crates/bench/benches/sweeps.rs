use std::f64::consts::PI;

use criterion::{criterion_group, criterion_main, Criterion};
use cvfb_cli::{run_scenario, Scenario};
use cvfb_core::scenarios::{
    detuning_sweep, optimize_detuning, reflectivity_sweep, DetuningObjective,
};
use cvfb_core::{ScenarioConfig, SweepSpec};

fn sweeps(c: &mut Criterion) {
    let cfg = ScenarioConfig::default();
    let thetas = SweepSpec::new("feedback.detuning", -PI, PI, 201)
        .unwrap()
        .points();
    let rs = SweepSpec::new("sample.r", 0.0, 0.5, 51).unwrap().points();

    let mut g = c.benchmark_group("sweeps");
    g.sample_size(20);
    g.bench_function("detuning_201", |b| {
        b.iter(|| detuning_sweep(&cfg, &thetas).unwrap())
    });
    g.bench_function("reflectivity_51", |b| {
        b.iter(|| reflectivity_sweep(&cfg, &rs).unwrap())
    });
    g.bench_function("optimize_detuning", |b| {
        b.iter(|| optimize_detuning(&cfg, DetuningObjective::MaxSumSqueezing).unwrap())
    });
    for jobs in [1, 4] {
        g.bench_function(format!("cli_detuning_201_jobs{jobs}"), |b| {
            b.iter(|| run_scenario(Scenario::DetuningSweep, &cfg, jobs, true).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, sweeps);
criterion_main!(benches);
