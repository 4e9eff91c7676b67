use criterion::{criterion_group, criterion_main, Criterion};
use moea_core::{evolve, BenchmarkProblem, EngineConfig, ServoProblem, SpecTree};
use std::hint::black_box;

fn one_generation(c: &mut Criterion) {
    let fon = BenchmarkProblem::fon();
    let pareto = SpecTree::pareto(2);
    let cfg = EngineConfig {
        generations: 1,
        ..Default::default()
    };
    c.bench_function("generation/fon_100", |b| {
        b.iter(|| evolve(&fon, black_box(&pareto), &cfg).unwrap())
    });

    let servo = ServoProblem::default();
    let spec = moea_core::ServoGoals::default().spec();
    let cfg = EngineConfig {
        generations: 1,
        population_size: 200,
        normalize: true,
        ..Default::default()
    };
    c.bench_function("generation/servo_200", |b| {
        b.iter(|| evolve(&servo, black_box(&spec), &cfg).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(20);
    targets = one_generation
}
criterion_main!(benches);
