//! Sequential versus thread-pool execution on Monte Carlo batches.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use rfso_relay::batch::BatchSampler;
use rfso_relay::numerics::StreamKind;
use rfso_relay::{derive_link_budget, AccessMode, Execution, RateSamples, SystemParams};
use std::hint::black_box;

fn modes() -> Vec<Execution> {
    let mut m = vec![Execution::Sequential];
    if Execution::Parallel.is_parallel() {
        m.push(Execution::Parallel);
    }
    m
}

fn rate_batches(c: &mut Criterion) {
    let params = SystemParams::default();
    let budget = derive_link_budget(&params).unwrap();
    let sampler = BatchSampler::new(&params, &budget, AccessMode::FixedRateZf, params.sim.seed).unwrap();
    let mut group = c.benchmark_group("rate_triples");
    group.sample_size(10);
    for n in [1_000usize, 10_000] {
        group.throughput(Throughput::Elements(n as u64));
        for exec in modes() {
            group.bench_with_input(BenchmarkId::new(format!("{exec:?}"), n), &n, |b, &n| {
                b.iter(|| black_box(sampler.rate_triples(StreamKind::Simulation, n, exec)))
            });
        }
    }
    group.finish();
}

fn averaging(c: &mut Criterion) {
    let params = SystemParams::default();
    let budget = derive_link_budget(&params).unwrap();
    let sampler = BatchSampler::new(&params, &budget, AccessMode::FixedRateZf, params.sim.seed).unwrap();
    let triples = sampler.rate_triples(StreamKind::Estimation, 100_000, Execution::default());
    let mut group = c.benchmark_group("averages");
    group.throughput(Throughput::Elements(triples.len() as u64));
    for exec in modes() {
        let samples = RateSamples::new(triples.clone()).with_execution(exec);
        group.bench_function(format!("{exec:?}"), |b| b.iter(|| black_box(samples.averages(black_box(0.6)))));
    }
    group.finish();
}

criterion_group!(benches, rate_batches, averaging);
criterion_main!(benches);
