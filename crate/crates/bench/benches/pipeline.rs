use std::hint::black_box;

use clan_bench::{karate, resilience_sbm, skew_sbm, small_sbm};
use clan_core::louvain::{louvain, modularity, LouvainConfig};
use clan_core::pipeline::run_clan;
use clan_core::skew::{degree_ratio_curve, subsample_to_slope, Bucketing};
use clan_core::Partition;
use criterion::{criterion_group, criterion_main, Criterion};

fn bench_modularity(c: &mut Criterion) {
    let graph = karate();
    let partition = louvain(&graph, &LouvainConfig::default()).unwrap();
    c.bench_function("modularity/karate", |b| {
        b.iter(|| modularity(black_box(&graph), black_box(&partition)).unwrap())
    });

    let (sbm, _, _) = skew_sbm();
    let singletons = Partition::singletons(sbm.node_count());
    c.bench_function("modularity/sbm_800_singletons", |b| {
        b.iter(|| modularity(black_box(&sbm), black_box(&singletons)).unwrap())
    });
}

fn bench_louvain(c: &mut Criterion) {
    let config = LouvainConfig::default();
    let graph = karate();
    c.bench_function("louvain/karate_34", |b| {
        b.iter(|| louvain(black_box(&graph), &config).unwrap())
    });

    let (sbm, _, _) = small_sbm();
    c.bench_function("louvain/sbm_100", |b| {
        b.iter(|| louvain(black_box(&sbm), &config).unwrap())
    });

    let (sbm, _, _) = skew_sbm();
    c.bench_function("louvain/sbm_800", |b| {
        b.iter(|| louvain(black_box(&sbm), &config).unwrap())
    });
}

fn bench_clan(c: &mut Criterion) {
    let config = LouvainConfig::default();
    let (graph, attrs, _) = resilience_sbm();
    c.bench_function("clan/sbm_160", |b| {
        b.iter(|| run_clan(black_box(&graph), black_box(&attrs), 10, &config, 1.0).unwrap())
    });
}

fn bench_skew(c: &mut Criterion) {
    let (graph, _, truth) = skew_sbm();
    c.bench_function("ratio_curve/sbm_800", |b| {
        b.iter(|| {
            degree_ratio_curve(
                black_box(&graph),
                black_box(&truth),
                "block0",
                "block1",
                Bucketing::Unit,
            )
            .unwrap()
        })
    });
    c.bench_function("subsample/sbm_800", |b| {
        b.iter(|| {
            subsample_to_slope(
                black_box(&graph),
                black_box(&truth),
                "block0",
                "block1",
                0.0,
                7,
                Bucketing::Unit,
            )
            .unwrap()
        })
    });
}

criterion_group!(
    benches,
    bench_modularity,
    bench_louvain,
    bench_clan,
    bench_skew
);
criterion_main!(benches);
