//! Modulator throughput: the chirp transform pair and the OTFS baseline.

use afdm_bench::reference_params;
use afdm_core::baselines::{otfs_modulate, OtfsGrid};
use afdm_core::waveform::{daft, idaft, ChirpDomainVector};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

fn transform_pair(c: &mut Criterion) {
    let mut group = c.benchmark_group("transform");
    for n in [64, 256, 1024] {
        let params = reference_params(n);
        let x = ChirpDomainVector::pilot(n);
        let s = idaft(&x, &params).unwrap();
        group.bench_with_input(BenchmarkId::new("idaft", n), &n, |b, _| {
            b.iter(|| idaft(black_box(&x), &params).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("daft", n), &n, |b, _| {
            b.iter(|| daft(black_box(&s), &params).unwrap())
        });
    }
    group.finish();
}

fn otfs(c: &mut Criterion) {
    let params = reference_params(256);
    let grid = OtfsGrid::pilot(256).unwrap();
    c.bench_function("otfs_modulate/256", |b| {
        b.iter(|| otfs_modulate(black_box(&grid), &params).unwrap())
    });
}

criterion_group!(benches, transform_pair, otfs);
criterion_main!(benches);
