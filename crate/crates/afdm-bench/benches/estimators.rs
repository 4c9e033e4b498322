//! Range estimator throughput: the three matched-filter variants at the
//! reference frame size, plus CFAR over the resulting profile.

use afdm_bench::{reference_params, three_target_echo};
use afdm_core::estimator::{
    ca_cfar, matched_filter_circular, matched_filter_fft, matched_filter_linear, CfarConfig,
};
use afdm_core::waveform::{pilot, remove_cpp};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

fn matched_filters(c: &mut Criterion) {
    let mut group = c.benchmark_group("matched_filter");
    for n in [64, 256, 1024] {
        let params = reference_params(n);
        let s = pilot(&params);
        let tx = afdm_core::waveform::add_cpp(&s, &params).unwrap();
        let r = three_target_echo(&params);
        let r_bare = remove_cpp(&r, &params).unwrap();
        group.bench_with_input(BenchmarkId::new("linear", n), &n, |b, _| {
            b.iter(|| matched_filter_linear(black_box(&r), black_box(&tx), &params).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("circular", n), &n, |b, _| {
            b.iter(|| matched_filter_circular(black_box(&r_bare), black_box(&s), &params).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("fft", n), &n, |b, _| {
            b.iter(|| matched_filter_fft(black_box(&r_bare), black_box(&s), &params).unwrap())
        });
    }
    group.finish();
}

fn cfar(c: &mut Criterion) {
    let params = reference_params(256);
    let s = pilot(&params);
    let r = remove_cpp(&three_target_echo(&params), &params).unwrap();
    let profile = matched_filter_fft(&r, &s, &params).unwrap();
    let config = CfarConfig {
        guard: 5,
        ..CfarConfig::default()
    };
    c.bench_function("ca_cfar/256", |b| {
        b.iter(|| ca_cfar(black_box(&profile), &config).unwrap())
    });
}

criterion_group!(benches, matched_filters, cfar);
criterion_main!(benches);
