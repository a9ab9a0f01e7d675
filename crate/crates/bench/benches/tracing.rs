use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use gossip_bench::{cyclic21_code, fano_code, pirate_word, plane_code};
use gossip_core::designs::{projective_plane, steiner_triple, verify_design};
use gossip_core::tracing::{
    brute_force_trace, trace_nonzero, trace_only_erasures, StrategyKind, DEFAULT_BUDGET,
};
use gossip_core::watermark::{detect, embed, GrayImage};

fn tracers(c: &mut Criterion) {
    let mut group = c.benchmark_group("trace");
    for (name, code) in [
        ("fano", fano_code()),
        ("cyclic21", cyclic21_code()),
        ("plane5", plane_code(5)),
    ] {
        let selective = pirate_word(&code, 2, StrategyKind::SelectiveErasures, 3);
        let erased = pirate_word(&code, 2, StrategyKind::OnlyErasures, 0);
        group.bench_with_input(BenchmarkId::new("nonzero", name), &selective, |b, w| {
            b.iter(|| trace_nonzero(&code, black_box(w)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("zero-pattern", name), &erased, |b, w| {
            b.iter(|| trace_only_erasures(&code, black_box(w)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("brute-force", name), &erased, |b, w| {
            b.iter(|| brute_force_trace(&code, black_box(w), code.c(), DEFAULT_BUDGET).unwrap())
        });
    }
    group.finish();
}

fn designs(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify");
    for (name, d) in [
        ("plane5", projective_plane(5).unwrap()),
        ("plane7", projective_plane(7).unwrap()),
        ("sts31", steiner_triple(31).unwrap()),
    ] {
        group.bench_function(name, |b| b.iter(|| verify_design(black_box(&d)).unwrap()));
    }
    group.finish();
}

fn watermark(c: &mut Criterion) {
    let img = GrayImage::noise(256, 256, 1).unwrap();
    let code = fano_code();
    let row = code.row(1).to_vec();
    let marked = embed(&img, &row, code.q(), 0.1, 7).unwrap();
    c.bench_function("wm/embed-256", |b| {
        b.iter(|| embed(black_box(&img), &row, code.q(), 0.1, 7).unwrap())
    });
    c.bench_function("wm/detect-256", |b| {
        b.iter(|| detect(black_box(&marked), &row, code.q(), 7, 0.3).unwrap())
    });
}

criterion_group!(benches, tracers, designs, watermark);
criterion_main!(benches);
