use criterion::{criterion_group, criterion_main, Criterion};
use dilog_bench::{five_term_composite, five_term_xy, DOCUMENT};
use dilog_core::{bloch_fq, check_constant, del, parse_document};
use std::hint::black_box;

fn wedge(c: &mut Criterion) {
    let xy = five_term_xy();
    let comp = five_term_composite();
    c.bench_function("del/five_term_xy", |b| b.iter(|| del(black_box(&xy)).unwrap()));
    c.bench_function("del/five_term_composite", |b| b.iter(|| del(black_box(&comp)).unwrap()));
    c.bench_function("check_constant/five_term_xy", |b| b.iter(|| check_constant(black_box(&xy)).unwrap()));
}

fn parsing(c: &mut Criterion) {
    c.bench_function("parse_document", |b| b.iter(|| parse_document(black_box(DOCUMENT)).unwrap()));
}

fn finite_fields(c: &mut Criterion) {
    let mut g = c.benchmark_group("pre_bloch");
    for p in [5u64, 13, 31] {
        g.bench_function(p.to_string(), |b| b.iter(|| bloch_fq::pre_bloch(black_box(p)).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, wedge, parsing, finite_fields);
criterion_main!(benches);
