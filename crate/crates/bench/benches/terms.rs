use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use tclgen_core::terms::{
    diagram_generator_terms, inverse_map_terms_by_compositions, parse_polynomial,
    render_polynomial, Kind, RenderFormat,
};

// generator_terms memoizes across calls, so the uncached enumerations are
// measured instead.
fn enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate");
    for n in [4, 6, 8] {
        group.bench_with_input(BenchmarkId::new("diagrams", n), &n, |b, &n| {
            b.iter(|| diagram_generator_terms(black_box(n)))
        });
        group.bench_with_input(BenchmarkId::new("inverse_map", n), &n, |b, &n| {
            b.iter(|| inverse_map_terms_by_compositions(black_box(n), Kind::Schrodinger))
        });
    }
    group.finish();
}

fn rendering(c: &mut Criterion) {
    let poly = diagram_generator_terms(6).unwrap();
    let text = render_polynomial(&poly, RenderFormat::OperatorText).unwrap();
    c.bench_function("render order 6", |b| {
        b.iter(|| render_polynomial(black_box(&poly), RenderFormat::OperatorText))
    });
    c.bench_function("parse order 6", |b| {
        b.iter(|| parse_polynomial(black_box(&text)))
    });
}

criterion_group!(benches, enumeration, rendering);
criterion_main!(benches);
