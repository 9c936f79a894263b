use criterion::{black_box, criterion_group, criterion_main, Criterion};

use hecke_bench::element;
use hecke_core::{matrix_to_word, Reciprocity, RingContext, Survey};

fn ring(c: &mut Criterion) {
    let ctx = RingContext::new(5).unwrap();
    let g = element(&ctx, 24);
    c.bench_function("pseudo_gcd p=5 len 24", |b| b.iter(|| ctx.pseudo_gcd(black_box(g.a()), black_box(g.c()))));
    c.bench_function("is_member p=5 len 24", |b| b.iter(|| black_box(&g).is_member()));
}

fn words(c: &mut Criterion) {
    for p in [4, 7] {
        let ctx = RingContext::new(p).unwrap();
        let g = element(&ctx, 24);
        c.bench_function(&format!("matrix_to_word p={p} len 24"), |b| b.iter(|| matrix_to_word(black_box(&g))));
    }
}

fn reciprocity(c: &mut Criterion) {
    let ctx = RingContext::new(4).unwrap();
    let engine = Reciprocity::new(&ctx);
    let g = hecke_core::evaluate(&ctx, &hecke_core::Word::parse(4, "i g^1 i g^3 i g^2").unwrap());
    c.bench_function("is_reciprocal p=4 worked example", |b| b.iter(|| engine.is_reciprocal(black_box(&g))));
}

fn survey(c: &mut Criterion) {
    let ctx = RingContext::new(4).unwrap();
    let mut group = c.benchmark_group("survey");
    group.sample_size(10);
    group.bench_function("p=4 max_len 8", |b| b.iter(|| Survey::new(&ctx, 10).run(8).unwrap()));
    group.finish();
}

criterion_group!(benches, ring, words, reciprocity, survey);
criterion_main!(benches);
