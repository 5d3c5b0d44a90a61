use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use upg_core::{
    ball, check_square, load_subset, product_report_parallel, search_witness, GeneratorWord, Gn,
    PadicMatrix, SearchParams, CHW2_WITNESS,
};

fn normalize(c: &mut Criterion) {
    let word = GeneratorWord::parse("x1^3 x2^-2 x3 x1^-5 x2 x3^4 x1 x2^7 x3^-1 x1^2", 3).unwrap();
    let ctx = Gn::new(3);
    c.bench_function("normalize/G3/10 tokens", |b| {
        b.iter(|| ctx.normalize(black_box(&word)))
    });
}

fn products(c: &mut Criterion) {
    let g2 = Gn::new(2);
    let witness = load_subset(&g2, CHW2_WITNESS).unwrap();
    c.bench_function("check_square/G2 witness", |b| {
        b.iter(|| check_square(&g2, black_box(&witness)))
    });

    let g3 = Gn::new(3);
    let big = ball(&g3, 3);
    let mut group = c.benchmark_group("product_report/G3 radius-3 ball");
    group.sample_size(20);
    for workers in [1, 4] {
        group.bench_function(format!("{workers} workers"), |b| {
            b.iter(|| product_report_parallel(&g3, &big, &big, workers))
        });
    }
    group.finish();
    c.bench_function("ball/G3 radius 4", |b| b.iter(|| ball(&g3, black_box(4))));
}

fn padic(c: &mut Criterion) {
    let a = PadicMatrix::from_rows(3, 12, &[vec![4, 3], vec![9, 1]]).unwrap();
    c.bench_function("nth_root/p=3 k=12 2x2 m=9", |b| {
        b.iter(|| upg_core::padic::nth_root(black_box(&a), 9))
    });
}

fn search(c: &mut Criterion) {
    let ctx = Gn::new(2);
    let params = SearchParams {
        restarts: 16,
        ..SearchParams::default()
    };
    let mut group = c.benchmark_group("search");
    group.sample_size(10);
    group.bench_function("anneal/G2 size 14 radius 3, 16 restarts", |b| {
        b.iter(|| search_witness(&ctx, black_box(&params)))
    });
    group.finish();
}

criterion_group!(benches, normalize, products, padic, search);
criterion_main!(benches);
