//! Benchmarks of the hot kernels: associator assembly, zeta oracles,
//! quotient-algebra normal forms, integrable-word kernels, and the pentagon
//! product.

use criterion::{black_box, criterion_group, criterion_main, Criterion};

use kz_core::m05::alg::{normal_form_word, pentagon_check};
use kz_core::m05::bar::cic_kernel;
use kz_core::mzv::{associator, zeta_em, zeta_holder};
use kz_core::polylog::EvalConfig;
use kz_core::shuffle::{parse_word, Xi01};

fn bench_associator(c: &mut Criterion) {
    c.bench_function("associator degree 4", |b| {
        b.iter(|| associator(black_box(4)))
    });
}

fn bench_zeta(c: &mut Criterion) {
    let cfg = EvalConfig::default();
    let w = parse_word::<Xi01>("00101").unwrap();
    c.bench_function("zeta_em 3,2", |b| b.iter(|| zeta_em(black_box(&[3, 2]))));
    c.bench_function("zeta_holder 3,2", |b| {
        b.iter(|| zeta_holder(black_box(&w), &cfg).unwrap())
    });
}

fn bench_normal_form(c: &mut Criterion) {
    // A maximally out-of-order word: every right-block letter left of every
    // left-block letter.
    let word: Vec<u8> = vec![3, 2, 3, 2, 0, 1, 4, 0];
    c.bench_function("normal_form length 8", |b| {
        b.iter(|| normal_form_word::<f64>(black_box(&word)))
    });
}

fn bench_cic_kernel(c: &mut Criterion) {
    c.bench_function("cic_kernel weight 2", |b| {
        b.iter(|| cic_kernel(black_box(2), false))
    });
}

fn bench_pentagon(c: &mut Criterion) {
    c.bench_function("pentagon degree 3", |b| {
        b.iter(|| pentagon_check(black_box(3), 1e-8))
    });
}

criterion_group!(
    benches,
    bench_associator,
    bench_zeta,
    bench_normal_form,
    bench_cic_kernel,
    bench_pentagon
);
criterion_main!(benches);
