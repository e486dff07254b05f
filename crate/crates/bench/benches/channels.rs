use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qchan_core::suites::{Suite, DEFAULT_SEED};
use qchan_core::{
    choi_projection_equivalences, complement_from_kraus, degradability_via_inverse, degradable_seb_test,
    eb_certificate, is_self_complementary, zoo, Tolerance,
};

fn complements(c: &mut Criterion) {
    let tol = Tolerance::default();
    let mut g = c.benchmark_group("complement");
    for d in [2, 4, 6] {
        let k = zoo::random_channel(d, d, d, DEFAULT_SEED).unwrap();
        g.bench_with_input(BenchmarkId::new("from_kraus", d), &k, |b, k| {
            b.iter(|| complement_from_kraus(black_box(k)))
        });
        let p = zoo::pinching(d).unwrap();
        g.bench_with_input(BenchmarkId::new("self_complementary_pinching", d), &p, |b, p| {
            b.iter(|| is_self_complementary(black_box(p), &tol))
        });
    }
    g.finish();
}

fn structure(c: &mut Criterion) {
    let tol = Tolerance::default();
    let mut g = c.benchmark_group("structure");
    for d in [2, 3, 4] {
        let k = zoo::random_channel(d, d, 2, DEFAULT_SEED).unwrap();
        g.bench_with_input(BenchmarkId::new("degradability_via_inverse", d), &k, |b, k| {
            b.iter(|| degradability_via_inverse(black_box(k), &tol))
        });
        g.bench_with_input(BenchmarkId::new("eb_certificate", d), &k, |b, k| {
            b.iter(|| eb_certificate(black_box(k), &tol))
        });
        let h = zoo::random_violating_seb(d, d, 2, DEFAULT_SEED, &tol).unwrap();
        g.bench_with_input(BenchmarkId::new("degradable_seb_test", d), &h, |b, h| {
            b.iter(|| degradable_seb_test(black_box(h), &tol))
        });
    }
    let wh = zoo::werner_holevo(3, -0.5, &tol).unwrap();
    g.bench_function("choi_projection_equivalences/werner_holevo_3", |b| {
        b.iter(|| choi_projection_equivalences(black_box(&wh), &tol))
    });
    g.finish();
}

fn suites(c: &mut Criterion) {
    let tol = Tolerance::default();
    let mut g = c.benchmark_group("suites");
    g.sample_size(10);
    for suite in Suite::ALL {
        g.bench_function(suite.name(), |b| b.iter(|| suite.run(20, DEFAULT_SEED, &tol)));
    }
    g.finish();
}

criterion_group!(benches, complements, structure, suites);
criterion_main!(benches);
