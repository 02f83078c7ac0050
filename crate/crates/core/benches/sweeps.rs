use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use k3moduli::autoeq::{normalize, ExprGen, R3Reading, RuleSet};
use k3moduli::cones::{classify_divisor, pell_min_solution, DivisorClass};
use k3moduli::moduli::theorem_b_certificate;
use k3moduli::sweep;
use k3moduli::K3Context;
use num::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn compare<T: Sync, R: Send>(c: &mut Criterion, name: &str, items: &[T], f: impl Fn(&T) -> R + Sync + Send) {
    let mut group = c.benchmark_group(name);
    group.bench_with_input(BenchmarkId::new("seq", items.len()), items, |b, xs| {
        b.iter(|| black_box(sweep::map_seq(xs, &f)))
    });
    #[cfg(feature = "parallel")]
    group.bench_with_input(BenchmarkId::new("par", items.len()), items, |b, xs| {
        b.iter(|| black_box(sweep::map_par(xs, &f)))
    });
    group.finish();
}

fn theorem_b(c: &mut Criterion) {
    let gs: Vec<i64> = (2..=500).collect();
    compare(c, "theorem_b", &gs, |&g| theorem_b_certificate(&K3Context::new(g).unwrap()).unwrap().disc_x);
}

fn pell(c: &mut Criterion) {
    let ds: Vec<u64> = (1..=400).collect();
    compare(c, "pell", &ds, |&d| pell_min_solution(d, 5, 20_000).unwrap().y1);
}

fn classify(c: &mut Criterion) {
    let ctx = K3Context::new(7).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let rays: Vec<DivisorClass> = (0..20_000)
        .map(|_| {
            let q = |rng: &mut ChaCha8Rng| BigRational::new(rng.random_range(-999..=999).into(), rng.random_range(1..=97).into());
            DivisorClass::new(q(&mut rng), q(&mut rng))
        })
        .collect();
    compare(c, "classify", &rays, |d| classify_divisor(&ctx, d).ok());
}

fn normalize_batch(c: &mut Criterion) {
    let ctx = K3Context::new(4).unwrap();
    let eg = ExprGen::new(ctx);
    let rules = RuleSet::new(ctx, R3Reading::A);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let exprs: Vec<_> = (0..2_000).map(|_| eg.expr(&mut rng, 4)).collect();
    compare(c, "normalize", &exprs, |e| normalize(&rules, e, 10_000).steps.len());
}

criterion_group!(benches, theorem_b, pell, classify, normalize_batch);
criterion_main!(benches);
