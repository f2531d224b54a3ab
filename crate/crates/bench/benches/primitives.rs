use criterion::{criterion_group, criterion_main, BatchSize, BenchmarkId, Criterion};
use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;

use arboreal::coprime::coprime_base_i64;
use arboreal::factor::{factorize, DEFAULT_BUDGET};
use arboreal::index_sets::{bertrand_family, m_coprime_witness};
use arboreal::tree::{verify_noncommutation, TreeAut};

fn bench_tree(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for depth in [4usize, 8, 12] {
        c.bench_function(&format!("tree compose/depth {depth}"), |b| {
            b.iter_batched(
                || (TreeAut::random(depth, &mut rng), TreeAut::random(depth, &mut rng)),
                |(g, h)| g.compose(&h),
                BatchSize::SmallInput,
            )
        });
    }
    let mut group = c.benchmark_group("noncommutation");
    group.sample_size(10);
    group.bench_function("exhaustive depth 3", |b| b.iter(|| verify_noncommutation(3)));
    group.finish();
}

fn bench_factor(c: &mut Criterion) {
    let mut group = c.benchmark_group("factorize");
    // 2^64 + 1 and a product of two 10-digit primes.
    for (name, n) in [
        ("fermat", BigUint::from(2u32).pow(64) + 1u32),
        ("semiprime", BigUint::from(1_000_000_007u64) * BigUint::from(9_999_999_967u64)),
    ] {
        group.bench_with_input(BenchmarkId::from_parameter(name), &n, |b, n| {
            b.iter(|| factorize(black_box(n), DEFAULT_BUDGET, 0))
        });
    }
    group.finish();
    let values: Vec<i64> = (2..200).map(|i| i * (i + 1) * (2 * i + 1)).collect();
    c.bench_function("coprime base/198 values", |b| b.iter(|| coprime_base_i64(black_box(&values))));
}

fn bench_index_sets(c: &mut Criterion) {
    let a: Vec<u64> = (1..=10_000).collect();
    let fam = bertrand_family(&a).unwrap().family;
    let mut group = c.benchmark_group("index sets");
    group.sample_size(10);
    group.bench_function("bertrand family/10^4", |b| b.iter(|| bertrand_family(black_box(&a))));
    group.bench_function("m-coprime/10^4", |b| b.iter(|| m_coprime_witness(black_box(&fam), 0)));
    group.finish();
}

criterion_group!(benches, bench_tree, bench_factor, bench_index_sets);
criterion_main!(benches);
