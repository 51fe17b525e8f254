use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use crnpersist::exactla::farkas_alternative;
use crnpersist::fixtures;
use crnpersist::siphon::enumerate_siphon_sets;
use crnpersist::{analyze, AnalysisConfig, RationalMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn bench_analyze(c: &mut Criterion) {
    let mut group = c.benchmark_group("analyze");
    let config = AnalysisConfig::default();
    for (name, net) in [
        ("example1", fixtures::example1()),
        ("example2", fixtures::example2()),
        ("example3", fixtures::example3()),
    ] {
        group.bench_with_input(BenchmarkId::from_parameter(name), &net, |b, net| {
            b.iter(|| analyze(black_box(net), &config).unwrap())
        });
    }
    group.finish();
}

fn bench_farkas(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let matrices: Vec<RationalMatrix> = (0..32)
        .map(|_| {
            let rows: Vec<Vec<i64>> = (0..6).map(|_| (0..8).map(|_| rng.gen_range(-3..=3)).collect()).collect();
            RationalMatrix::from_i64_rows(&rows)
        })
        .collect();
    c.bench_function("farkas_6x8", |b| {
        b.iter(|| {
            for a in &matrices {
                black_box(farkas_alternative(a));
            }
        })
    });
}

fn bench_siphons(c: &mut Criterion) {
    let net = fixtures::reversible();
    c.bench_function("siphons_reversible", |b| {
        b.iter(|| enumerate_siphon_sets(black_box(&net), false, 20).unwrap())
    });
}

criterion_group!(benches, bench_analyze, bench_farkas, bench_siphons);
criterion_main!(benches);
