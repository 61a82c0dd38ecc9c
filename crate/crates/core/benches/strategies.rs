use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use parikh_core::generate::{random_linear_ptar, random_pa, Bounds};
use parikh_core::linear::is_empty_linear_with;
use parikh_core::Strategy;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const STRATEGIES: [(&str, Strategy); 2] = [
    ("sequential", Strategy::Sequential),
    ("parallel", Strategy::Parallel),
];

fn pa_emptiness(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let automata: Vec<_> = (0..50).map(|_| random_pa(&mut rng, &Bounds::PA)).collect();
    let mut group = c.benchmark_group("pa_emptiness");
    for (name, strategy) in STRATEGIES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &strategy, |b, &s| {
            b.iter(|| {
                automata
                    .iter()
                    .filter(|a| a.is_empty_with(s).is_empty())
                    .count()
            })
        });
    }
    group.finish();
}

fn linear_emptiness(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let automata: Vec<_> = (0..50)
        .map(|_| random_linear_ptar(&mut rng, &Bounds::LINEAR))
        .collect();
    let mut group = c.benchmark_group("linear_emptiness");
    for (name, strategy) in STRATEGIES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &strategy, |b, &s| {
            b.iter(|| {
                automata
                    .iter()
                    .filter(|a| is_empty_linear_with(a, s).unwrap().is_empty())
                    .count()
            })
        });
    }
    group.finish();
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = pa_emptiness, linear_emptiness
}
criterion_main!(benches);
