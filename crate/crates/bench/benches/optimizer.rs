use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use stegafly_core::bench::{function_by_name, Algorithm};
use stegafly_core::optimizer::{de_run, fa_run, hfa_run};
use stegafly_core::HfaConfig;

fn config(dim: usize, bounds: Vec<(f64, f64)>) -> HfaConfig {
    let mut c = HfaConfig::new(dim, bounds, 42);
    c.population_size = 20;
    c.max_iterations = 50;
    c
}

fn bench_algorithms(c: &mut Criterion) {
    let dim = 10;
    let mut group = c.benchmark_group("optimizer");
    for algo in Algorithm::ALL {
        for fn_name in ["sphere", "rastrigin"] {
            let f = function_by_name(fn_name, dim).unwrap();
            let cfg = config(dim, f.bounds_vec());
            let objective = move |x: &[f64]| (f.evaluate)(x);
            group.bench_with_input(
                BenchmarkId::new(algo.name(), fn_name),
                &cfg,
                |b, cfg| {
                    b.iter(|| match algo {
                        Algorithm::Fa => fa_run(cfg, &objective).unwrap(),
                        Algorithm::De => de_run(cfg, &objective).unwrap(),
                        Algorithm::Hfa => hfa_run(cfg, &objective).unwrap(),
                    })
                },
            );
        }
    }
    group.finish();
}

criterion_group!(benches, bench_algorithms);
criterion_main!(benches);
