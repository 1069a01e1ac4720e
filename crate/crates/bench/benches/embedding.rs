use criterion::{criterion_group, criterion_main, Criterion};
use stegafly_bench::synthetic_cover;
use stegafly_core::stego::{embed, extract};
use stegafly_core::EmbedRequest;

fn bench_embed_extract(c: &mut Criterion) {
    let cover = synthetic_cover(128, 128, 3);
    let payload = vec![0xA5u8; 256];

    c.bench_function("embed_128px_256B", |b| {
        b.iter(|| {
            let mut request =
                EmbedRequest::new(cover.clone(), payload.clone(), "bench".into(), 7);
            request.optimizer.population_size = 8;
            request.optimizer.max_iterations = 5;
            embed(&request).unwrap()
        })
    });

    let mut request = EmbedRequest::new(cover, payload, "bench".into(), 7);
    request.optimizer.population_size = 8;
    request.optimizer.max_iterations = 5;
    let outcome = embed(&request).unwrap();
    c.bench_function("extract_128px_256B", |b| {
        b.iter(|| extract(&outcome.stego, "bench").unwrap())
    });
}

criterion_group!(benches, bench_embed_extract);
criterion_main!(benches);
