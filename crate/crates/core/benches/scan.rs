use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use lapspread::construct;
use lapspread::generators::random_gnp;
use lapspread::scan::{scan, Corpus, ScanOptions};
use lapspread::spectral::laplacian_spectrum;

fn corpus_scan(c: &mut Criterion) {
    let corpora = [
        ("labeled_n5", Corpus::Labeled { n_min: 2, n_max: 5 }),
        ("gnp_n10", Corpus::Sample { n: 10, p: 0.5, seed: 1, count: 2000 }),
    ];
    let mut group = c.benchmark_group("scan");
    group.sample_size(10);
    for (name, corpus) in &corpora {
        group.throughput(Throughput::Elements(corpus.len()));
        let mut modes = vec![("sequential", false)];
        if cfg!(feature = "parallel") {
            modes.push(("parallel", true));
        }
        for (mode, parallel) in modes {
            let options = ScanOptions { parallel, ..Default::default() };
            group.bench_with_input(BenchmarkId::new(mode, name), corpus, |b, corpus| {
                b.iter(|| scan(corpus, &options, |_| {}).unwrap())
            });
        }
    }
    group.finish();
}

fn kernels(c: &mut Criterion) {
    let mut group = c.benchmark_group("kernels");
    for n in [8, 16, 32] {
        let g = random_gnp(n, 0.4, 5).unwrap();
        group.bench_with_input(BenchmarkId::new("jacobi", n), &g, |b, g| {
            b.iter(|| laplacian_spectrum(black_box(g)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("construct", n), &g, |b, g| {
            b.iter(|| construct(black_box(g)))
        });
    }
    group.finish();
}

criterion_group!(benches, corpus_scan, kernels);
criterion_main!(benches);
