//! Parallel vs sequential timings for the data-parallel inner loops: factor
//! counting (suffix sort) and the kernel-subsequence grid. Built with the
//! default `parallel` feature the first series uses rayon; the `_seq` series
//! is always the plain loop.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use sumfold::complexity::{factor_counts, factor_counts_seq};
use sumfold::folding::FoldingFamily;
use sumfold::wnum::{kernel_evidence, kernel_evidence_seq};

fn bench_factor_counts(c: &mut Criterion) {
    let fam = FoldingFamily::new(2).unwrap();
    let mut stream = fam.tau_stream();
    let mut group = c.benchmark_group("factor_counts");
    group.sample_size(10);
    for len in [1 << 15, 1 << 17] {
        let prefix = stream.prefix_letters(len).to_vec();
        group.bench_with_input(BenchmarkId::new("parallel", len), &prefix, |b, word| {
            b.iter(|| factor_counts(word, 256))
        });
        group.bench_with_input(BenchmarkId::new("sequential", len), &prefix, |b, word| {
            b.iter(|| factor_counts_seq(word, 256))
        });
    }
    group.finish();
}

fn bench_kernel_grid(c: &mut Criterion) {
    let mut group = c.benchmark_group("kernel_evidence");
    group.sample_size(10);
    for max_a in [3u32, 4] {
        group.bench_with_input(BenchmarkId::new("parallel", max_a), &max_a, |b, &a| {
            b.iter(|| kernel_evidence(2, a, 4_000).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("sequential", max_a), &max_a, |b, &a| {
            b.iter(|| kernel_evidence_seq(2, a, 4_000).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_factor_counts, bench_kernel_grid);
criterion_main!(benches);
