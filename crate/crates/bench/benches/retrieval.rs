use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rrfuse::fusion::rrf_fuse_all;
use rrfuse::lexical::bm25_search;
use rrfuse::{FusionConfig, SearchMode, TermWeightVector};
use rrfuse_bench::Workload;

fn retrieval(c: &mut Criterion) {
    let w = Workload::new(2000, 50, 256);
    let query = TermWeightVector::from_text(&w.analyzer, &w.data.queries[0].title);

    c.bench_function("bm25_top1000_single_query", |b| {
        b.iter(|| bm25_search(&w.index, &query, "q", 1000, &w.config.bm25, "bm25"))
    });

    let mut group = c.benchmark_group("run");
    for mode in [SearchMode::Bm25, SearchMode::Bm25Rm3] {
        group.bench_with_input(BenchmarkId::from_parameter(mode), &mode, |b, &m| {
            b.iter(|| w.lexical(m))
        });
    }
    group.bench_function("dense+maxpassage", |b| b.iter(|| w.dense()));
    group.finish();

    let runs = [w.lexical(SearchMode::Bm25), w.dense()];
    let refs: Vec<_> = runs.iter().collect();
    let cfg = FusionConfig::default();
    c.bench_function("rrf_two_runs", |b| {
        b.iter(|| rrf_fuse_all(&refs, &cfg).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = retrieval
}
criterion_main!(benches);
