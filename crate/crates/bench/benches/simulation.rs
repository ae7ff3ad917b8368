use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use ddrsim_bench::{bench_traffic, run_once};

fn random_traffic_replay(c: &mut Criterion) {
    let mut group = c.benchmark_group("random_traffic_replay");
    for &count in &[100usize, 1_000] {
        let entries = bench_traffic(42, count);
        group.throughput(Throughput::Elements(count as u64));
        group.bench_with_input(BenchmarkId::from_parameter(count), &entries, |b, e| {
            b.iter(|| run_once(e.clone()))
        });
    }
    group.finish();
}

criterion_group!(benches, random_traffic_replay);
criterion_main!(benches);
