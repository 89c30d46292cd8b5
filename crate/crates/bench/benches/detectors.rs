use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use esz_core::chains::{largest_convex_subset, longest_cap, longest_cup};
use esz_core::constructions::random_points;
use esz_core::OrientTable;

fn detectors(c: &mut Criterion) {
    let mut group = c.benchmark_group("detectors");
    for n in [32, 64, 128] {
        let set = random_points(n, n as u64);
        group.bench_with_input(BenchmarkId::new("orient_table", n), &set, |b, s| b.iter(|| OrientTable::new(s)));
        group.bench_with_input(BenchmarkId::new("longest_cup", n), &set, |b, s| b.iter(|| longest_cup(s)));
        group.bench_with_input(BenchmarkId::new("longest_cap", n), &set, |b, s| b.iter(|| longest_cap(s)));
        group.bench_with_input(BenchmarkId::new("largest_convex", n), &set, |b, s| {
            b.iter(|| largest_convex_subset(s))
        });
    }
    group.finish();
}

criterion_group!(benches, detectors);
criterion_main!(benches);
