use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use esz_core::bounds::{new_upper_bound, ratio};
use esz_core::constructions::{cupcap_extremal, es_lower_bound};
use esz_core::good_points::{certify_adversarially, find_good_point};
use esz_core::partition::{check_cap_extension, split_upper_lower};
use esz_core::projective::verify_reduction;

fn constructions(c: &mut Criterion) {
    let mut group = c.benchmark_group("constructions");
    group.sample_size(20);
    for (n, m) in [(5, 5), (6, 6)] {
        group.bench_function(BenchmarkId::new("cupcap_extremal", format!("{n}x{m}")), |b| {
            b.iter(|| cupcap_extremal(n, m).unwrap())
        });
    }
    group.bench_function("es_lower_bound/6", |b| b.iter(|| es_lower_bound(6).unwrap()));
    group.finish();
}

fn partition(c: &mut Criterion) {
    let set = cupcap_extremal(6, 6).unwrap();
    c.bench_function("partition/split_and_extend_70", |b| {
        b.iter(|| {
            let split = split_upper_lower(&set);
            check_cap_extension(&set, &split)
        })
    });
}

fn good_points(c: &mut Criterion) {
    let set = cupcap_extremal(6, 4).unwrap();
    let cert = find_good_point(&set, 6, 4).unwrap();
    let mut group = c.benchmark_group("good_points");
    group.sample_size(10);
    group.bench_function("find_good_point_6_4", |b| b.iter(|| find_good_point(&set, 6, 4).unwrap()));
    group.bench_function("adversary_100_trials", |b| {
        b.iter(|| certify_adversarially(&set, &cert, 6, 100, 0).unwrap())
    });
    group.finish();
}

fn reduction(c: &mut Criterion) {
    let set = cupcap_extremal(5, 5).unwrap();
    let mut group = c.benchmark_group("projective");
    group.sample_size(10);
    group.bench_function("verify_reduction_20", |b| b.iter(|| verify_reduction(&set, 5).unwrap()));
    group.finish();
}

fn bounds(c: &mut Criterion) {
    c.bench_function("bounds/new_upper_bound_1000", |b| b.iter(|| new_upper_bound(1000).unwrap()));
    c.bench_function("bounds/ratio_10000", |b| b.iter(|| ratio(10_000).unwrap()));
}

criterion_group!(benches, constructions, partition, good_points, reduction, bounds);
criterion_main!(benches);
