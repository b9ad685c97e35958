use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use irrarray_bench::{cases, indices};
use irrarray_core::closed_forms::ClosedForm;
use irrarray_core::diagonals::index_to_pair;
use irrarray_core::perm::{IntraBlockPermutation, Rule};
use irrarray_core::{PartialSumTable, PartitionSpec};

fn locate(c: &mut Criterion) {
    let points = indices(1_000_000_000, 1024);
    let mut group = c.benchmark_group("locate_1e9");
    group.throughput(Throughput::Elements(points.len() as u64));
    for (name, spec) in cases() {
        let table = PartialSumTable::new(spec.clone());
        let closed = ClosedForm::for_spec(&spec).unwrap();
        for &n in &points {
            assert_eq!(table.locate(n).unwrap().block, closed.locate_block(n).unwrap().block);
        }
        group.bench_with_input(BenchmarkId::new("oracle", name), &points, |b, pts| {
            b.iter(|| pts.iter().map(|&n| table.locate(black_box(n)).unwrap().block).sum::<u64>())
        });
        group.bench_with_input(BenchmarkId::new("closed", name), &points, |b, pts| {
            b.iter(|| {
                pts.iter()
                    .map(|&n| closed.locate_block(black_box(n)).unwrap().block)
                    .sum::<u64>()
            })
        });
    }
    group.finish();
}

fn pairs_and_perms(c: &mut Criterion) {
    let points = indices(1_000_000_000_000, 1024);
    c.bench_function("index_to_pair_1e12", |b| {
        b.iter(|| points.iter().map(|&n| index_to_pair(black_box(n)).unwrap().i).sum::<u64>())
    });
    let rot = IntraBlockPermutation::new(PartitionSpec::linear(4, -1).unwrap(), Rule::Rotation).unwrap();
    c.bench_function("rotation_term_1e12", |b| {
        b.iter(|| points.iter().map(|&n| rot.term(black_box(n)).unwrap()).sum::<u64>())
    });
}

criterion_group!(benches, locate, pairs_and_perms);
criterion_main!(benches);
