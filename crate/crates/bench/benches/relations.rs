use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use mucs::multivariance::{all_partitioned_relations, symmetric_multivariance, OperatorSequence};
use mucs::squeezing::classify;
use mucs::statefam::one_qubit_family;
use mucs::uncertainty::{balanced_relation, covariance_table};
use mucs::{Mode, OverlapTable, DEFAULT_TOL};
use mucs_bench::{operators, state, vectors};

fn bench_pairset_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("pairset_sweep");
    for m in [3usize, 4, 5, 6] {
        let table = OverlapTable::from_vectors(&vectors(m, 8, 7)).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(m), &table, |b, t| {
            b.iter(|| black_box(t.sweep_all_pairsets(DEFAULT_TOL)))
        });
    }
    group.finish();
}

fn bench_covariance_table(c: &mut Criterion) {
    let mut group = c.benchmark_group("covariance_table");
    for dim in [2usize, 8, 32] {
        let rho = state(dim, true, 11);
        let ops = operators(4, dim, Mode::General, 12);
        group.bench_with_input(BenchmarkId::from_parameter(dim), &dim, |b, _| {
            b.iter(|| black_box(covariance_table(&rho, &ops, Mode::General).unwrap()))
        });
    }
    group.finish();
}

fn bench_multivariance(c: &mut Criterion) {
    let rho = state(6, true, 21);
    let seq = OperatorSequence::new(operators(4, 6, Mode::Hermitian, 22)).unwrap();
    c.bench_function("partitioned_relations_m4_dim6", |b| {
        b.iter(|| black_box(all_partitioned_relations(&rho, &seq, DEFAULT_TOL).unwrap()))
    });
    c.bench_function("symmetric_multivariance_m4_dim6", |b| {
        b.iter(|| black_box(symmetric_multivariance(&rho, &seq).unwrap()))
    });
}

fn bench_classify(c: &mut Criterion) {
    let psi = state(4, false, 31);
    let ops = operators(5, 4, Mode::Hermitian, 32);
    c.bench_function("classify_m5_dim4", |b| {
        b.iter(|| black_box(classify(&psi, &ops, Mode::Hermitian, DEFAULT_TOL).unwrap()))
    });
}

fn bench_figure_grid(c: &mut Criterion) {
    let ops = operators(4, 2, Mode::Hermitian, 1001);
    c.bench_function("one_qubit_grid_16x16", |b| {
        b.iter(|| {
            for i in 0..16 {
                for j in 0..16 {
                    let rho = one_qubit_family(i as f64 * 0.2, j as f64 * 0.4);
                    black_box(balanced_relation(&rho, &ops, Mode::Hermitian, DEFAULT_TOL).unwrap());
                }
            }
        })
    });
}

criterion_group!(
    benches,
    bench_pairset_sweep,
    bench_covariance_table,
    bench_multivariance,
    bench_classify,
    bench_figure_grid
);
criterion_main!(benches);
