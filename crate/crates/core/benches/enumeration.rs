//! Parallel vs sequential throughput of the two data-parallel hot spots:
//! the 4^n oracle sweep and a closed-form identity grid.
//!
//! Built with default features this compares the rayon path against the
//! sequential baseline in one run; built with `--no-default-features` both
//! entries measure the sequential build.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use pathpairs::oracle;
use pathpairs::verify::{run_suite, CheckId, CheckSpec, SuiteEnv};

fn bench_brute_table(c: &mut Criterion) {
    let mut group = c.benchmark_group("brute_table");
    group.sample_size(10);
    for n in [8u32, 10, 11] {
        group.bench_function(format!("serial/n={n}"), |b| {
            b.iter(|| oracle::brute_table_serial(black_box(n)).unwrap())
        });
        group.bench_function(format!("dispatch/n={n}"), |b| {
            b.iter(|| oracle::brute_table(black_box(n)).unwrap())
        });
    }
    group.finish();
}

fn bench_identity_grid(c: &mut Criterion) {
    let mode = if cfg!(feature = "parallel") {
        "parallel"
    } else {
        "serial"
    };
    let mut group = c.benchmark_group("identity_grid");
    group.sample_size(10);
    let env = SuiteEnv::default();
    for (id, max_n) in [
        (CheckId::Completeness, 18i64),
        (CheckId::RowSumsEqual, 24),
    ] {
        let spec = [CheckSpec { id, max_n, cap: 8 }];
        group.bench_function(format!("{}/{mode}/n={max_n}", spec[0].id.name()), |b| {
            b.iter(|| {
                let report = run_suite(black_box(&spec), &env);
                assert!(report.all_pass());
                report
            })
        });
    }
    group.finish();
}

criterion_group!(benches, bench_brute_table, bench_identity_grid);
criterion_main!(benches);
