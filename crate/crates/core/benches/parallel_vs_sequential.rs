use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use niclab_core::curvature::CurvatureOptions;
use niclab_core::gluing::{functional_f, geometric_grid, BandOptions, GeometryConstants, GluedFamily};
use niclab_core::isotropic::{criterion_crosscheck, sigma_field, CrosscheckOptions};
use niclab_core::metric::{builtins, GridSpec};
use niclab_core::Execution;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn sigma_grid(c: &mut Criterion) {
    let m = builtins::warped_t4();
    let grid = GridSpec::full_periodic(m.chart(), 8);
    let opts = CurvatureOptions::default();
    let mut group = c.benchmark_group("sigma_field_8^4");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| sigma_field(&m, 1.0 / 6.0, &grid, &opts, black_box(exec)).unwrap())
        });
    }
    group.finish();
}

fn crosscheck(c: &mut Criterion) {
    let mut group = c.benchmark_group("crosscheck_500");
    group.sample_size(10);
    for (name, exec) in MODES {
        let opts = CrosscheckOptions {
            exec,
            ..CrosscheckOptions::default()
        };
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| criterion_crosscheck(500, black_box(0), &opts))
        });
    }
    group.finish();
}

fn f_sweep(c: &mut Criterion) {
    let base = GluedFamily::new(2.0, GeometryConstants::default()).unwrap();
    let grid = geometric_grid(2.0, 512.0, 17);
    let opts = BandOptions::default();
    let mut group = c.benchmark_group("functional_f_17");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| functional_f(&base, black_box(&grid), 1.0 / 6.0, &opts, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, sigma_grid, crosscheck, f_sweep);
criterion_main!(benches);
