use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qgauss::gauss::verify_matrix_relations;
use qgauss::ncpoly::check_confluence;
use qgauss::presets::{run_expected_suite, Built, Preset};
use qgauss::{Budget, Exec};

fn built(name: &str) -> Built {
    Built::new(Preset::builtin(name, Budget::default()).unwrap(), Budget::default()).unwrap()
}

fn modes() -> Vec<(&'static str, Exec)> {
    let mut v = vec![("sequential", Exec::Sequential)];
    #[cfg(feature = "parallel")]
    v.push(("parallel", Exec::Parallel));
    v
}

fn suites(c: &mut Criterion) {
    let mut group = c.benchmark_group("expected_suite");
    for name in ["glq3", "spq2", "glq21"] {
        let b = built(name);
        for (label, exec) in modes() {
            group.bench_with_input(BenchmarkId::new(label, name), &exec, |bench, &exec| {
                bench.iter(|| run_expected_suite(&b.suite_input(), exec).unwrap())
            });
        }
    }
    group.finish();
}

fn matrix_relations(c: &mut Criterion) {
    let mut group = c.benchmark_group("matrix_relations");
    let b = built("glq3");
    for (label, exec) in modes() {
        group.bench_with_input(BenchmarkId::new(label, "glq3"), &exec, |bench, &exec| {
            bench.iter(|| verify_matrix_relations(&b.gauss, &b.preset.r, None, exec).unwrap())
        });
    }
    group.finish();
}

fn confluence(c: &mut Criterion) {
    let mut group = c.benchmark_group("confluence_degree_4");
    let p = Preset::builtin("spq2", Budget::default()).unwrap();
    for (label, exec) in modes() {
        group.bench_with_input(BenchmarkId::new(label, "spq2"), &exec, |bench, &exec| {
            bench.iter(|| check_confluence(&p.frt, 4, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = suites, matrix_relations, confluence
}
criterion_main!(benches);
