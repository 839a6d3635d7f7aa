use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dialgebra::algebra::{catalog, catalog_names, catalog_params, Bindings};
use dialgebra::cohomology::dialg_cohomology;
use dialgebra::derivations::classify::classify;
use dialgebra::derivations::{BiDegree, Variant};
use dialgebra::operad::brace_pi_single;
use dialgebra::par;
use dialgebra::scalars::int;

fn ones(name: &str) -> Bindings {
    catalog_params(name).unwrap().into_iter().map(|p| (p.to_string(), int(1))).collect()
}

fn modes() -> [(&'static str, bool); 2] {
    [("parallel", true), ("sequential", false)]
}

fn cohomology(c: &mut Criterion) {
    let d = catalog("Alg3_2", &ones("Alg3_2")).unwrap();
    let mut g = c.benchmark_group("dialg_cohomology_deg3");
    g.sample_size(10);
    for (label, on) in modes() {
        g.bench_function(BenchmarkId::from_parameter(label), |b| {
            par::set_enabled(on);
            b.iter(|| dialg_cohomology(&d, 3).unwrap())
        });
    }
    g.finish();
}

fn classification(c: &mut Criterion) {
    let cells: Vec<(String, Bindings)> = catalog_names().into_iter().map(|n| (n.to_string(), ones(n))).collect();
    let variants = [Variant::Plain, Variant::Quasi, Variant::Triple];
    let mut g = c.benchmark_group("classify_catalog");
    g.sample_size(10);
    for (label, on) in modes() {
        g.bench_function(BenchmarkId::from_parameter(label), |b| {
            par::set_enabled(on);
            b.iter(|| classify(&cells, &[BiDegree::new(1, 1)], &variants).unwrap())
        });
    }
    g.finish();
}

fn brace(c: &mut Criterion) {
    let d = catalog("Alg3_1", &ones("Alg3_1")).unwrap();
    let mut g = c.benchmark_group("brace_pi_pi");
    for (label, on) in modes() {
        g.bench_function(BenchmarkId::from_parameter(label), |b| {
            par::set_enabled(on);
            b.iter(|| brace_pi_single(&d))
        });
    }
    g.finish();
    par::set_enabled(true);
}

criterion_group!(kernels, cohomology, classification, brace);
criterion_main!(kernels);
