//! Same jobs inside a one-thread rayon pool and the default pool. Built with
//! `--no-default-features` both arms run the sequential fallback.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use arrkit::chromatic::chromatic_model;
use arrkit::examples::{braid, lines_p2};
use arrkit::graph::Graph;
use arrkit::mvss::{build_e1_lattice, cohomology};
use arrkit::oscomplex::os_algebra;
use arrkit::poset::partition_lattice;
use arrkit::supportcoh::GradedRing;

fn jobs() -> Vec<(&'static str, Box<dyn Fn() + Sync>)> {
    vec![
        (
            "os-algebra K5",
            Box::new(|| {
                os_algebra(&partition_lattice(&Graph::complete(5))).unwrap();
            }),
        ),
        (
            "mv lines-p2 8",
            Box::new(|| {
                let s = lines_p2(8).unwrap();
                let e1 = build_e1_lattice(&os_algebra(s.poset()).unwrap(), &s).unwrap();
                cohomology(&e1).unwrap();
            }),
        ),
        (
            "mv braid 4",
            Box::new(|| {
                let s = braid(4).unwrap();
                let e1 = build_e1_lattice(&os_algebra(s.poset()).unwrap(), &s).unwrap();
                cohomology(&e1).unwrap();
            }),
        ),
        (
            "chromatic P2 C4",
            Box::new(|| {
                let m = chromatic_model(&GradedRing::projective(2), &Graph::cycle(4)).unwrap();
                cohomology(&m.e1).unwrap();
            }),
        ),
    ]
}

fn bench(c: &mut Criterion) {
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let default = rayon::ThreadPoolBuilder::new().build().unwrap();
    let mut group = c.benchmark_group(if arrkit::par::is_parallel() { "rayon" } else { "sequential build" });
    group.sample_size(10);
    for (name, job) in jobs() {
        group.bench_function(BenchmarkId::new("1 thread", name), |b| b.iter(|| single.install(&job)));
        group.bench_function(BenchmarkId::new("default pool", name), |b| b.iter(|| default.install(&job)));
    }
    group.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
