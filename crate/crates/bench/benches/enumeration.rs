use criterion::{black_box, criterion_group, criterion_main, Criterion};
use nestkit::analysis::{conditions, is_interlocking_def};
use nestkit::finite::enumerate_nests;
use nestkit::harness::{run_suite, SuiteConfig};
use nestkit::{generated_order, Topology, Universe};

fn nests(c: &mut Criterion) {
    let u = Universe::new(4).unwrap();
    c.bench_function("enumerate_nests n=4", |b| {
        b.iter(|| enumerate_nests(black_box(&u), true).unwrap().count())
    });
}

fn per_nest(c: &mut Criterion) {
    let u = Universe::new(4).unwrap();
    let all: Vec<_> = enumerate_nests(&u, true).unwrap().collect();
    c.bench_function("generated_order all nests n=4", |b| {
        b.iter(|| all.iter().map(|n| generated_order(n).roster(&u).len()).sum::<usize>())
    });
    c.bench_function("conditions all nests n=4", |b| {
        b.iter(|| all.iter().filter(|n| conditions(n).c1).count())
    });
    c.bench_function("interlocking all nests n=4", |b| {
        b.iter(|| all.iter().filter(|n| is_interlocking_def(n)).count())
    });
    c.bench_function("subbase topology all nests n=4", |b| {
        b.iter(|| all.iter().map(|n| Topology::from_subbase(n).unwrap().len()).sum::<usize>())
    });
}

fn suites(c: &mut Criterion) {
    let mut g = c.benchmark_group("suites");
    g.sample_size(10);
    for name in ["paper-examples", "interlocking-triple", "section4"] {
        g.bench_function(name, |b| b.iter(|| run_suite(name, &SuiteConfig::default()).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, nests, per_nest, suites);
criterion_main!(benches);
