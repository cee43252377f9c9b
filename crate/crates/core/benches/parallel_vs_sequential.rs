use std::hint::black_box;

use borel_core::borel::{borel_bn, borel_bn_with};
use borel_core::exec::Exec;
use borel_core::sample::{random_quad, stream};
use borel_core::suites::{self, Property, SuiteConfig};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const EXECS: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn batch(c: &mut Criterion) {
    let mut group = c.benchmark_group("borel_bn_batch");
    for n in [3, 5] {
        let quads: Vec<_> = (0..32).map(|i| random_quad(n, &mut stream(7, i))).collect();
        for (name, exec) in EXECS {
            group.bench_with_input(BenchmarkId::new(name, n), &quads, |b, qs| {
                b.iter(|| exec.sum(qs.len(), |i| borel_bn(black_box(&qs[i]))));
            });
        }
    }
    group.finish();
}

fn single_quad(c: &mut Criterion) {
    let mut group = c.benchmark_group("borel_bn_single");
    let q = random_quad(7, &mut stream(7, 0));
    for (name, exec) in EXECS {
        group.bench_function(name, |b| b.iter(|| borel_bn_with(black_box(&q), exec)));
    }
    group.finish();
}

fn suite(c: &mut Criterion) {
    let mut group = c.benchmark_group("cocycle_suite_n4");
    group.sample_size(10);
    for (name, exec) in EXECS {
        let cfg = SuiteConfig { exec, ..SuiteConfig::new(Property::Cocycle, 4, 20, 1) };
        group.bench_function(name, |b| b.iter(|| suites::run(black_box(&cfg)).expect("valid suite")));
    }
    group.finish();
}

criterion_group!(benches, batch, single_quad, suite);
criterion_main!(benches);
