//! Sequential vs data-parallel suite execution on the bundled corpus.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use serrekb::corpus::bundled;
use serrekb::parallel::Execution;
use serrekb::suite::{run_criterion, run_suite, SuiteConfig};

fn suite(c: &mut Criterion) {
    let corpus = bundled().expect("bundled corpus");
    let mut group = c.benchmark_group("suite");
    group.sample_size(10);
    for (label, execution) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
        let cfg = SuiteConfig { execution, ..SuiteConfig::default() };
        group.bench_function(label, |b| b.iter(|| black_box(run_suite(&corpus, &cfg))));
    }
    group.finish();
}

fn duality_batch(c: &mut Criterion) {
    let corpus = bundled().expect("bundled corpus");
    let alg = corpus.iter().find(|a| a.name == "nakayama3_q").expect("nakayama3_q");
    let mut group = c.benchmark_group("duality_batch");
    for (label, execution) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
        let cfg = SuiteConfig { execution, ..SuiteConfig::default() };
        group.bench_function(label, |b| b.iter(|| black_box(run_criterion(1, alg, &cfg))));
    }
    group.finish();
}

criterion_group!(benches, suite, duality_batch);
criterion_main!(benches);
