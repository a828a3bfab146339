use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use kummer_genus::batch::{random_corpus, run_parallel, run_sequential};
use kummer_genus::input::{parse_input, ParseOptions};
use kummer_genus::report;

fn corpus(c: &mut Criterion) {
    let mut group = c.benchmark_group("corpus");
    group.sample_size(20);
    for n in [50usize, 200] {
        let cases = random_corpus(n, 42);
        group.bench_with_input(BenchmarkId::new("sequential", n), &cases, |b, cases| {
            b.iter(|| run_sequential(black_box(cases), 0))
        });
        group.bench_with_input(BenchmarkId::new("parallel", n), &cases, |b, cases| {
            b.iter(|| run_parallel(black_box(cases), 0))
        });
    }
    group.finish();
}

fn single_job(c: &mut Criterion) {
    let text =
        "field p=13 f=1\ncomponent gamma=2 D=T^6+5*T^2+1 m=12\ncomponent gamma=3 D=T^4+T m=4\n";
    let mut config = parse_input(text, &ParseOptions::default()).unwrap();
    config.include_comparison = true;
    let mut group = c.benchmark_group("job");
    for parallel in [false, true] {
        config.parallel = parallel;
        let name = if parallel { "parallel" } else { "sequential" };
        group.bench_function(name, |b| {
            b.iter(|| report::run(black_box(&config)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, corpus, single_job);
criterion_main!(benches);
