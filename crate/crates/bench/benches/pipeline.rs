use std::hint::black_box;

use codon_tm::{bisimulate, compile_ruleset, enumerate_balanced, tm_run, Arrival, CompileMode, SimInstance};
use codon_tm_bench::corpus_tm;
use criterion::{criterion_group, criterion_main, Criterion};

fn codons(c: &mut Criterion) {
    c.bench_function("enumerate_balanced/16", |b| b.iter(|| enumerate_balanced(black_box(16)).unwrap()));
}

fn compile(c: &mut Criterion) {
    let (spec, codec) = corpus_tm("utm55");
    c.bench_function("compile/utm55/dual", |b| {
        b.iter(|| compile_ruleset(black_box(&spec), &codec, CompileMode::Dual).unwrap())
    });
}

fn run(c: &mut Criterion) {
    let (spec, codec) = corpus_tm("utm55");
    let mut group = c.benchmark_group("run/utm55");
    group.bench_function("mechanical", |b| {
        b.iter(|| {
            let mut sim = SimInstance::from_spec(&spec, &codec, CompileMode::Dual, Arrival::Deterministic).unwrap();
            sim.run_quiet(black_box(10_000)).unwrap()
        })
    });
    group.bench_function("mechanical-traced", |b| {
        b.iter(|| {
            let mut sim = SimInstance::from_spec(&spec, &codec, CompileMode::Dual, Arrival::Deterministic).unwrap();
            sim.run(black_box(10_000)).unwrap()
        })
    });
    group.bench_function("stochastic", |b| {
        b.iter(|| {
            let arrival = Arrival::Stochastic { seed: 1 };
            let mut sim = SimInstance::from_spec(&spec, &codec, CompileMode::Dual, arrival).unwrap();
            sim.run_quiet(black_box(10_000)).unwrap()
        })
    });
    group.bench_function("classical", |b| b.iter(|| tm_run(black_box(&spec), 10_000)));
    group.bench_function("bisimulate", |b| {
        b.iter(|| bisimulate(black_box(&spec), &codec, CompileMode::Dual, 10_000).unwrap())
    });
    group.finish();
}

criterion_group!(benches, codons, compile, run);
criterion_main!(benches);
