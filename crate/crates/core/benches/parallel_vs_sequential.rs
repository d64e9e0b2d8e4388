use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use laminar::analysis::{verify_recurrence_theorems, Seed, Theorem, VerifyParams};
use laminar::circle::Precision;
use laminar::lamination::{check_axioms_with, pullback_closure_with, Class};
use laminar::markov::{exact_periods_with, tent};
use laminar::Exec;

const STRATEGIES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn generators() -> Vec<Class> {
    ["{1/12,7/12}", "{1/7,2/7,4/7}"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect()
}

fn laminations(c: &mut Criterion) {
    let gens = generators();
    let lam = pullback_closure_with(2, &gens, 12, Exec::Parallel).unwrap();
    let mut group = c.benchmark_group("lamination");
    group.sample_size(10);
    for (name, exec) in STRATEGIES {
        group.bench_with_input(BenchmarkId::new("pullback_depth_12", name), &exec, |b, &exec| {
            b.iter(|| pullback_closure_with(2, black_box(&gens), 12, exec).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("axioms_depth_12", name), &exec, |b, &exec| {
            b.iter(|| check_axioms_with(black_box(&lam), exec))
        });
    }
    group.finish();
}

fn verification(c: &mut Criterion) {
    let lam = pullback_closure_with(2, &generators(), 10, Exec::Parallel).unwrap();
    let seeds: Vec<Seed> = lam
        .classes()
        .iter()
        .filter(|s| s.class.len() >= 2)
        .filter(|s| laminar::lamination::is_persistent_cutpoint(&s.class, 2) == Ok(true))
        .map(|s| Seed::Exact(s.class.clone()))
        .collect();
    let params = VerifyParams {
        max_periods: vec![4, 8, 12],
        budget: 100,
        precision: Precision(20),
    };
    let mut group = c.benchmark_group("limdend_depth_10");
    group.sample_size(10);
    for (name, exec) in STRATEGIES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| verify_recurrence_theorems(&lam, Theorem::Limdend, black_box(&seeds), &params, exec).unwrap())
        });
    }
    group.finish();
}

fn periods(c: &mut Criterion) {
    let f = tent();
    let mut group = c.benchmark_group("tent_periods_to_12");
    group.sample_size(10);
    for (name, exec) in STRATEGIES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| exact_periods_with(black_box(&f), 12, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, laminations, verification, periods);
criterion_main!(benches);
