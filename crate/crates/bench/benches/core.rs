use std::hint::black_box;

use anonq_bench::{general_game, grouped_profile, lipschitz_game, random_probs, random_profile};
use anonq_core::experiment::algorithm_rng;
use anonq_core::{
    evaluate_profile, lipschitz_pure_ne, pbd_pmf, smoothed_approx_ne, table_oracle, SmoothedParams, SmoothingKernel,
};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn distributions(c: &mut Criterion) {
    let mut g = c.benchmark_group("pbd_pmf");
    for n in [64usize, 256, 1024, 4096] {
        let probs = random_probs(n, 1);
        g.bench_with_input(BenchmarkId::from_parameter(n), &probs, |b, p| {
            b.iter(|| pbd_pmf(black_box(p)))
        });
    }
    g.finish();
}

fn evaluation(c: &mut Criterion) {
    let mut g = c.benchmark_group("evaluate_profile");
    g.sample_size(10);
    for n in [64usize, 256] {
        let game = general_game(n, 2);
        let p = random_profile(n, 3);
        g.bench_with_input(BenchmarkId::new("distinct", n), &n, |b, _| {
            b.iter(|| evaluate_profile(&game, black_box(&p), 1e-9))
        });
    }
    for n in [256usize, 1024] {
        let game = general_game(n, 2);
        let p = grouped_profile(n, 2);
        g.bench_with_input(BenchmarkId::new("two-values", n), &n, |b, _| {
            b.iter(|| evaluate_profile(&game, black_box(&p), 1e-9))
        });
    }
    g.finish();
}

fn smoothing(c: &mut Criterion) {
    let mut g = c.benchmark_group("smoothing");
    g.sample_size(10);
    for n in [256usize, 1024] {
        let game = general_game(n, 4);
        let zeta = (n as f64).powf(-0.25);
        g.bench_with_input(BenchmarkId::new("kernel", n), &n, |b, &n| {
            b.iter(|| SmoothingKernel::new(n, zeta))
        });
        let kernel = SmoothingKernel::new(n, zeta).unwrap();
        g.bench_with_input(BenchmarkId::new("apply", n), &n, |b, _| {
            b.iter(|| kernel.apply(black_box(&game)))
        });
    }
    g.finish();
}

fn algorithms(c: &mut Criterion) {
    let mut g = c.benchmark_group("algorithms");
    g.sample_size(10);
    for n in [512usize, 4096] {
        let game = lipschitz_game(n, 5);
        g.bench_with_input(BenchmarkId::new("lipschitz", n), &n, |b, _| {
            b.iter(|| {
                let mut o = table_oracle(&game).unwrap();
                lipschitz_pure_ne(&mut o, 0.0)
            })
        });
    }
    for n in [256usize, 1024] {
        let game = general_game(n, 6);
        let params = SmoothedParams::defaults(n).unwrap();
        g.bench_with_input(BenchmarkId::new("smoothed", n), &n, |b, _| {
            b.iter(|| {
                let mut o = table_oracle(&game).unwrap();
                let mut rng = algorithm_rng(7);
                smoothed_approx_ne(&mut o, &params, &mut rng)
            })
        });
    }
    g.finish();
}

criterion_group!(benches, distributions, evaluation, smoothing, algorithms);
criterion_main!(benches);
