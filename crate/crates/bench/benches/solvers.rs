use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use lovelock_core::curvature::{lovelock_tensor, CouplingVector};
use lovelock_core::doubleform::{identity_metric, metric_inverse};
use lovelock_core::fg_expansion::{fg_solve, obstruction_tensor, BoundaryData, FgOptions};
use lovelock_core::indicial::{green_apply, GreenKind, LogGrid, QuadratureOptions};
use lovelock_core::yamabe::{yamabe_solve, YamabeProblem};
use lovelock_core::{models, random, Q};

fn bd(seed: u64, n: usize, active: usize, cap: u32) -> BoundaryData {
    let mut r = random::rng(seed);
    BoundaryData::new(n, active, cap, random::boundary_metric(&mut r, n, active, cap)).unwrap()
}

fn doubleforms(c: &mut Criterion) {
    let mut r = random::rng(1);
    let m = 6;
    let rm = random::curvature_form(&mut r, m);
    let ginv = metric_inverse(&identity_metric(m)).unwrap();
    c.bench_function("kn_square_m6", |b| b.iter(|| black_box(&rm).kn(&rm).unwrap()));
    let r2 = rm.kn(&rm).unwrap();
    c.bench_function("contract3_m6", |b| b.iter(|| black_box(&r2).contract_n_inv(3, &ginv)));
}

fn curvature(c: &mut Criterion) {
    let g = models::hyperbolic(5, 4, &Q::ONE).unwrap();
    let cv = CouplingVector::unit(4, vec![Q::ONE, Q::new(1, 5)]).unwrap();
    c.bench_function("lovelock_hyperbolic_m5_cap4", |b| b.iter(|| lovelock_tensor(black_box(&g), &cv).unwrap()));
}

fn expansions(c: &mut Criterion) {
    let mut g = c.benchmark_group("expansions");
    g.sample_size(10);
    let b4 = bd(7, 4, 1, 5);
    let cv = CouplingVector::unit(4, vec![Q::ONE, Q::new(1, 5)]).unwrap();
    g.bench_function("fg_solve_n4_order4", |b| b.iter(|| fg_solve(black_box(&b4), &cv, 4, &FgOptions::default()).unwrap()));
    let b6 = bd(13, 4, 2, 6);
    g.bench_function("obstruction_n4_cap6", |b| b.iter(|| obstruction_tensor(black_box(&b6), &cv).unwrap()));
    let p = YamabeProblem::new(bd(3, 3, 1, 6), vec![Q::ONE]).unwrap();
    g.bench_function("yamabe_n3_with_log", |b| b.iter(|| yamabe_solve(black_box(&p), 5).unwrap()));
    g.finish();
}

fn green(c: &mut Criterion) {
    let d = 8f64.sqrt();
    let (am, ap) = (2.0 - d / 2.0, 2.0 + d / 2.0);
    let grid = LogGrid::new(1e-3, 2.0, 10_000).unwrap();
    let opts = QuadratureOptions::default();
    let f = |x: f64| x.powi(5) * (-x).exp();
    let mut g = c.benchmark_group("green");
    g.sample_size(10);
    g.bench_function("g_infinity_1e4", |b| b.iter(|| green_apply(GreenKind::Infinity, &f, black_box(&grid), am, ap, &opts).unwrap()));
    g.finish();
}

criterion_group!(benches, doubleforms, curvature, expansions, green);
criterion_main!(benches);
