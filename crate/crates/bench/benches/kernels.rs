use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use fzddn_core::bethe::{bethe_sweep, BETHE_TOL};
use fzddn_core::chain::global_hamiltonian;
use fzddn_core::fz::{rmatrix_normalized, ybe_residual};
use fzddn_core::transfer::transfer_t3;
use fzddn_core::{Boundary, ChainSpec, Complex64, RootContext, SpectralPoint};

fn point(a: f64, b: f64) -> SpectralPoint {
    SpectralPoint::new(Complex64::from_polar(1.0, a), Complex64::from_polar(1.0, b)).unwrap()
}

fn chain(n: usize, sites: usize, boundary: Boundary) -> ChainSpec {
    ChainSpec::new(RootContext::new(n).unwrap(), sites, boundary, 1.0, -1.0).unwrap()
}

fn kernels(c: &mut Criterion) {
    let ctx3 = RootContext::new(3).unwrap();
    let ctx5 = RootContext::new(5).unwrap();
    c.bench_function("rmatrix_normalized n=5", |b| {
        b.iter(|| rmatrix_normalized(&ctx5, black_box(point(0.3, 1.1))))
    });
    c.bench_function("ybe_residual n=3", |b| {
        b.iter(|| ybe_residual(&ctx3, point(0.3, 1.1), point(2.0, -0.4)))
    });
    let periodic = chain(3, 4, Boundary::Periodic);
    c.bench_function("hamiltonian n=3 L=4", |b| b.iter(|| global_hamiltonian(black_box(&periodic))));
    c.bench_function("transfer_t3 n=3 L=4", |b| b.iter(|| transfer_t3(&periodic, point(0.3, 1.1))));
    let open = chain(3, 4, Boundary::Open);
    c.bench_function("transfer_t3 open n=3 L=4", |b| b.iter(|| transfer_t3(&open, point(0.3, 1.1))));
}

fn bethe(c: &mut Criterion) {
    let mut g = c.benchmark_group("bethe");
    g.sample_size(10);
    let spec = chain(3, 2, Boundary::Periodic);
    g.bench_function("sweep n=3 L=2", |b| b.iter(|| bethe_sweep(&spec, 0, BETHE_TOL)));
    g.finish();
}

criterion_group!(benches, kernels, bethe);
criterion_main!(benches);
