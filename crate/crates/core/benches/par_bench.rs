//! Criterion suite comparing the data-parallel sweeps against a
//! single-thread run of the same code path.
//!
//! With the default `parallel` feature the two benchmark groups run the
//! identical rayon code inside pools of 1 and N threads; built with
//! `--no-default-features` the sequential fallback is what gets timed.

use criterion::{criterion_group, criterion_main, Criterion};

use grauert_core::eigenbasis::{enumerate_spectrum, EigenbasisSpec};
use grauert_core::geometry::{exp_imaginary, ModelManifold};
use grauert_core::projector::{p_tempered, SpectralWindow};
use grauert_core::zeros::{random_wave_ensemble, TestFunction};

fn tempered_sweep() -> f64 {
    let model = ModelManifold::sphere(2).unwrap();
    let modes = enumerate_spectrum(&EigenbasisSpec::new(model, 120.0)).unwrap();
    let zeta = exp_imaginary(&model, &[1.0, 0.0, 0.0], &[0.0, 0.3, 0.0]).unwrap();
    let window = SpectralWindow::long(120.0).unwrap();
    p_tempered(&modes, &window, 0.3, &zeta).unwrap().value
}

fn zeros_ensemble() -> f64 {
    let f = TestFunction::Bump { xi0: 0.5 };
    random_wave_ensemble(40, 16, 99, &f).unwrap().mean_pairing
}

#[cfg(feature = "parallel")]
fn bench(c: &mut Criterion) {
    let seq_pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let mut g = c.benchmark_group("tempered_sweep");
    g.bench_function("sequential", |b| {
        b.iter(|| seq_pool.install(tempered_sweep))
    });
    g.bench_function("parallel", |b| b.iter(tempered_sweep));
    g.finish();

    let mut g = c.benchmark_group("zeros_ensemble");
    g.bench_function("sequential", |b| {
        b.iter(|| seq_pool.install(zeros_ensemble))
    });
    g.bench_function("parallel", |b| b.iter(zeros_ensemble));
    g.finish();
}

#[cfg(not(feature = "parallel"))]
fn bench(c: &mut Criterion) {
    let mut g = c.benchmark_group("tempered_sweep");
    g.bench_function("sequential-fallback", |b| b.iter(tempered_sweep));
    g.finish();

    let mut g = c.benchmark_group("zeros_ensemble");
    g.bench_function("sequential-fallback", |b| b.iter(zeros_ensemble));
    g.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
