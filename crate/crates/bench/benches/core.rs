use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use iwt_core::convolve::convolve;
use iwt_core::grid::{log_nodes, DecayClass, GridFunction};
use iwt_core::quadrature::QuadratureConfig;
use iwt_core::specfun::kummer_psi_kernel;
use iwt_core::transform::{forward, tau_grid};

fn sample(nodes: &[f64]) -> GridFunction {
    GridFunction::from_real_fn(nodes, DecayClass::power_exp(2.0, 1.0), |x| x * x * (-x).exp()).unwrap()
}

fn kernel(c: &mut Criterion) {
    c.bench_function("kummer_psi_kernel a=0.5 tau=3 x=2", |b| b.iter(|| kummer_psi_kernel(black_box(0.5), black_box(3.0), black_box(2.0))));
    c.bench_function("kummer_psi_kernel a=1 tau=15 x=0.01", |b| b.iter(|| kummer_psi_kernel(black_box(1.0), black_box(15.0), black_box(0.01))));
}

fn transform(c: &mut Criterion) {
    let cfg = QuadratureConfig::default();
    let f = sample(&log_nodes(1e-6, 60.0, 80));
    let taus = tau_grid(1.0, 8, &cfg);
    let mut g = c.benchmark_group("transform");
    g.sample_size(10);
    g.bench_function("forward 8 taus", |b| b.iter(|| forward(black_box(&f), 1.0, &taus, &cfg).unwrap()));
    g.finish();
}

fn convolution(c: &mut Criterion) {
    let cfg = QuadratureConfig::default();
    let f = sample(&log_nodes(1e-6, 80.0, 60));
    let out = log_nodes(1e-3, 20.0, 8);
    let mut g = c.benchmark_group("convolve");
    g.sample_size(10);
    g.bench_function("8 output nodes", |b| b.iter(|| convolve(black_box(&f), &f, 1.0, &out, &cfg).unwrap()));
    g.finish();
}

criterion_group!(benches, kernel, transform, convolution);
criterion_main!(benches);
