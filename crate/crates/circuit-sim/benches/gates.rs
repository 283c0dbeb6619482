//! Gate-kernel throughput. Run once with default features (rayon kernels) and
//! once with `--no-default-features` (sequential fallback); the benchmark ids
//! carry the mode so criterion reports the two side by side.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qmh_sim::{Circuit, CompiledCircuit, Control, GateKind, QuantumState, RegisterLayout, Statevector};
use std::sync::Arc;

const MODE: &str = if cfg!(feature = "parallel") { "parallel" } else { "sequential" };

fn layer(n: usize) -> Circuit {
    let mut c = Circuit::new(n);
    for q in 0..n {
        c.h(q);
    }
    for q in 0..n - 1 {
        c.cx(q, q + 1);
    }
    c.add(GateKind::Ry(0, 0.3), &[Control::on(1), Control::off(2)]);
    c.add(GateKind::Swap(3, 4), &[Control::on(5)]);
    c
}

fn bench_layer(cr: &mut Criterion) {
    let mut group = cr.benchmark_group(format!("gate-layer/{MODE}"));
    group.sample_size(10);
    for n in [16usize, 20, 22] {
        let layout = Arc::new(RegisterLayout::new().with("q", n).unwrap());
        let compiled = CompiledCircuit::new(&layer(n));
        let mut sv = Statevector::new(layout).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| sv.run_compiled(&compiled));
        });
    }
    group.finish();
}

fn bench_norm(cr: &mut Criterion) {
    let mut group = cr.benchmark_group(format!("norm/{MODE}"));
    group.sample_size(10);
    let layout = Arc::new(RegisterLayout::new().with("q", 22).unwrap());
    let sv = Statevector::new(layout).unwrap();
    group.bench_function("22", |b| b.iter(|| sv.norm_sqr()));
    group.finish();
}

criterion_group!(benches, bench_layer, bench_norm);
criterion_main!(benches);
