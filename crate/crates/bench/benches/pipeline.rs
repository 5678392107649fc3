use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use su11::analysis::{critical_loss, sweep, SweepRequest, SweepVariable};
use su11::fock::oracle_propagate_unchecked;
use su11::{DetectionKind, InputSpec, InterferometerConfig, PhaseWindow, Propagator, Sensor};

fn propagation(c: &mut Criterion) {
    let spec = InputSpec::coherent_squeezed(2.0, 1.0);
    let lossy = InterferometerConfig::balanced(1.0).with_loss(0.1);
    c.bench_function("propagator/new", |b| b.iter(|| Propagator::new(black_box(&spec), &lossy).unwrap()));
    let prop = Propagator::new(&spec, &lossy).unwrap();
    c.bench_function("propagator/at", |b| b.iter(|| prop.at(black_box(0.3)).unwrap()));
}

fn detection(c: &mut Criterion) {
    let spec = InputSpec::coherent(2.0);
    let config = InterferometerConfig::balanced(1.0).with_loss(0.05);
    let mut group = c.benchmark_group("sensitivity");
    for det in [DetectionKind::parity(), DetectionKind::homodyne(), DetectionKind::intensity()] {
        let sensor = Sensor::new(det.clone(), &spec, &config).unwrap();
        group.bench_function(format!("{}/at", det.name()), |b| b.iter(|| sensor.sensitivity(black_box(0.2)).unwrap()));
        group.bench_function(format!("{}/optimal", det.name()), |b| {
            b.iter(|| sensor.optimal(PhaseWindow::full()).unwrap())
        });
    }
    group.finish();
}

fn analysis(c: &mut Criterion) {
    let spec = InputSpec::coherent(2.0);
    let config = InterferometerConfig::balanced(1.0);
    let mut group = c.benchmark_group("analysis");
    group.sample_size(10);
    let req = SweepRequest::new(SweepVariable::Phi, (-1.0, 1.0, 0.005), spec, config.with_loss(0.05), vec![DetectionKind::parity()]);
    group.bench_function("phi_sweep_401", |b| b.iter(|| sweep(black_box(&req)).unwrap()));
    group.bench_function("critical_loss_parity", |b| {
        b.iter(|| critical_loss(&DetectionKind::parity(), &spec, &config, PhaseWindow::full()).unwrap())
    });
    group.finish();
}

fn oracle(c: &mut Criterion) {
    let spec = InputSpec::coherent(1.0);
    let config = InterferometerConfig::balanced(0.5).with_loss(0.1);
    let mut group = c.benchmark_group("fock");
    group.sample_size(10);
    for cutoff in [20, 40] {
        group.bench_function(format!("propagate/cutoff={cutoff}"), |b| {
            b.iter(|| oracle_propagate_unchecked(&spec, &config, black_box(0.5), cutoff).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, propagation, detection, analysis, oracle);
criterion_main!(benches);
