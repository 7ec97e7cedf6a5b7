use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use muxsim_bench::{counting_config, squeezed_vacuum};
use muxsim_core::analytic::{gain, total_gain, ArrayConfig, PairNumberDistribution, RouterScheme};
use muxsim_core::fock::{apply_loss, apply_spdc, g2_zero, herald, FockState, DEFAULT_CUTOFF};
use muxsim_core::montecarlo::{evaluate_scheme, simulate_pulses_with_threads, HeraldingScheme};
use muxsim_core::{DetectorModel, HeraldCondition};

fn analytic(c: &mut Criterion) {
    let d = PairNumberDistribution::poisson(0.1).unwrap();
    c.bench_function("gain m=1024", |b| {
        b.iter(|| gain(black_box(1024), &d).unwrap())
    });
    let config = ArrayConfig::new(16, d).with_routers(0.95, 0.97, 1.0);
    c.bench_function("total_gain m=16 hybrid", |b| {
        b.iter(|| total_gain(black_box(&config), RouterScheme::Hybrid).unwrap())
    });
}

fn fock(c: &mut Criterion) {
    let vacuum = FockState::vacuum(2, DEFAULT_CUTOFF).unwrap();
    c.bench_function("apply_spdc cutoff 4", |b| {
        b.iter(|| apply_spdc(black_box(&vacuum), 0, 1, 0.25).unwrap())
    });
    let tmsv = squeezed_vacuum(0.25);
    let bucket = DetectorModel::bucket(0.6).unwrap();
    c.bench_function("loss + bucket herald + g2", |b| {
        b.iter(|| {
            let lossy = apply_loss(black_box(&tmsv), 0, 0.7).unwrap();
            let lossy = apply_loss(&lossy, 1, 0.7).unwrap();
            let h = herald(&lossy, 0, &bucket, HeraldCondition::ClickedAtLeastOnce).unwrap();
            g2_zero(&h.conditional, 0).unwrap()
        })
    });
    let scheme = HeraldingScheme::bucket60_four_sources();
    c.bench_function("evaluate 4-source scheme", |b| {
        b.iter(|| evaluate_scheme(&scheme, black_box(0.2), DEFAULT_CUTOFF).unwrap())
    });
}

fn monte_carlo(c: &mut Criterion) {
    let pulses = 1 << 20;
    let mut group = c.benchmark_group("simulate_pulses");
    group.throughput(Throughput::Elements(pulses));
    group.sample_size(10);
    for m in [1u32, 4, 16] {
        let config = counting_config(m, 0.062);
        group.bench_with_input(BenchmarkId::new("sources", m), &config, |b, cfg| {
            b.iter(|| simulate_pulses_with_threads(cfg, pulses, 7, Some(1)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, analytic, fock, monte_carlo);
criterion_main!(benches);
