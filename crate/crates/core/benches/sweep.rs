use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rotring::sweep::{parse_config, run_sweep_with, Schedule};
use rotring::{build_spectrum, equilibrium, RingParams, DEFAULT_OCCUPANCY_FLOOR};

fn two_period_recipe(points: usize) -> rotring::sweep::SweepSpec {
    parse_config(&format!(
        "radius_nm = 400\nflux_grid = 0:2:{points}\nomega_grid = -1e9:1e9:3\n\
         temperature_mK = 0,1\nelectrons = 10\noutputs = current,magnetization\n"
    ))
    .unwrap()
}

fn sweep_schedules(c: &mut Criterion) {
    let mut group = c.benchmark_group("sweep");
    group.sample_size(20);
    for points in [41, 401] {
        let spec = two_period_recipe(points);
        group.bench_with_input(BenchmarkId::new("sequential", points), &spec, |b, s| {
            b.iter(|| run_sweep_with(black_box(s), Schedule::Sequential).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("parallel", points), &spec, |b, s| {
            b.iter(|| run_sweep_with(black_box(s), Schedule::Parallel).unwrap())
        });
    }
    group.finish();
}

fn chemical_potential(c: &mut Criterion) {
    let params = RingParams::new(400e-9)
        .unwrap()
        .with_electrons(10)
        .unwrap()
        .with_temperature(3e-3)
        .unwrap()
        .with_reduced_flux(0.37)
        .unwrap();
    c.bench_function("spectrum_and_mu_n10_3mK", |b| {
        b.iter(|| {
            let s = build_spectrum(black_box(&params), DEFAULT_OCCUPANCY_FLOOR).unwrap();
            equilibrium(&s).unwrap()
        })
    });
}

criterion_group!(benches, sweep_schedules, chemical_potential);
criterion_main!(benches);
