//! Hot-path benchmarks: kernel assembly, dressed-state diagonalization, and
//! the per-frequency spectrum routes.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lspsim::geometry::{EmitterEnsemble, Orientation, SphereGeometry};
use lspsim::hamiltonian::{bright_initial_state, build_effective, dressed_states};
use lspsim::material::DrudeMaterial;
use lspsim::modes::{extract_modes, lowdin};
use lspsim::spectra::{
    frequency_grid, kernel_matrix, spectrum_continuous, spectrum_effective, Correction,
};
use lspsim::units::{debye_to_si, ev_to_rad_s};
use num_complex::Complex64;

fn ring(ne: usize) -> (EmitterEnsemble, SphereGeometry, DrudeMaterial) {
    let geom = SphereGeometry { radius: 8e-9 };
    let ens = EmitterEnsemble::ring(
        ne,
        &geom,
        2e-9,
        debye_to_si(24.0),
        Orientation::Polar,
        ev_to_rad_s(2.95),
        2.4e9,
    );
    (ens, geom, DrudeMaterial::silver())
}

fn bench_extract_modes(c: &mut Criterion) {
    let mut group = c.benchmark_group("extract_modes");
    for ne in [1usize, 8, 24] {
        let (ens, geom, mat) = ring(ne);
        group.bench_with_input(BenchmarkId::from_parameter(ne), &ne, |b, _| {
            b.iter(|| extract_modes(&ens, &mat, &geom, 30).unwrap())
        });
    }
    group.finish();
}

fn bench_kernel_matrix(c: &mut Criterion) {
    let mut group = c.benchmark_group("kernel_matrix");
    for ne in [1usize, 8, 24] {
        let (ens, geom, mat) = ring(ne);
        let set = extract_modes(&ens, &mat, &geom, 30).unwrap();
        let w = ev_to_rad_s(2.9);
        group.bench_with_input(BenchmarkId::from_parameter(ne), &ne, |b, _| {
            b.iter(|| kernel_matrix(&set, w, Correction::On))
        });
    }
    group.finish();
}

fn bench_dressed_states(c: &mut Criterion) {
    let mut group = c.benchmark_group("dressed_states");
    group.sample_size(20);
    for ne in [1usize, 8, 24] {
        let (ens, geom, mat) = ring(ne);
        let set = extract_modes(&ens, &mat, &geom, 30).unwrap();
        let low = lowdin(&set).unwrap();
        let h = build_effective(&ens, &set, &low).unwrap();
        let initial = bright_initial_state(&h);
        group.bench_with_input(BenchmarkId::from_parameter(ne), &ne, |b, _| {
            b.iter(|| dressed_states(&h, &initial).unwrap())
        });
    }
    group.finish();
}

fn bench_spectrum_routes(c: &mut Criterion) {
    let (ens, geom, mat) = ring(8);
    let set = extract_modes(&ens, &mat, &geom, 30).unwrap();
    let grid = frequency_grid(ens.omega0, ev_to_rad_s(0.5), 500);
    let initial = vec![Complex64::new(1.0, 0.0); ens.len()];

    let mut group = c.benchmark_group("spectrum_500pts_ne8");
    group.sample_size(20);
    group.bench_function("continuous", |b| {
        b.iter(|| spectrum_continuous(&set, &ens, &initial, &grid, Correction::On).unwrap())
    });
    let low = lowdin(&set).unwrap();
    let h = build_effective(&ens, &set, &low).unwrap();
    let bright = bright_initial_state(&h);
    group.bench_function("effective", |b| {
        b.iter(|| {
            let d = dressed_states(&h, &bright).unwrap();
            spectrum_effective(&d, &bright, ens.gamma0, &grid)
        })
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_extract_modes,
    bench_kernel_matrix,
    bench_dressed_states,
    bench_spectrum_routes
);
criterion_main!(benches);
