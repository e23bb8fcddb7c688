//! End-to-end acceptance checks. Each test prints one pass/fail line (visible
//! with `--nocapture`, or on failure) and asserts the corresponding bound.

use lspsim::geometry::{EmitterEnsemble, Orientation, SphereGeometry};
use lspsim::greens::ModeParams;
use lspsim::material::DrudeMaterial;
use lspsim::modes::{extract_modes, lowdin};
use lspsim::shifts::{
    lamb_shift_classical, lamb_shift_effective, quantum_correction, static_shift,
};
use lspsim::spectra::{
    frequency_grid, kernel_entry_pv, spectrum_continuous, spectrum_effective, spectrum_ideal,
    Correction,
};
use lspsim::hamiltonian::{bright_initial_state, build_effective, dressed_states};
use lspsim::units::{debye_to_si, ev_to_rad_s, rad_s_to_ev};
use lspsim_cli::rabi::{self, Branch};
use ndarray::Array2;
use ndarray_linalg::Inverse;
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const GAMMA0: f64 = 2.4e9;

fn verdict(criterion: u32, ok: bool, detail: &str) {
    println!(
        "criterion {criterion}: {} - {detail}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion {criterion} failed: {detail}");
}

/// Silver sphere scenario shared by most criteria.
fn silver_ring(
    ne: usize,
    radius_nm: f64,
    orientation: Orientation,
    omega0_ev: f64,
) -> (EmitterEnsemble, SphereGeometry, DrudeMaterial) {
    let geom = SphereGeometry { radius: radius_nm * 1e-9 };
    let ens = EmitterEnsemble::ring(
        ne,
        &geom,
        2e-9,
        debye_to_si(24.0),
        orientation,
        ev_to_rad_s(omega0_ev),
        GAMMA0,
    );
    (ens, geom, DrudeMaterial::silver())
}

/// Single-emitter mode params and g² for the R = 8 nm orthoradial scenario.
fn splitting_inputs(nmax: usize) -> (Vec<ModeParams>, Vec<f64>) {
    let (ens, geom, mat) = silver_ring(1, 8.0, Orientation::Polar, 2.95);
    let set = extract_modes(&ens, &mat, &geom, nmax).unwrap();
    let g2 = set.couplings.iter().map(|c| c[0] * c[0]).collect();
    (set.params, g2)
}

fn high_order_splitting(
    params: &[ModeParams],
    g2: &[f64],
    lambda0: &[f64],
    window: (f64, f64),
) -> Option<f64> {
    rabi::scan(params, g2, lambda0, GAMMA0, Branch::HighOrder, window.0, window.1, 240)
        .unwrap()
        .map(|a| a.splitting_mev)
}

#[test]
fn criterion_01_single_emitter_splitting() {
    let (params, g2) = splitting_inputs(60);
    let lam = vec![1.0; params.len()];
    let split = high_order_splitting(&params, &g2, &lam, (2.80, 3.15)).unwrap();
    let ok = (split - 88.0).abs() <= 8.8;
    verdict(1, ok, &format!("single-emitter splitting {split:.1} meV (target 88 +/- 10%)"));
}

#[test]
fn criterion_02_ring_100_splitting() {
    let (params, g2) = splitting_inputs(60);
    let lam = rabi::ring_lambda0(100, params.len(), Orientation::Polar);
    let split = high_order_splitting(&params, &g2, &lam, (2.75, 3.1)).unwrap();
    let ok = (split - 217.0).abs() <= 21.7;
    verdict(2, ok, &format!("100-emitter ring splitting {split:.1} meV (target 217 +/- 10%)"));
}

#[test]
fn criterion_03_ideal_sqrt_law() {
    let (params, g2) = splitting_inputs(60);
    let base = high_order_splitting(&params, &g2, &vec![1.0; params.len()], (2.80, 3.15)).unwrap();
    let mut ok = true;
    let mut detail = String::new();
    for ne in [1usize, 4, 9, 16, 25] {
        let ideal =
            high_order_splitting(&params, &g2, &vec![ne as f64; params.len()], (2.75, 3.3))
                .unwrap();
        let ratio = ideal / ((ne as f64).sqrt() * base);
        ok &= (0.9..=1.1).contains(&ratio);
        detail.push_str(&format!("N={ne}: {ratio:.3} "));
        if ne >= 2 {
            // the spread-out ring must couple more weakly than the ideal stack
            let window = (2.75, 3.4);
            let ideal_cmp = high_order_splitting(
                &params, &g2, &vec![ne as f64; params.len()], window,
            )
            .unwrap();
            let lam = rabi::ring_lambda0(ne, params.len(), Orientation::Polar);
            let ring = high_order_splitting(&params, &g2, &lam, window).unwrap();
            ok &= ring < ideal_cmp;
        }
    }
    verdict(3, ok, &format!("ideal splitting / sqrt(N) law ratios: {}", detail.trim_end()));
}

#[test]
fn criterion_04_second_gap_onset() {
    let (params, g2) = splitting_inputs(60);
    let mut onset = None;
    for ne in 2..=30 {
        let lam = rabi::ring_lambda0(ne, params.len(), Orientation::Polar);
        let dip = rabi::scan(&params, &g2, &lam, GAMMA0, Branch::Dipolar, 2.6, 2.95, 240)
            .unwrap();
        if dip.is_some_and(|a| a.visible()) {
            onset = Some(ne);
            break;
        }
    }
    let ok = onset.is_some_and(|n| (13..=19).contains(&n));
    verdict(
        4,
        ok,
        &format!("dipolar second gap first visible at N_e = {onset:?} (target 15 +/- 3, ring sweep)"),
    );
}

#[test]
fn criterion_05_quantum_correction_value() {
    let (ens, geom, mat) = silver_ring(1, 15.0, Orientation::Radial, 2.78);
    let set = extract_modes(&ens, &mat, &geom, 30).unwrap();
    // evaluate at the dipolar resonance, the strong-coupling point
    let omega0 = set.params[0].omega_n;
    let corr_mev = rad_s_to_ev(quantum_correction(&set, 0, omega0)) * 1e3;
    let ok = (corr_mev + 7.5).abs() <= 1.5;
    verdict(
        5,
        ok,
        &format!("silver R=15 nm correction {corr_mev:.2} meV at {:.2} eV (target -7.5 +/- 1.5)",
            rad_s_to_ev(omega0)),
    );
}

#[test]
fn criterion_06_gold_smallness_and_identity() {
    let geom = SphereGeometry { radius: 15e-9 };
    let mat = DrudeMaterial::gold();
    let ens = EmitterEnsemble::ring(
        1, &geom, 2e-9, debye_to_si(24.0), Orientation::Radial, ev_to_rad_s(2.0), GAMMA0,
    );
    let set = extract_modes(&ens, &mat, &geom, 30).unwrap();

    // smallness: correction vs classical shift magnitudes compared at their
    // maxima over the band containing the gold resonances
    let mut max_corr: f64 = 0.0;
    let mut max_classical: f64 = 0.0;
    for k in 0..=90 {
        let w = ev_to_rad_s(1.5 + 0.05 * k as f64);
        max_corr = max_corr.max(quantum_correction(&set, 0, w).abs());
        max_classical = max_classical
            .max(lamb_shift_classical(&mat, &geom, &ens.emitters[0], w, 30).unwrap().abs());
    }
    let ratio = max_corr / max_classical;

    // decomposition identity, pointwise over the visible band
    let mut max_rel: f64 = 0.0;
    for k in 0..=40 {
        let w = ev_to_rad_s(1.5 + 0.05 * k as f64);
        let eff = lamb_shift_effective(&set, 0, w);
        let cla = lamb_shift_classical(&mat, &geom, &ens.emitters[0], w, 30).unwrap();
        let corr = quantum_correction(&set, 0, w);
        max_rel = max_rel.max((eff - (cla + corr)).abs() / eff.abs().max(cla.abs()));
    }
    let ok = ratio < 0.05 && max_rel <= 1e-10;
    verdict(
        6,
        ok,
        &format!("gold correction/classical peak ratio {ratio:.4} (< 0.05), identity residual {max_rel:.2e} (<= 1e-10)"),
    );
}

#[test]
fn criterion_07_route_equivalence() {
    // dressed-state route vs per-frequency linear solve, single emitter
    let (ens, geom, mat) = silver_ring(1, 8.0, Orientation::Polar, 2.95);
    let set = extract_modes(&ens, &mat, &geom, 30).unwrap();
    let grid = frequency_grid(ens.omega0, ev_to_rad_s(0.5), 1200);
    let initial = vec![Complex64::new(1.0, 0.0)];
    let cont = spectrum_continuous(&set, &ens, &initial, &grid, Correction::On).unwrap();
    let low = lowdin(&set).unwrap();
    let h = build_effective(&ens, &set, &low).unwrap();
    let b = bright_initial_state(&h);
    let d = dressed_states(&h, &b).unwrap();
    let eff = spectrum_effective(&d, &b, ens.gamma0, &grid);
    let cn = cont.peak_normalized();
    let en = eff.peak_normalized();
    let linf = cn
        .iter()
        .zip(&en)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);

    // continuous vs rank-one closed form, ten coincident emitters
    let ens10 = EmitterEnsemble::coincident(
        10, &geom, 2e-9, debye_to_si(24.0), Orientation::Polar, ev_to_rad_s(2.95), GAMMA0,
    );
    let set10 = extract_modes(&ens10, &mat, &geom, 30).unwrap();
    // normalized bright state so the raw density matches the rank-one form
    let initial10 = vec![Complex64::new(0.1f64.sqrt(), 0.0); 10];
    let cont10 = spectrum_continuous(&set10, &ens10, &initial10, &grid, Correction::On).unwrap();
    let ideal10 = spectrum_ideal(&set, ens10.omega0, GAMMA0, 10, &grid, Correction::On);
    let rel = cont10
        .density
        .iter()
        .zip(&ideal10.density)
        .map(|(a, b)| (a - b).abs() / a.abs().max(b.abs()))
        .fold(0.0f64, f64::max);

    let ok = linf <= 1e-2 && rel <= 1e-10;
    verdict(
        7,
        ok,
        &format!("effective vs continuous Linf {linf:.2e} (<= 1e-2), continuous vs ideal rel {rel:.2e} (<= 1e-10)"),
    );
}

#[test]
fn criterion_08_rank_one_inverse() {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let ne = rng.gen_range(1..=8);
        let a = Complex64::new(rng.gen_range(0.2..2.0), rng.gen_range(-1.0..1.0));
        let b = Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
        let m = Array2::from_shape_fn((ne, ne), |(i, j)| {
            b + if i == j { a } else { Complex64::default() }
        });
        let direct = m.inv().unwrap();
        let corr = b / (a * (a + ne as f64 * b));
        for i in 0..ne {
            for j in 0..ne {
                let formula = -corr + if i == j { 1.0 / a } else { Complex64::default() };
                worst = worst.max((direct[(i, j)] - formula).norm());
            }
        }
    }
    let ok = worst <= 1e-12;
    verdict(8, ok, &format!("rank-one inverse worst elementwise error {worst:.2e} (<= 1e-12)"));
}

#[test]
fn criterion_09_static_limit() {
    let mat = DrudeMaterial::silver();
    let radius = 10e-9;
    let geom = SphereGeometry { radius };
    let d = debye_to_si(24.0);
    // near-zero probe frequency: the dynamic kernel must land on the
    // closed geometric sums
    let w = ev_to_rad_s(0.005);
    let mut worst: f64 = 0.0;
    for hr in [0.1, 0.2, 0.5] {
        let h = hr * radius;
        for orientation in [Orientation::Radial, Orientation::Polar] {
            let ens = EmitterEnsemble::ring(1, &geom, h, d, orientation, w, GAMMA0);
            let dynamic = lamb_shift_classical(&mat, &geom, &ens.emitters[0], w, 60).unwrap();
            let fixed = static_shift(&geom, mat.eps_background, orientation, d, h, 60);
            worst = worst.max((dynamic - fixed).abs() / fixed.abs());
        }
    }
    let ok = worst <= 1e-3;
    verdict(9, ok, &format!("static-limit relative deviation {worst:.2e} (<= 1e-3, N = 60)"));
}

#[test]
fn criterion_10_property_invariants() {
    // the full randomized suites live in the core crate's property tests;
    // re-check the key invariants here on a concrete scenario
    let (ens, geom, mat) = silver_ring(3, 8.0, Orientation::Polar, 2.95);
    let set = extract_modes(&ens, &mat, &geom, 12).unwrap();

    let mu_diag_ok = set
        .overlaps
        .iter()
        .all(|mu| (0..3).all(|i| (mu[(i, i)] - 1.0).abs() < 1e-12));
    let symmetric_ok = set
        .overlaps
        .iter()
        .all(|mu| (mu[(0, 1)] - mu[(1, 0)]).abs() < 1e-12);

    let low = lowdin(&set).unwrap();
    let h = build_effective(&ens, &set, &low).unwrap();
    let b = bright_initial_state(&h);
    let d = dressed_states(&h, &b).unwrap();
    let trace: Complex64 = (0..h.dim()).map(|k| h.matrix[(k, k)]).sum();
    let eigsum: Complex64 = d.eigenvalues.iter().sum();
    let trace_ok = (trace - eigsum).norm() < 1e-10 * trace.norm();

    let grid = frequency_grid(ens.omega0, ev_to_rad_s(0.4), 400);
    let spec = spectrum_effective(&d, &b, ens.gamma0, &grid);
    let nonneg_ok = spec.density.iter().all(|&v| v >= 0.0);

    let w = ev_to_rad_s(2.9);
    let pv = kernel_entry_pv(&mat, &geom, &ens, 0, 0, w, 12, 40001).unwrap();
    let closed = lamb_shift_effective(&extract_modes(&ens, &mat, &geom, 12).unwrap(), 0, w);
    let pv_ok = (pv.re - closed).abs() <= 1e-3 * closed.abs();

    let ok = mu_diag_ok && symmetric_ok && trace_ok && nonneg_ok && pv_ok;
    verdict(
        10,
        ok,
        &format!(
            "invariants: mu_ii=1 {mu_diag_ok}, symmetry {symmetric_ok}, trace {trace_ok}, D>=0 {nonneg_ok}, PV vs closed form {pv_ok}"
        ),
    );
}
