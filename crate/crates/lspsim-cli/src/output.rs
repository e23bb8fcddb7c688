//! Deterministic CSV and manifest emission. All floats use `{:.9e}` so a
//! given config always produces byte-identical files.

use std::fs;
use std::path::{Path, PathBuf};

use lspsim::hamiltonian::{BasisLabel, DressedStates};
use lspsim::spectra::Spectrum;
use lspsim::units::rad_s_to_ev;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::rabi::RabiReport;

fn num(x: f64) -> String {
    format!("{x:.9e}")
}

pub fn write_spectrum_csv(path: &Path, spectrum: &Spectrum) -> Result<()> {
    let normalized = spectrum.peak_normalized();
    let mut out = String::from("omega_eV,D_normalized,D_raw\n");
    for ((w, dn), dr) in spectrum.omega.iter().zip(&normalized).zip(&spectrum.density) {
        out.push_str(&format!("{},{},{}\n", num(rad_s_to_ev(*w)), num(*dn), num(*dr)));
    }
    fs::write(path, out)?;
    Ok(())
}

pub fn write_map_csv(path: &Path, rows: &[(f64, Spectrum)]) -> Result<()> {
    let mut out = String::from("omega0_eV,omega_eV,D_normalized\n");
    for (omega0, spectrum) in rows {
        let normalized = spectrum.peak_normalized();
        for (w, dn) in spectrum.omega.iter().zip(&normalized) {
            out.push_str(&format!(
                "{},{},{}\n",
                num(rad_s_to_ev(*omega0)),
                num(rad_s_to_ev(*w)),
                num(*dn)
            ));
        }
    }
    fs::write(path, out)?;
    Ok(())
}

/// Rows: (ω0 rad/s, effective, classical, correction), shifts in rad/s.
pub fn write_shifts_csv(path: &Path, rows: &[(f64, f64, f64, f64)]) -> Result<()> {
    let mut out = String::from("omega0_eV,effective_meV,classical_meV,correction_meV\n");
    let mev = |x: f64| num(rad_s_to_ev(x) * 1e3);
    for (w0, eff, cla, cor) in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            num(rad_s_to_ev(*w0)),
            mev(*eff),
            mev(*cla),
            mev(*cor)
        ));
    }
    fs::write(path, out)?;
    Ok(())
}

/// Dressed-state ladder with per-component weights.
pub fn write_ladder_csv(path: &Path, d: &DressedStates, n_emitters: usize, omega0: f64) -> Result<()> {
    let mut header = String::from("m,Omega_eV,Gamma_eV");
    for j in 0..n_emitters {
        header.push_str(&format!(",weight_emitter_{}", j + 1));
    }
    for label in &d.labels {
        if let BasisLabel::Mode { order, lowdin } = label {
            header.push_str(&format!(",weight_LSP_{}_{}", order, lowdin + 1));
        }
    }
    header.push_str(",bright_flag\n");

    // flag the most emitter-like state on each side of ω0
    let side_best = |below: bool| {
        (0..d.eigenvalues.len())
            .filter(|&m| (d.omega(m) < omega0) == below)
            .max_by(|&a, &b| {
                d.weights[a].emitter.partial_cmp(&d.weights[b].emitter).unwrap()
            })
    };
    let flagged = [side_best(true), side_best(false)];

    let mut out = header;
    for m in 0..d.eigenvalues.len() {
        out.push_str(&format!(
            "{},{},{}",
            m,
            num(rad_s_to_ev(d.omega(m))),
            num(rad_s_to_ev(d.gamma(m)))
        ));
        for w in &d.weights[m].per_component {
            out.push_str(&format!(",{}", num(*w)));
        }
        let flag = flagged.contains(&Some(m));
        out.push_str(&format!(",{}\n", u8::from(flag)));
    }
    fs::write(path, out)?;
    Ok(())
}

pub fn write_rabi_csv(path: &Path, rows: &[(String, RabiReport)]) -> Result<()> {
    let mut out = String::from(
        "ne,configuration,high_order_mev,anticrossing_ev,dipolar_mev,dipolar_omega0_ev,second_gap,convergence_flagged\n",
    );
    let opt = |v: Option<f64>| v.map_or(String::new(), num);
    for (config, r) in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.ne,
            config,
            opt(r.high_order.map(|a| a.splitting_mev)),
            opt(r.high_order.map(|a| a.omega0_ev)),
            opt(r.dipolar.map(|a| a.splitting_mev)),
            opt(r.dipolar.map(|a| a.omega0_ev)),
            u8::from(r.second_gap),
            u8::from(r.convergence_flagged),
        ));
    }
    fs::write(path, out)?;
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct Manifest {
    pub schema_version: u32,
    pub config_sha256: String,
    pub max_order: usize,
    /// (min eV, max eV, points) of the ω0 sweep actually used.
    pub omega0_sweep_ev: (f64, f64, usize),
    pub outputs: Vec<String>,
    pub convergence: Vec<ConvergenceEntry>,
}

/// Mode-doubling convergence check for one reported quantity; `flagged` means
/// the value drifted by more than 1% when the mode count was doubled.
#[derive(Debug, Serialize)]
pub struct ConvergenceEntry {
    pub label: String,
    pub value_mev: f64,
    pub flagged: bool,
}

pub fn config_hash(canonical_toml: &str) -> String {
    hex::encode(Sha256::digest(canonical_toml.as_bytes()))
}

pub fn write_manifest(path: &Path, manifest: &Manifest) -> Result<()> {
    let text = serde_json::to_string_pretty(manifest).expect("manifest serializes");
    fs::write(path, text + "\n")?;
    Ok(())
}

/// Generic matplotlib script that plots whatever CSVs the run produced.
pub fn write_plot_script(dir: &Path) -> Result<PathBuf> {
    let script = r#"#!/usr/bin/env python3
"""Plot the CSV outputs in this directory (spectrum, map, shifts, rabi)."""
import csv
import os
import sys

import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))


def load(name):
    path = os.path.join(here, name)
    if not os.path.exists(path):
        return None
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    return rows


def column(rows, key):
    return [float(r[key]) for r in rows]


spectrum = load("spectrum.csv")
if spectrum:
    plt.figure()
    plt.plot(column(spectrum, "omega_eV"), column(spectrum, "D_normalized"))
    plt.xlabel("emission frequency (eV)")
    plt.ylabel("normalized spectral density")
    plt.savefig(os.path.join(here, "spectrum.png"), dpi=150)

smap = load("map.csv")
if smap:
    import numpy as np

    w0 = sorted(set(column(smap, "omega0_eV")))
    w = sorted(set(column(smap, "omega_eV")))
    grid = np.zeros((len(w), len(w0)))
    idx0 = {v: i for i, v in enumerate(w0)}
    idx = {v: i for i, v in enumerate(w)}
    for r in smap:
        grid[idx[float(r["omega_eV"])], idx0[float(r["omega0_eV"])]] = float(
            r["D_normalized"]
        )
    plt.figure()
    plt.pcolormesh(w0, w, grid, shading="auto")
    plt.xlabel("emitter frequency (eV)")
    plt.ylabel("emission frequency (eV)")
    plt.colorbar(label="normalized spectral density")
    plt.savefig(os.path.join(here, "map.png"), dpi=150)

shifts = load("shifts.csv")
if shifts:
    plt.figure()
    x = column(shifts, "omega0_eV")
    for key in ("effective_meV", "classical_meV", "correction_meV"):
        plt.plot(x, column(shifts, key), label=key.replace("_meV", ""))
    plt.xlabel("emitter frequency (eV)")
    plt.ylabel("shift (meV)")
    plt.legend()
    plt.savefig(os.path.join(here, "shifts.png"), dpi=150)

rabi = load("rabi.csv")
if rabi:
    plt.figure()
    for config in sorted({r["configuration"] for r in rabi}):
        rows = [r for r in rabi if r["configuration"] == config and r["high_order_mev"]]
        plt.plot(
            [int(r["ne"]) for r in rows],
            [float(r["high_order_mev"]) for r in rows],
            marker="o",
            label=config,
        )
    plt.xlabel("number of emitters")
    plt.ylabel("Rabi splitting (meV)")
    plt.legend()
    plt.savefig(os.path.join(here, "rabi.png"), dpi=150)

print("wrote plots next to the CSV files")
sys.exit(0)
"#;
    let path = dir.join("plot.py");
    fs::write(&path, script)?;
    Ok(path)
}
