//! Scenario CLI: spectra, spectral maps, shift curves, Rabi reports, and
//! dressed-state ladders for emitters coupled to a Drude nanosphere.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lspsim::geometry::EmitterEnsemble;
use lspsim::hamiltonian::{bright_initial_state, build_effective, dressed_states};
use lspsim::modes::{extract_modes, lowdin, ModeSet};
use lspsim::spectra::{
    frequency_grid, spectrum_continuous, spectrum_effective, spectrum_ideal, Correction, Spectrum,
};
use lspsim::units::ev_to_rad_s;
use num_complex::Complex64;
use rayon::prelude::*;

use lspsim_cli::config::{self, Scenario};
use lspsim_cli::error::{CliError, Result};
use lspsim_cli::{output, rabi};

#[derive(Debug, Parser)]
#[command(name = "lspsim", version, about = "Plasmon-emitter strong coupling scenarios")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Emission spectrum at the configured emitter frequency
    Spectrum(SpectrumArgs),
    /// Spectral map over the ω0 sweep
    Map(CommonArgs),
    /// Lamb shift decomposition over the ω0 sweep
    Shifts(CommonArgs),
    /// Rabi splittings vs emitter count (ring and ideal configurations)
    Rabi(CommonArgs),
    /// Dressed-state ladder with per-component weights
    Dressed(CommonArgs),
    /// Mode parameter inspection
    Modes {
        #[command(subcommand)]
        command: ModesCommand,
    },
    /// Built-in scenario presets
    Preset {
        #[command(subcommand)]
        command: PresetCommand,
    },
    /// Full scenario run: all applicable outputs plus a manifest
    Run(CommonArgs),
}

#[derive(Debug, Subcommand)]
enum ModesCommand {
    /// Dump the extracted mode set as JSON
    Dump(CommonArgs),
}

#[derive(Debug, Subcommand)]
enum PresetCommand {
    /// List preset names
    List,
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Scenario TOML file
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Built-in preset name
    #[arg(long)]
    preset: Option<String>,
    /// Output directory (overrides the config)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Multipole order cutoff (overrides the config)
    #[arg(long)]
    modes: Option<usize>,
    /// Drop the quantum correction from the emitter-emitter kernel
    #[arg(long)]
    no_correction: bool,
}

#[derive(Debug, Args)]
struct SpectrumArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Computation route
    #[arg(long, value_enum, default_value_t = Route::Effective)]
    route: Route,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Route {
    Effective,
    Continuous,
    Ideal,
}

impl CommonArgs {
    fn scenario(&self) -> Result<Scenario> {
        let mut s = match (&self.config, &self.preset) {
            (Some(path), None) => Scenario::from_toml(&fs::read_to_string(path)?)?,
            (None, Some(name)) => config::preset(name)
                .ok_or_else(|| CliError::Config(format!("unknown preset '{name}'")))?,
            (None, None) => {
                return Err(CliError::Config("pass either --config or --preset".into()))
            }
            _ => unreachable!("clap rejects --config with --preset"),
        };
        if let Some(n) = self.modes {
            s.modes.max_order = n;
        }
        if let Some(dir) = &self.out {
            s.output.directory = dir.display().to_string();
        }
        Ok(s)
    }

    fn correction(&self) -> Correction {
        if self.no_correction {
            Correction::Off
        } else {
            Correction::On
        }
    }

    fn out_dir(&self, s: &Scenario) -> Result<PathBuf> {
        let dir = PathBuf::from(&s.output.directory);
        fs::create_dir_all(&dir)?;
        Ok(dir)
    }
}

fn sweep_grid_rad_s(s: &Scenario) -> Vec<f64> {
    let n = s.sweep.omega0_points.max(2);
    (0..n)
        .map(|k| {
            let ev = s.sweep.omega0_min_ev
                + (s.sweep.omega0_max_ev - s.sweep.omega0_min_ev) * k as f64 / (n - 1) as f64;
            ev_to_rad_s(ev)
        })
        .collect()
}

/// One spectrum with the emitter frequency overridden to `omega0`.
fn spectrum_at(
    s: &Scenario,
    set: &ModeSet,
    ens: &EmitterEnsemble,
    omega0: f64,
    route: Route,
    correction: Correction,
) -> Result<Spectrum> {
    let mut ens = ens.clone();
    ens.omega0 = omega0;
    let grid = frequency_grid(omega0, ev_to_rad_s(s.spectrum.half_width_ev), s.spectrum.points);
    match route {
        Route::Continuous => {
            let initial = vec![Complex64::new(1.0, 0.0); ens.len()];
            Ok(spectrum_continuous(set, &ens, &initial, &grid, correction)?)
        }
        Route::Effective => {
            let low = lowdin(set)?;
            let h = build_effective(&ens, set, &low)?;
            let initial = bright_initial_state(&h);
            let d = dressed_states(&h, &initial)?;
            Ok(spectrum_effective(&d, &initial, ens.gamma0, &grid))
        }
        Route::Ideal => {
            let single = s.ensemble_with_count(1)?;
            let mat = s.material()?;
            let set1 = extract_modes(&single, &mat, &s.sphere(), s.modes.max_order)?;
            Ok(spectrum_ideal(&set1, omega0, ens.gamma0, ens.len(), &grid, correction))
        }
    }
}

fn cmd_spectrum(args: &SpectrumArgs) -> Result<()> {
    let s = args.common.scenario()?;
    let ens = s.ensemble()?;
    let set = extract_modes(&ens, &s.material()?, &s.sphere(), s.modes.max_order)?;
    let spectrum =
        spectrum_at(&s, &set, &ens, ens.omega0, args.route, args.common.correction())?;
    let dir = args.common.out_dir(&s)?;
    let path = dir.join("spectrum.csv");
    output::write_spectrum_csv(&path, &spectrum)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn compute_map(s: &Scenario, correction: Correction) -> Result<Vec<(f64, Spectrum)>> {
    let ens = s.ensemble()?;
    let set = extract_modes(&ens, &s.material()?, &s.sphere(), s.modes.max_order)?;
    sweep_grid_rad_s(s)
        .par_iter()
        .map(|&w0| Ok((w0, spectrum_at(s, &set, &ens, w0, Route::Effective, correction)?)))
        .collect()
}

fn cmd_map(args: &CommonArgs) -> Result<()> {
    let s = args.scenario()?;
    let rows = compute_map(&s, args.correction())?;
    let dir = args.out_dir(&s)?;
    let path = dir.join("map.csv");
    output::write_map_csv(&path, &rows)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn compute_shifts(s: &Scenario) -> Result<Vec<(f64, f64, f64, f64)>> {
    let ens = s.ensemble()?;
    let mat = s.material()?;
    let geom = s.sphere();
    let set = extract_modes(&ens, &mat, &geom, s.modes.max_order)?;
    sweep_grid_rad_s(s)
        .par_iter()
        .map(|&w0| {
            let r = lspsim::shifts::lamb_shift(
                &set,
                &mat,
                &geom,
                &ens.emitters[0],
                0,
                w0,
                s.modes.max_order,
            )?;
            Ok((w0, r.effective, r.classical, r.quantum_correction))
        })
        .collect()
}

fn cmd_shifts(args: &CommonArgs) -> Result<()> {
    let s = args.scenario()?;
    let rows = compute_shifts(&s)?;
    let dir = args.out_dir(&s)?;
    let path = dir.join("shifts.csv");
    output::write_shifts_csv(&path, &rows)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn compute_rabi(s: &Scenario) -> Result<Vec<(String, rabi::RabiReport)>> {
    let single = s.ensemble_with_count(1)?;
    let mat = s.material()?;
    let geom = s.sphere();
    let orientation = s.orientation()?;
    let nmax = s.modes.max_order;
    let set = extract_modes(&single, &mat, &geom, nmax)?;
    let set2 = extract_modes(&single, &mat, &geom, 2 * nmax)?;
    let g2: Vec<f64> = set.couplings.iter().map(|c| c[0] * c[0]).collect();
    let g2_2n: Vec<f64> = set2.couplings.iter().map(|c| c[0] * c[0]).collect();
    let window = (s.sweep.omega0_min_ev, s.sweep.omega0_max_ev);
    let points = s.sweep.omega0_points;
    let mut ne_list = s.sweep.ne_list.clone();
    if ne_list.is_empty() {
        ne_list.push(s.ensemble.count);
    }
    let mut rows = Vec::new();
    for &ne in &ne_list {
        let ring = |n: usize| rabi::ring_lambda0(ne, n, orientation);
        let ideal = |n: usize| vec![ne as f64; n];
        for (name, lam) in [
            ("ring", &ring as &dyn Fn(usize) -> Vec<f64>),
            ("ideal", &ideal as &dyn Fn(usize) -> Vec<f64>),
        ] {
            let report = rabi::report(
                &set.params,
                &set2.params,
                &g2,
                &g2_2n,
                lam,
                ne,
                single.gamma0,
                window,
                window,
                points,
            )?;
            rows.push((name.to_string(), report));
        }
    }
    Ok(rows)
}

fn cmd_rabi(args: &CommonArgs) -> Result<()> {
    let s = args.scenario()?;
    let rows = compute_rabi(&s)?;
    let dir = args.out_dir(&s)?;
    let path = dir.join("rabi.csv");
    output::write_rabi_csv(&path, &rows)?;
    for (name, r) in &rows {
        match r.high_order {
            Some(a) => println!(
                "ne = {:4} {:5}: {:.1} meV at {:.3} eV (second gap: {})",
                r.ne,
                name,
                a.splitting_mev,
                a.omega0_ev,
                if r.second_gap { "yes" } else { "no" }
            ),
            None => println!("ne = {:4} {:5}: no anticrossing in window", r.ne, name),
        }
    }
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_dressed(args: &CommonArgs) -> Result<()> {
    let s = args.scenario()?;
    let ens = s.ensemble()?;
    let set = extract_modes(&ens, &s.material()?, &s.sphere(), s.modes.max_order)?;
    let low = lowdin(&set)?;
    let h = build_effective(&ens, &set, &low)?;
    let initial = bright_initial_state(&h);
    let d = dressed_states(&h, &initial)?;
    let dir = args.out_dir(&s)?;
    let path = dir.join("ladder.csv");
    output::write_ladder_csv(&path, &d, ens.len(), ens.omega0)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_modes_dump(args: &CommonArgs) -> Result<()> {
    let s = args.scenario()?;
    let ens = s.ensemble()?;
    let set = extract_modes(&ens, &s.material()?, &s.sphere(), s.modes.max_order)?;
    let json = serde_json::to_string_pretty(&set).expect("mode set serializes");
    if args.out.is_some() {
        let dir = args.out_dir(&s)?;
        let path = dir.join("modes.json");
        fs::write(&path, json + "\n")?;
        println!("wrote {}", path.display());
    } else {
        println!("{json}");
    }
    Ok(())
}

fn cmd_run(args: &CommonArgs) -> Result<()> {
    let s = args.scenario()?;
    let dir = args.out_dir(&s)?;
    let correction = args.correction();
    let ens = s.ensemble()?;
    let mat = s.material()?;
    let set = extract_modes(&ens, &mat, &s.sphere(), s.modes.max_order)?;

    let mut outputs = Vec::new();
    let mut emit = |name: &str| outputs.push(name.to_string());

    let spectrum = spectrum_at(&s, &set, &ens, ens.omega0, Route::Effective, correction)?;
    output::write_spectrum_csv(&dir.join("spectrum.csv"), &spectrum)?;
    emit("spectrum.csv");

    // paired uncorrected spectrum, for reading the correction off the peaks
    let nocorr =
        spectrum_at(&s, &set, &ens, ens.omega0, Route::Continuous, Correction::Off)?;
    output::write_spectrum_csv(&dir.join("spectrum_nocorr.csv"), &nocorr)?;
    emit("spectrum_nocorr.csv");

    let map_rows = compute_map(&s, correction)?;
    output::write_map_csv(&dir.join("map.csv"), &map_rows)?;
    emit("map.csv");

    let shift_rows = compute_shifts(&s)?;
    output::write_shifts_csv(&dir.join("shifts.csv"), &shift_rows)?;
    emit("shifts.csv");

    let low = lowdin(&set)?;
    let h = build_effective(&ens, &set, &low)?;
    let initial = bright_initial_state(&h);
    let d = dressed_states(&h, &initial)?;
    output::write_ladder_csv(&dir.join("ladder.csv"), &d, ens.len(), ens.omega0)?;
    emit("ladder.csv");

    let mut convergence = Vec::new();
    if !s.sweep.ne_list.is_empty() {
        let rabi_rows = compute_rabi(&s)?;
        output::write_rabi_csv(&dir.join("rabi.csv"), &rabi_rows)?;
        emit("rabi.csv");
        for (name, r) in &rabi_rows {
            if let Some(a) = r.high_order {
                convergence.push(output::ConvergenceEntry {
                    label: format!("rabi_{}_{}", name, r.ne),
                    value_mev: a.splitting_mev,
                    flagged: r.convergence_flagged,
                });
            }
        }
    }

    if s.output.plot_script {
        output::write_plot_script(&dir)?;
        emit("plot.py");
    }

    // hash the physics content only, so relocating the output directory
    // does not change the manifest
    let mut canonical = s.clone();
    canonical.output = Default::default();
    let manifest = output::Manifest {
        schema_version: config::SCHEMA_VERSION,
        config_sha256: output::config_hash(&canonical.to_toml()),
        max_order: s.modes.max_order,
        omega0_sweep_ev: (s.sweep.omega0_min_ev, s.sweep.omega0_max_ev, s.sweep.omega0_points),
        outputs,
        convergence,
    };
    output::write_manifest(&dir.join("manifest.json"), &manifest)?;
    println!("wrote {}", dir.join("manifest.json").display());
    Ok(())
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Spectrum(args) => cmd_spectrum(args),
        Command::Map(args) => cmd_map(args),
        Command::Shifts(args) => cmd_shifts(args),
        Command::Rabi(args) => cmd_rabi(args),
        Command::Dressed(args) => cmd_dressed(args),
        Command::Modes { command: ModesCommand::Dump(args) } => cmd_modes_dump(args),
        Command::Preset { command: PresetCommand::List } => {
            for name in config::preset_names() {
                println!("{name}");
            }
            Ok(())
        }
        Command::Run(args) => cmd_run(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
