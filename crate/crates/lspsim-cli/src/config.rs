//! Scenario configuration: TOML schema, presets, and resolution into
//! simulation inputs.

use lspsim::geometry::{EmitterEnsemble, Orientation, SphereGeometry};
use lspsim::material::DrudeMaterial;
use lspsim::units::{debye_to_si, ev_to_rad_s, free_space_rate, nm_to_m};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_MAX_ORDER: usize = 30;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default = "default_schema_version")]
    pub schema_version: u32,
    pub material: MaterialSpec,
    pub geometry: GeometrySpec,
    pub ensemble: EnsembleSpec,
    #[serde(default)]
    pub modes: ModesSpec,
    #[serde(default)]
    pub sweep: SweepSpec,
    #[serde(default)]
    pub spectrum: SpectrumSpec,
    #[serde(default)]
    pub output: OutputSpec,
}

fn default_schema_version() -> u32 {
    SCHEMA_VERSION
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialSpec {
    pub preset: Option<String>,
    pub eps_inf: Option<f64>,
    /// rad/s
    pub omega_p: Option<f64>,
    /// rad/s
    pub gamma_p: Option<f64>,
    #[serde(default = "one")]
    pub eps_background: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometrySpec {
    pub radius_nm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Arrangement {
    Ring,
    Coincident,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleSpec {
    pub count: usize,
    pub height_nm: f64,
    pub arrangement: Arrangement,
    /// radial | polar | azimuthal; "orthoradial" is accepted as an alias of
    /// polar (tangent in the meridian plane).
    pub orientation: String,
    pub dipole_debye: f64,
    pub omega0_ev: f64,
    /// Free-space decay rate override (rad/s); defaults to the vacuum value
    /// for the given dipole and frequency.
    pub gamma0: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModesSpec {
    pub max_order: usize,
}

impl Default for ModesSpec {
    fn default() -> Self {
        Self { max_order: DEFAULT_MAX_ORDER }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSpec {
    pub omega0_min_ev: f64,
    pub omega0_max_ev: f64,
    pub omega0_points: usize,
    pub ne_list: Vec<usize>,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            omega0_min_ev: 2.5,
            omega0_max_ev: 3.3,
            omega0_points: 240,
            ne_list: vec![],
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SpectrumSpec {
    pub half_width_ev: f64,
    pub points: usize,
}

impl Default for SpectrumSpec {
    fn default() -> Self {
        Self { half_width_ev: 0.5, points: 2000 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSpec {
    pub directory: String,
    pub plot_script: bool,
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self { directory: "out".into(), plot_script: false }
    }
}

impl Scenario {
    pub fn from_toml(text: &str) -> Result<Self> {
        let s: Scenario = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        if s.schema_version != SCHEMA_VERSION {
            return Err(CliError::Config(format!(
                "unsupported schema_version {} (expected {})",
                s.schema_version, SCHEMA_VERSION
            )));
        }
        s.validate()?;
        Ok(s)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("scenario serializes")
    }

    fn validate(&self) -> Result<()> {
        self.material()?;
        self.orientation()?;
        if self.ensemble.count == 0 {
            return Err(CliError::Config("ensemble.count must be >= 1".into()));
        }
        if self.geometry.radius_nm <= 0.0 || self.ensemble.height_nm <= 0.0 {
            return Err(CliError::Config("radius_nm and height_nm must be positive".into()));
        }
        if self.modes.max_order == 0 {
            return Err(CliError::Config("modes.max_order must be >= 1".into()));
        }
        Ok(())
    }

    pub fn material(&self) -> Result<DrudeMaterial> {
        let mut m = match &self.material.preset {
            Some(name) => DrudeMaterial::preset(name)
                .ok_or_else(|| CliError::Config(format!("unknown material preset '{name}'")))?,
            None => {
                let (Some(eps_inf), Some(omega_p), Some(gamma_p)) = (
                    self.material.eps_inf,
                    self.material.omega_p,
                    self.material.gamma_p,
                ) else {
                    return Err(CliError::Config(
                        "material needs either a preset or eps_inf, omega_p, gamma_p".into(),
                    ));
                };
                DrudeMaterial { eps_inf, omega_p, gamma_p, eps_background: 1.0 }
            }
        };
        m.eps_background = self.material.eps_background;
        m.validate().map_err(CliError::Core)?;
        Ok(m)
    }

    pub fn sphere(&self) -> SphereGeometry {
        SphereGeometry { radius: nm_to_m(self.geometry.radius_nm) }
    }

    pub fn orientation(&self) -> Result<Orientation> {
        match self.ensemble.orientation.as_str() {
            "radial" | "perpendicular" => Ok(Orientation::Radial),
            "polar" | "orthoradial" | "parallel" => Ok(Orientation::Polar),
            "azimuthal" => Ok(Orientation::Azimuthal),
            other => Err(CliError::Config(format!("unknown orientation '{other}'"))),
        }
    }

    pub fn gamma0(&self) -> Result<f64> {
        if let Some(g) = self.ensemble.gamma0 {
            return Ok(g);
        }
        Ok(free_space_rate(
            debye_to_si(self.ensemble.dipole_debye),
            ev_to_rad_s(self.ensemble.omega0_ev),
            self.material.eps_background,
        ))
    }

    /// Ensemble with `count` emitters; other fields from the config.
    pub fn ensemble_with_count(&self, count: usize) -> Result<EmitterEnsemble> {
        let geom = self.sphere();
        let build = match self.ensemble.arrangement {
            Arrangement::Ring => EmitterEnsemble::ring,
            Arrangement::Coincident => EmitterEnsemble::coincident,
        };
        let ens = build(
            count,
            &geom,
            nm_to_m(self.ensemble.height_nm),
            debye_to_si(self.ensemble.dipole_debye),
            self.orientation()?,
            ev_to_rad_s(self.ensemble.omega0_ev),
            self.gamma0()?,
        );
        ens.validate(&geom).map_err(CliError::Core)?;
        Ok(ens)
    }

    pub fn ensemble(&self) -> Result<EmitterEnsemble> {
        self.ensemble_with_count(self.ensemble.count)
    }
}

/// Built-in scenario presets.
pub fn preset(name: &str) -> Option<Scenario> {
    let base = |material: &str, radius_nm: f64, orientation: &str| Scenario {
        schema_version: SCHEMA_VERSION,
        material: MaterialSpec {
            preset: Some(material.into()),
            eps_inf: None,
            omega_p: None,
            gamma_p: None,
            eps_background: 1.0,
        },
        geometry: GeometrySpec { radius_nm },
        ensemble: EnsembleSpec {
            count: 1,
            height_nm: 2.0,
            arrangement: Arrangement::Ring,
            orientation: orientation.into(),
            dipole_debye: 24.0,
            omega0_ev: 2.95,
            gamma0: None,
        },
        modes: ModesSpec::default(),
        sweep: SweepSpec::default(),
        spectrum: SpectrumSpec::default(),
        output: OutputSpec::default(),
    };
    match name {
        // Single orthoradial emitter next to an 8 nm silver sphere; spectral
        // map over the anticrossing region.
        "fig2a" => {
            let mut s = base("silver-drude", 8.0, "orthoradial");
            s.sweep = SweepSpec {
                omega0_min_ev: 2.5,
                omega0_max_ev: 3.3,
                omega0_points: 161,
                ne_list: vec![1],
            };
            Some(s)
        }
        // Coincident-emitter sweep: splitting vs emitter count.
        "fig4-ideal" => {
            let mut s = base("silver-drude", 8.0, "orthoradial");
            s.ensemble.arrangement = Arrangement::Coincident;
            s.modes.max_order = 60;
            s.sweep = SweepSpec {
                omega0_min_ev: 2.75,
                omega0_max_ev: 3.3,
                omega0_points: 240,
                ne_list: (1..=10).map(|k| k * k).collect(),
            };
            Some(s)
        }
        // Single perpendicular emitter at a 15 nm silver sphere; corrected vs
        // uncorrected spectra around the dipolar resonance.
        "fig7" => {
            let mut s = base("silver-drude", 15.0, "radial");
            s.ensemble.omega0_ev = 2.78;
            s.sweep = SweepSpec {
                omega0_min_ev: 2.6,
                omega0_max_ev: 3.0,
                omega0_points: 81,
                ne_list: vec![1],
            };
            s.spectrum = SpectrumSpec { half_width_ev: 0.3, points: 2000 };
            Some(s)
        }
        _ => None,
    }
}

pub fn preset_names() -> &'static [&'static str] {
    &["fig2a", "fig4-ideal", "fig7"]
}
