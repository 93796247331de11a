//! Run configuration: TOML schema, strict parsing and validation.

use std::fmt;

use layered_qed::optics::{wavelength_from_ev, Geometry};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub geometry: GeometryConfig,
    pub photon_energies_ev: Vec<f64>,
    pub x_grid: GridConfig,
    #[serde(default)]
    pub outputs: Vec<Output>,
    #[serde(default)]
    pub validation: Option<ValidationConfig>,
    #[serde(default)]
    pub output_path: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Homogeneous,
    SingleInterface,
    Slab,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    pub kind: Kind,
    pub layers: Vec<LayerConfig>,
    /// Width of the middle layer of a slab.
    #[serde(default)]
    pub gap_um: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct LayerConfig {
    pub n_re: f64,
    #[serde(default)]
    pub n_im: f64,
    #[serde(default)]
    pub temperature_k: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub min_um: f64,
    pub max_um: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ValidationConfig {
    #[serde(default = "default_oracle_tol")]
    pub oracle_tol: f64,
    #[serde(default = "default_fd_divisor")]
    pub fd_divisor: f64,
}

fn default_oracle_tol() -> f64 {
    1e-6
}

fn default_fd_divisor() -> f64 {
    2000.0
}

impl Default for ValidationConfig {
    fn default() -> Self {
        ValidationConfig { oracle_tol: default_oracle_tol(), fd_divisor: default_fd_divisor() }
    }
}

/// A column of the sweep output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Output {
    PhotonNumber,
    Temperature,
    EfieldFluct,
    HfieldFluct,
    Ldos,
    EnergyDensity,
    Poynting,
    NetEmission,
}

impl Output {
    pub const ALL: [Output; 8] = [
        Output::PhotonNumber,
        Output::Temperature,
        Output::EfieldFluct,
        Output::HfieldFluct,
        Output::Ldos,
        Output::EnergyDensity,
        Output::Poynting,
        Output::NetEmission,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Output::PhotonNumber => "photon_number",
            Output::Temperature => "temperature",
            Output::EfieldFluct => "efield_fluct",
            Output::HfieldFluct => "hfield_fluct",
            Output::Ldos => "ldos",
            Output::EnergyDensity => "energy_density",
            Output::Poynting => "poynting",
            Output::NetEmission => "net_emission",
        }
    }

    pub fn unit(self) -> &'static str {
        match self {
            Output::PhotonNumber => "1",
            Output::Temperature => "K",
            Output::EfieldFluct => "hw/(2*pi*eps0*c*S)",
            Output::HfieldFluct => "hw/(2*pi*mu0*c*S)",
            Output::Ldos => "2/(pi*c*S)",
            Output::EnergyDensity => "hw/(2*pi*c*S)",
            Output::Poynting => "hw/(1000*pi*S)",
            Output::NetEmission => "hw^2/(1000*pi*c*S)",
        }
    }

    pub fn header(self) -> String {
        format!("{}[{}]", self.name(), self.unit())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub path: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("could not read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Parse(String),
    #[error("{} problem(s) in configuration:\n  {}", .0.len(), .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("\n  "))]
    Invalid(Vec<Violation>),
    #[error("unknown preset `{0}` (try `lqed presets`)")]
    UnknownPreset(String),
}

/// Parse and validate a TOML document. Unknown keys are rejected.
pub fn parse_config(text: &str) -> Result<(RunConfig, Vec<String>), ConfigError> {
    let cfg: RunConfig = toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
    let warnings = cfg.validate().map_err(ConfigError::Invalid)?;
    Ok((cfg, warnings))
}

impl RunConfig {
    /// Every constraint violation, or the list of warnings.
    pub fn validate(&self) -> Result<Vec<String>, Vec<Violation>> {
        let mut v = Vec::new();
        let mut push = |path: String, message: &str| v.push(Violation { path, message: message.to_string() });

        let g = &self.geometry;
        let expected = match g.kind {
            Kind::Homogeneous => 1,
            Kind::SingleInterface => 2,
            Kind::Slab => 3,
        };
        if g.layers.len() != expected {
            push("geometry.layers".into(), &format!("{:?} geometry needs {expected} layer(s), got {}", g.kind, g.layers.len()));
        }
        for (i, layer) in g.layers.iter().enumerate() {
            if !(layer.n_re > 0.0 && layer.n_re.is_finite()) {
                push(format!("geometry.layers[{i}].n_re"), "must be positive and finite");
            }
            if !(layer.n_im >= 0.0 && layer.n_im.is_finite()) {
                push(format!("geometry.layers[{i}].n_im"), "must be non-negative and finite (gain media are not supported)");
            }
            if !(layer.temperature_k >= 0.0 && layer.temperature_k.is_finite()) {
                push(format!("geometry.layers[{i}].temperature_k"), "must be non-negative and finite");
            }
        }
        match (g.kind, g.gap_um) {
            (Kind::Slab, None) => push("geometry.gap_um".into(), "required for a slab"),
            (Kind::Slab, Some(d)) if !(d > 0.0 && d.is_finite()) => {
                push("geometry.gap_um".into(), "must be positive and finite")
            }
            (Kind::Homogeneous | Kind::SingleInterface, Some(_)) => {
                push("geometry.gap_um".into(), "only allowed for a slab")
            }
            _ => {}
        }
        if self.photon_energies_ev.is_empty() {
            push("photon_energies_ev".into(), "at least one energy required");
        }
        for (i, e) in self.photon_energies_ev.iter().enumerate() {
            if !(*e > 0.0 && e.is_finite()) {
                push(format!("photon_energies_ev[{i}]"), "must be positive and finite");
            }
        }

        let x = &self.x_grid;
        if x.points < 2 {
            push("x_grid.points".into(), "must be at least 2");
        }
        if !(x.min_um.is_finite() && x.max_um.is_finite()) {
            push("x_grid".into(), "min_um and max_um must be finite");
        } else if !(x.min_um < x.max_um) {
            push("x_grid".into(), "min_um must be smaller than max_um");
        }

        let mut seen = Vec::new();
        for (i, o) in self.outputs.iter().enumerate() {
            if seen.contains(o) {
                push(format!("outputs[{i}]"), &format!("`{}` listed twice", o.name()));
            }
            seen.push(*o);
        }

        if let Some(val) = &self.validation {
            if !(val.oracle_tol > 0.0 && val.oracle_tol < 1.0) {
                push("validation.oracle_tol".into(), "must lie in (0, 1)");
            }
            if !(val.fd_divisor >= 2.0 && val.fd_divisor.is_finite()) {
                push("validation.fd_divisor".into(), "must be at least 2");
            }
        }

        if !v.is_empty() {
            return Err(v);
        }
        Ok(self.warnings())
    }

    fn warnings(&self) -> Vec<String> {
        let longest = self.photon_energies_ev.iter().map(|&e| wavelength_from_ev(e)).fold(0.0, f64::max) * 1e6;
        let interfaces: Vec<f64> = match self.geometry.kind {
            Kind::Homogeneous => vec![],
            Kind::SingleInterface => vec![0.0],
            Kind::Slab => vec![0.0, self.geometry.gap_um.unwrap_or(0.0)],
        };
        let mut out = Vec::new();
        if let (Some(first), Some(last)) = (interfaces.first(), interfaces.last()) {
            if self.x_grid.min_um > first - longest || self.x_grid.max_um < last + longest {
                out.push(format!(
                    "x_grid [{}, {}] um does not cover the interfaces by one wavelength ({longest:.3} um) on both sides",
                    self.x_grid.min_um, self.x_grid.max_um
                ));
            }
        }
        out
    }

    pub fn geometry(&self) -> layered_qed::Result<Geometry> {
        let n = |l: &LayerConfig| Complex64::new(l.n_re, l.n_im);
        let layers = &self.geometry.layers;
        match self.geometry.kind {
            Kind::Homogeneous => Geometry::homogeneous(n(&layers[0]), layers[0].temperature_k),
            Kind::SingleInterface => Geometry::single_interface(
                (n(&layers[0]), layers[0].temperature_k),
                (n(&layers[1]), layers[1].temperature_k),
            ),
            Kind::Slab => Geometry::slab(
                (n(&layers[0]), layers[0].temperature_k),
                (n(&layers[1]), layers[1].temperature_k),
                (n(&layers[2]), layers[2].temperature_k),
                self.geometry.gap_um.unwrap_or(0.0) * 1e-6,
            ),
        }
    }

    /// Grid positions in metres.
    pub fn x_positions(&self) -> Vec<f64> {
        layered_qed::scenes::linspace(self.x_grid.min_um, self.x_grid.max_um, self.x_grid.points)
            .into_iter()
            .map(|x| x * 1e-6)
            .collect()
    }

    pub fn validation_or_default(&self) -> ValidationConfig {
        self.validation.unwrap_or_default()
    }
}
