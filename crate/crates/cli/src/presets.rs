//! Built-in scenes.

use crate::config::{parse_config, ConfigError, RunConfig};

pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub source: &'static str,
}

pub const PRESETS: [Preset; 2] = [
    Preset {
        name: "fig1",
        description: "n = 2.5+0.5i at 300 K | vacuum at 0 K; 0.10 and 0.14 eV; x in [-30, 30] um",
        source: include_str!("../presets/fig1.toml"),
    },
    Preset {
        name: "fig2",
        description: "n = 1.5+0.3i at 400 K | 10 um vacuum gap | n = 2.5+0.5i at 300 K; 0.118 and 0.140 eV; x in [-20, 30] um",
        source: include_str!("../presets/fig2.toml"),
    },
];

pub fn preset(name: &str) -> Result<RunConfig, ConfigError> {
    let p = PRESETS.iter().find(|p| p.name == name).ok_or_else(|| ConfigError::UnknownPreset(name.to_string()))?;
    Ok(parse_config(p.source)?.0)
}
