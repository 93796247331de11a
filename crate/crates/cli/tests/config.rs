use layered_qed_cli::config::{parse_config, ConfigError, Output};
use layered_qed_cli::presets::{preset, PRESETS};

const BASE: &str = r#"
photon_energies_ev = [0.1]
outputs = ["photon_number", "poynting"]

[geometry]
kind = "single_interface"
layers = [
  { n_re = 2.5, n_im = 0.5, temperature_k = 300.0 },
  { n_re = 1.0 },
]

[x_grid]
min_um = -30.0
max_um = 30.0
points = 11
"#;

fn violations(text: &str) -> Vec<String> {
    match parse_config(text) {
        Err(ConfigError::Invalid(v)) => v.iter().map(|v| v.to_string()).collect(),
        other => panic!("expected validation failure, got {other:?}"),
    }
}

#[test]
fn base_config_parses_without_warnings() {
    let (cfg, warnings) = parse_config(BASE).unwrap();
    assert!(warnings.is_empty(), "{warnings:?}");
    assert_eq!(cfg.outputs, vec![Output::PhotonNumber, Output::Poynting]);
    assert_eq!(cfg.x_positions().len(), 11);
}

#[test]
fn unknown_keys_are_rejected() {
    let text = BASE.replace("points = 11", "points = 11\nstep_um = 1.0");
    let err = parse_config(&text).unwrap_err();
    assert!(matches!(err, ConfigError::Parse(_)));
    assert!(err.to_string().contains("step_um"), "{err}");

    let text = BASE.replace("{ n_re = 1.0 }", "{ n_re = 1.0, eps = 2.0 }");
    assert!(parse_config(&text).unwrap_err().to_string().contains("eps"));
}

#[test]
fn negative_temperature_names_the_field() {
    let text = BASE.replace("temperature_k = 300.0", "temperature_k = -1.0");
    assert_eq!(violations(&text), vec!["geometry.layers[0].temperature_k: must be non-negative and finite"]);
}

#[test]
fn all_violations_are_reported_together() {
    let text = BASE
        .replace("n_im = 0.5", "n_im = -0.5")
        .replace("[0.1]", "[0.1, -2.0]")
        .replace("points = 11", "points = 1")
        .replace(r#""poynting"]"#, r#""poynting", "poynting"]"#);
    let v = violations(&text);
    let paths: Vec<&str> = v.iter().map(|s| s.split(':').next().unwrap()).collect();
    assert_eq!(
        paths,
        ["geometry.layers[0].n_im", "photon_energies_ev[1]", "x_grid.points", "outputs[2]"],
        "{v:?}"
    );
}

#[test]
fn geometry_shape_rules() {
    let text = BASE.replace("single_interface", "slab");
    let v = violations(&text);
    assert!(v.iter().any(|s| s.starts_with("geometry.layers:")), "{v:?}");
    assert!(v.iter().any(|s| s.starts_with("geometry.gap_um:")), "{v:?}");

    let text = BASE.replace("[x_grid]", "gap_um = 3.0\n\n[x_grid]");
    // gap_um lands in the geometry table because it precedes [x_grid]
    assert_eq!(violations(&text), vec!["geometry.gap_um: only allowed for a slab"]);
}

#[test]
fn narrow_grid_warns() {
    let text = BASE.replace("min_um = -30.0", "min_um = -5.0");
    let (_, warnings) = parse_config(&text).unwrap();
    assert_eq!(warnings.len(), 1);
    assert!(warnings[0].contains("wavelength"));
}

#[test]
fn presets_are_valid_and_complete() {
    assert_eq!(PRESETS.len(), 2);
    for p in &PRESETS {
        let (cfg, warnings) = parse_config(p.source).unwrap();
        assert!(warnings.is_empty(), "{}: {warnings:?}", p.name);
        assert_eq!(cfg, preset(p.name).unwrap());
        assert_eq!(cfg.outputs, Output::ALL);
    }
    assert!(matches!(preset("fig3"), Err(ConfigError::UnknownPreset(_))));
}
