//! Grid sweeps, CSV output and the summary document.

use std::io::{self, Write};

use layered_qed::greens::GreenFunction;
use layered_qed::optics::{bose_einstein, EvaluationContext, Geometry};
use layered_qed::quantities::{spectral_point, SpectralPoint};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{GeometryConfig, Output, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum SweepError {
    #[error("{0}")]
    Geometry(layered_qed::Error),
    #[error("at {energy_ev} eV: {source}")]
    Frequency { energy_ev: f64, source: layered_qed::Error },
    #[error("at x = {x_um} um, {energy_ev} eV: {source}")]
    Point { x_um: f64, energy_ev: f64, source: layered_qed::Error },
    #[error("thread pool: {0}")]
    Pool(String),
}

/// Every spectral point of a sweep, frequency-major.
#[derive(Debug, Clone)]
pub struct Sweep {
    pub energies_ev: Vec<f64>,
    pub xs: Vec<f64>,
    pub points: Vec<SpectralPoint>,
}

impl Sweep {
    pub fn row(&self, energy_index: usize) -> &[SpectralPoint] {
        let n = self.xs.len();
        &self.points[energy_index * n..(energy_index + 1) * n]
    }
}

/// Evaluate every `(x, E)` point. `jobs = Some(1)` runs serially;
/// `None` uses rayon's default pool. Output order never depends on it.
pub fn run_sweep(cfg: &RunConfig, jobs: Option<usize>) -> Result<Sweep, SweepError> {
    let geometry = cfg.geometry().map_err(SweepError::Geometry)?;
    let xs = cfg.x_positions();
    let energies = cfg.photon_energies_ev.clone();
    if cfg.outputs.is_empty() {
        return Ok(Sweep { energies_ev: energies, xs, points: Vec::new() });
    }
    let work = || evaluate(&geometry, &energies, &xs);
    let points = match jobs {
        None => work()?,
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| SweepError::Pool(e.to_string()))?
            .install(work)?,
    };
    Ok(Sweep { energies_ev: energies, xs, points })
}

fn evaluate(geometry: &Geometry, energies: &[f64], xs: &[f64]) -> Result<Vec<SpectralPoint>, SweepError> {
    let gfs: Vec<GreenFunction> = energies
        .iter()
        .map(|&e| {
            let ctx = EvaluationContext::from_photon_energy(e)
                .map_err(|source| SweepError::Frequency { energy_ev: e, source })?;
            GreenFunction::build(geometry, &ctx).map_err(|source| SweepError::Frequency { energy_ev: e, source })
        })
        .collect::<Result<_, _>>()?;
    (0..energies.len() * xs.len())
        .into_par_iter()
        .map(|i| {
            let (ei, xi) = (i / xs.len(), i % xs.len());
            spectral_point(&gfs[ei], xs[xi]).map_err(|source| SweepError::Point {
                x_um: xs[xi] * 1e6,
                energy_ev: energies[ei],
                source,
            })
        })
        .collect()
}

pub fn value(p: &SpectralPoint, o: Output) -> f64 {
    match o {
        Output::PhotonNumber => p.n_eff,
        Output::Temperature => p.t_eff,
        Output::EfieldFluct => p.e2,
        Output::HfieldFluct => p.h2,
        Output::Ldos => p.ldos,
        Output::EnergyDensity => p.u,
        Output::Poynting => p.poynting,
        Output::NetEmission => p.net_emission,
    }
}

fn fmt(v: f64) -> String {
    format!("{v:.8e}")
}

/// CSV with a header naming each quantity and its unit. Nine significant
/// digits, `\n` line endings.
pub fn write_csv<W: Write>(mut w: W, outputs: &[Output], sweep: &Sweep) -> io::Result<()> {
    let mut header = String::from("x_um,E_eV");
    for o in outputs {
        header.push(',');
        header.push_str(&o.header());
    }
    header.push('\n');
    w.write_all(header.as_bytes())?;
    if outputs.is_empty() {
        return w.flush();
    }
    let mut line = String::new();
    for (ei, &e) in sweep.energies_ev.iter().enumerate() {
        for (x, p) in sweep.xs.iter().zip(sweep.row(ei)) {
            line.clear();
            line.push_str(&fmt(x * 1e6));
            line.push(',');
            line.push_str(&fmt(e));
            for &o in outputs {
                line.push(',');
                line.push_str(&fmt(value(p, o)));
            }
            line.push('\n');
            w.write_all(line.as_bytes())?;
        }
    }
    w.flush()
}

#[derive(Debug, Serialize)]
pub struct Summary {
    pub geometry: GeometryConfig,
    pub photon_energies_ev: Vec<f64>,
    pub x_points: usize,
    pub extrema: Vec<Extrema>,
    pub lossless_constancy: Vec<Constancy>,
    pub deep_asymptotes: Vec<Asymptote>,
}

#[derive(Debug, Serialize)]
pub struct Extrema {
    pub quantity: &'static str,
    pub energy_ev: f64,
    pub min: f64,
    pub min_x_um: f64,
    pub max: f64,
    pub max_x_um: f64,
}

/// Spread of a quantity over the grid points inside one lossless layer.
#[derive(Debug, Serialize)]
pub struct Constancy {
    pub quantity: &'static str,
    pub energy_ev: f64,
    pub layer: usize,
    pub samples: usize,
    pub mean: f64,
    pub std_over_mean: f64,
}

/// Photon number at a grid end inside a lossy half-space, against the
/// occupation of that medium.
#[derive(Debug, Serialize)]
pub struct Asymptote {
    pub energy_ev: f64,
    pub layer: usize,
    pub x_um: f64,
    pub photon_number: f64,
    pub bose_einstein: f64,
    pub relative_deviation: f64,
    pub poynting: f64,
}

pub fn summarize(cfg: &RunConfig, sweep: &Sweep) -> Result<Summary, SweepError> {
    let geometry = cfg.geometry().map_err(SweepError::Geometry)?;
    let mut extrema = Vec::new();
    let mut lossless_constancy = Vec::new();
    let mut deep_asymptotes = Vec::new();
    let layers = geometry.layers();
    // an empty output list leaves nothing evaluated
    let energies = if sweep.points.is_empty() { &[][..] } else { &sweep.energies_ev[..] };
    for (ei, &e) in energies.iter().enumerate() {
        let row = sweep.row(ei);
        for &o in &cfg.outputs {
            let (mut lo, mut hi) = (0, 0);
            for (i, p) in row.iter().enumerate() {
                if value(p, o) < value(&row[lo], o) {
                    lo = i;
                }
                if value(p, o) > value(&row[hi], o) {
                    hi = i;
                }
            }
            extrema.push(Extrema {
                quantity: o.name(),
                energy_ev: e,
                min: value(&row[lo], o),
                min_x_um: sweep.xs[lo] * 1e6,
                max: value(&row[hi], o),
                max_x_um: sweep.xs[hi] * 1e6,
            });
        }
        for li in (0..layers.len()).filter(|&i| layers[i].is_lossless()) {
            let inside: Vec<&SpectralPoint> =
                row.iter().filter(|p| geometry.region_of(p.x) == li).collect();
            if inside.len() < 2 {
                continue;
            }
            for &o in &cfg.outputs {
                let v: Vec<f64> = inside.iter().map(|p| value(p, o)).collect();
                let mean = v.iter().sum::<f64>() / v.len() as f64;
                let var = v.iter().map(|a| (a - mean).powi(2)).sum::<f64>() / v.len() as f64;
                let std_over_mean = if mean == 0.0 { if var == 0.0 { 0.0 } else { f64::INFINITY } } else { var.sqrt() / mean.abs() };
                lossless_constancy.push(Constancy {
                    quantity: o.name(),
                    energy_ev: e,
                    layer: li,
                    samples: v.len(),
                    mean,
                    std_over_mean,
                });
            }
        }
        let ctx = EvaluationContext::from_photon_energy(e).map_err(|source| SweepError::Frequency { energy_ev: e, source })?;
        for p in [&row[0], &row[row.len() - 1]] {
            let li = geometry.region_of(p.x);
            let layer = &layers[li];
            if layer.is_lossless() || !layer.is_semi_infinite() {
                continue;
            }
            let eta = bose_einstein(layer.temperature, &ctx).map_err(|source| SweepError::Frequency { energy_ev: e, source })?;
            let relative_deviation = if eta > 0.0 { (p.n_eff - eta) / eta } else { p.n_eff };
            deep_asymptotes.push(Asymptote {
                energy_ev: e,
                layer: li,
                x_um: p.x * 1e6,
                photon_number: p.n_eff,
                bose_einstein: eta,
                relative_deviation,
                poynting: p.poynting,
            });
        }
    }
    Ok(Summary {
        geometry: cfg.geometry.clone(),
        photon_energies_ev: sweep.energies_ev.clone(),
        x_points: sweep.xs.len(),
        extrema,
        lossless_constancy,
        deep_asymptotes,
    })
}
