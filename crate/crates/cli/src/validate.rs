//! Built-in consistency checks for a configuration.

use layered_qed::greens::GreenFunction;
use layered_qed::optics::{bose_einstein, fresnel, EvaluationContext, Fresnel, Geometry};
use layered_qed::quantities::{
    normalization_c_squared, occupations, poynting_theorem_residual, spectral_point,
};
use layered_qed::segint::oracle::oracle_quadrature;
use layered_qed::segint::{integrate_kernel_product, ProductKind};
use num_complex::Complex64;
use serde::Serialize;

use crate::config::RunConfig;

/// Regularization used for the quadrature comparison.
pub const ORACLE_EPSILON: f64 = 1e-8;
const ORACLE_POINTS: usize = 41;
const EQUILIBRIUM_TEMPERATURE: f64 = 300.0;
/// Absolute, in the normalized flux units.
const EQUILIBRIUM_FLUX_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Default)]
pub struct Options {
    /// Overrides the configured oracle tolerance.
    pub tol: Option<f64>,
    /// Run on a copy of the geometry with every layer at this temperature.
    pub equilibrium: Option<f64>,
    /// Flip the sign of every interface reflection coefficient. Negative control.
    pub corrupt_fresnel: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub max_error: f64,
    pub tolerance: f64,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub passed: bool,
    pub checks: Vec<Check>,
}

fn corrupted(n1: Complex64, n2: Complex64) -> Fresnel {
    let f = fresnel(n1, n2);
    Fresnel { r: -f.r, t: f.t }
}

struct Runner {
    geometry: Geometry,
    corrupt: bool,
}

impl Runner {
    fn build(&self, g: &Geometry, e: f64) -> layered_qed::Result<GreenFunction> {
        let ctx = EvaluationContext::from_photon_energy(e)?;
        if self.corrupt {
            GreenFunction::build_with_fresnel(g, &ctx, corrupted)
        } else {
            GreenFunction::build(g, &ctx)
        }
    }
}

fn check(name: &'static str, max_error: f64, tolerance: f64, detail: String) -> Check {
    Check { name, passed: max_error <= tolerance, max_error, tolerance, detail }
}

fn failed(name: &'static str, tolerance: f64, e: layered_qed::Error) -> Check {
    Check { name, passed: false, max_error: f64::INFINITY, tolerance, detail: e.to_string() }
}

pub fn run_validation(cfg: &RunConfig, opts: &Options) -> Result<Report, layered_qed::Error> {
    let mut geometry = cfg.geometry()?;
    if let Some(t) = opts.equilibrium {
        geometry = geometry.with_uniform_temperature(t);
    }
    let runner = Runner { geometry, corrupt: opts.corrupt_fresnel };
    let val = cfg.validation_or_default();
    let tol = opts.tol.unwrap_or(val.oracle_tol);
    let xs = cfg.x_positions();
    let energies = &cfg.photon_energies_ev;

    let checks = vec![
        continuity(&runner, energies, &xs).unwrap_or_else(|e| failed("interface_continuity", 1e-9, e)),
        oracle(&runner, energies, &xs, tol).unwrap_or_else(|e| failed("closed_form_vs_quadrature", tol, e)),
        normalization(&runner, energies, &xs).unwrap_or_else(|e| failed("normalization_identity", 1e-8, e)),
        fluctuation_identity(&runner, energies, &xs).unwrap_or_else(|e| failed("fluctuation_identity", 1e-9, e)),
        poynting_theorem(&runner, energies, &xs, val.fd_divisor)
            .unwrap_or_else(|e| failed("poynting_theorem", 1e-3, e)),
        equilibrium(&runner, energies, &xs).unwrap_or_else(|e| failed("equilibrium_flatness", 1e-9, e)),
    ];
    Ok(Report { passed: checks.iter().all(|c| c.passed), checks })
}

fn sample(xs: &[f64], n: usize) -> Vec<f64> {
    if xs.len() <= n {
        return xs.to_vec();
    }
    (0..n).map(|i| xs[i * (xs.len() - 1) / (n - 1)]).collect()
}

/// G and dG/dx on both sides of every interface.
fn continuity(r: &Runner, energies: &[f64], xs: &[f64]) -> layered_qed::Result<Check> {
    let tolerance = 1e-9;
    let mut worst = 0.0f64;
    let mut detail = String::from("no interfaces");
    for &e in energies {
        let gf = r.build(&r.geometry, e)?;
        for xi in r.geometry.interfaces() {
            let below = xi - 1e-21 - xi.abs() * 1e-16;
            for xp in sample(xs, 21) {
                let scale = gf.eval(xi, xp).norm();
                let jump = (gf.eval(below, xp) - gf.eval(xi, xp)).norm() / scale;
                let slope_scale = gf.eval_dx(xi, xp).norm();
                let slope_jump = if xp == xi {
                    0.0
                } else {
                    (gf.eval_dx(below, xp) - gf.eval_dx(xi, xp)).norm() / slope_scale
                };
                let err = jump.max(slope_jump);
                if err > worst || detail == "no interfaces" {
                    worst = worst.max(err);
                    detail = format!(
                        "worst at interface x = {} um (source x' = {:.3} um, {e} eV): G jump {jump:.1e}, dG/dx jump {slope_jump:.1e}",
                        xi * 1e6,
                        xp * 1e6
                    );
                }
            }
        }
    }
    Ok(check("interface_continuity", worst, tolerance, detail))
}

fn oracle(r: &Runner, energies: &[f64], xs: &[f64], tolerance: f64) -> layered_qed::Result<Check> {
    let regularized = r.geometry.regularized(ORACLE_EPSILON);
    let mut worst = 0.0f64;
    let mut detail = String::new();
    for &e in energies {
        let gf = r.build(&r.geometry, e)?;
        let reg = r.build(&regularized, e)?;
        let eta = occupations(&gf)?;
        let half: Vec<f64> = eta.iter().map(|n| n + 0.5).collect();
        for x in sample(xs, ORACLE_POINTS) {
            let mut numeric = Vec::new();
            for kind in ProductKind::ALL {
                let w = match kind {
                    ProductKind::EE | ProductKind::HH => &half,
                    _ => &eta,
                };
                let closed = integrate_kernel_product(&gf, x, kind, w)?;
                let q = oracle_quadrature(&reg, x, kind, w, (tolerance * 1e-5).max(1e-13))?;
                numeric.push((kind, closed, q));
            }
            let norm_of = |k: ProductKind| numeric.iter().find(|t| t.0 == k).map_or(0.0, |t| t.2.norm());
            // the net flux integral can cancel to nothing; measure it against |EE HH|^(1/2)
            let eh_scale = (norm_of(ProductKind::EE) * norm_of(ProductKind::HH)).sqrt();
            for &(kind, closed, q) in &numeric {
                let scale = if kind == ProductKind::EH { q.norm().max(eh_scale) } else { q.norm() };
                let err = if scale == 0.0 { closed.norm() } else { (closed - q).norm() / scale };
                if err > worst || detail.is_empty() {
                    worst = worst.max(err);
                    detail = format!("worst {} at x = {:.3} um, {e} eV", kind.name(), x * 1e6);
                }
            }
        }
    }
    Ok(check("closed_form_vs_quadrature", worst, tolerance, detail))
}

fn normalization(r: &Runner, energies: &[f64], xs: &[f64]) -> layered_qed::Result<Check> {
    let mut worst = 0.0f64;
    let ones = vec![1.0; r.geometry.layers().len()];
    for &e in energies {
        let gf = r.build(&r.geometry, e)?;
        for x in sample(xs, 201) {
            let integral = integrate_kernel_product(&gf, x, ProductKind::AA, &ones)?;
            let c2 = normalization_c_squared(&gf, x)?;
            worst = worst.max((integral - c2).norm() / c2);
        }
    }
    Ok(check("normalization_identity", worst, 1e-8, "source integral of |G_A|^2 against Im G".into()))
}

fn fluctuation_identity(r: &Runner, energies: &[f64], xs: &[f64]) -> layered_qed::Result<Check> {
    let mut worst = 0.0f64;
    for &e in energies {
        let gf = r.build(&r.geometry, e)?;
        for &x in xs {
            let p = spectral_point(&gf, x)?;
            worst = worst.max((p.e2 / (4.0 * p.ldos * (p.n_eff + 0.5)) - 1.0).abs());
        }
    }
    Ok(check("fluctuation_identity", worst, 1e-9, "<E^2> against ldos and photon number".into()))
}

fn poynting_theorem(r: &Runner, energies: &[f64], xs: &[f64], divisor: f64) -> layered_qed::Result<Check> {
    let mut worst = 0.0f64;
    let mut samples = 0;
    for &e in energies {
        let gf = r.build(&r.geometry, e)?;
        let h = gf.context().vacuum_wavelength() / divisor;
        let eta = occupations(&gf)?;
        for x in sample(xs, 201) {
            let near = r.geometry.interfaces().iter().any(|&p| (x - p).abs() < 2.0 * h);
            if r.geometry.layer_at(x).is_lossless() || near {
                continue;
            }
            let p = spectral_point(&gf, x)?;
            let residual = poynting_theorem_residual(&gf, x, h)?;
            // gross emission or absorption; Q itself vanishes in equilibrium
            let im_n2 = r.geometry.layer_at(x).im_n_squared();
            let scale = 2000.0 * im_n2 * p.ldos * eta[r.geometry.region_of(x)].max(p.n_eff);
            samples += 1;
            worst = worst.max(if scale > 0.0 { residual.abs() / scale } else { residual.abs() });
        }
    }
    Ok(check("poynting_theorem", worst, 1e-3, format!("dS/dx against Q, relative to gross emission, at {samples} points in lossy layers, h = lambda/{divisor}")))
}

fn equilibrium(r: &Runner, energies: &[f64], xs: &[f64]) -> layered_qed::Result<Check> {
    let g = r.geometry.with_uniform_temperature(EQUILIBRIUM_TEMPERATURE);
    let (mut dev, mut flux) = (0.0f64, 0.0f64);
    for &e in energies {
        let gf = r.build(&g, e)?;
        let eta = bose_einstein(EQUILIBRIUM_TEMPERATURE, gf.context())?;
        for &x in xs {
            let p = spectral_point(&gf, x)?;
            dev = dev.max((p.n_eff / eta - 1.0).abs());
            flux = flux.max(p.poynting.abs()).max(p.net_emission.abs());
        }
    }
    Ok(Check {
        name: "equilibrium_flatness",
        passed: dev <= 1e-9 && flux <= EQUILIBRIUM_FLUX_TOL,
        max_error: dev,
        tolerance: 1e-9,
        detail: format!(
            "all layers at {EQUILIBRIUM_TEMPERATURE} K: photon number deviation {dev:.1e}, max |S|, |Q| {flux:.1e} (limit {EQUILIBRIUM_FLUX_TOL:.0e})"
        ),
    })
}
