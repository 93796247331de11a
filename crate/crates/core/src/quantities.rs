//! Observables at a point `(x, ω)`.
//!
//! All public results are in the normalized units of the reference plots:
//!
//! | quantity | unit |
//! |---|---|
//! | electric field fluctuation | `ħω/(2π ε0 c S)` |
//! | magnetic field fluctuation | `ħω/(2π μ0 c S)` |
//! | electric LDOS | `2/(π c S)` |
//! | energy density | `ħω/(2π c S)` |
//! | Poynting vector | `ħω/(1000 π S)` |
//! | net emission rate | `ħω²/(1000 π c S)` |

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::greens::GreenFunction;
use crate::optics::{bose_einstein, consts, effective_temperature, EvaluationContext};
use crate::segint::{integrate_kernel_product, source_integral, KernelAt, KernelKind, ProductKind};

/// Conversion factors from SI to the normalized units.
pub mod units {
    use super::*;

    pub fn efield(ctx: &EvaluationContext) -> f64 {
        2.0 * PI * consts::EPS0 * consts::C * ctx.area / (consts::HBAR * ctx.omega)
    }

    pub fn hfield(ctx: &EvaluationContext) -> f64 {
        2.0 * PI * consts::MU0 * consts::C * ctx.area / (consts::HBAR * ctx.omega)
    }

    pub fn ldos(ctx: &EvaluationContext) -> f64 {
        PI * consts::C * ctx.area / 2.0
    }

    pub fn energy_density(ctx: &EvaluationContext) -> f64 {
        2.0 * PI * consts::C * ctx.area / (consts::HBAR * ctx.omega)
    }

    pub fn poynting(ctx: &EvaluationContext) -> f64 {
        1000.0 * PI * ctx.area / (consts::HBAR * ctx.omega)
    }

    pub fn net_emission(ctx: &EvaluationContext) -> f64 {
        1000.0 * PI * consts::C * ctx.area / (consts::HBAR * ctx.omega * ctx.omega)
    }
}

/// Every observable at one `(x, ω)`, in normalized units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPoint {
    /// m
    pub x: f64,
    /// eV
    pub photon_energy: f64,
    pub n_eff: f64,
    /// K
    pub t_eff: f64,
    pub e2: f64,
    pub h2: f64,
    pub ldos: f64,
    pub u: f64,
    pub poynting: f64,
    pub net_emission: f64,
}

/// Bose-Einstein occupation of every layer.
pub fn occupations(gf: &GreenFunction) -> Result<Vec<f64>> {
    gf.geometry()
        .layers()
        .iter()
        .map(|l| bose_einstein(l.temperature, gf.context()))
        .collect()
}

fn im_g(gf: &GreenFunction, x: f64) -> f64 {
    gf.eval(x, x).im
}

/// `C² = 4πħ/(ε0 c² S) · Im G(x, ω, x)`.
pub fn normalization_c_squared(gf: &GreenFunction, x: f64) -> Result<f64> {
    let im = im_g(gf, x);
    if !(im > 0.0) {
        return Err(Error::DegenerateLdos { x, im_g: im });
    }
    let ctx = gf.context();
    Ok(4.0 * PI * consts::HBAR / (consts::EPS0 * consts::C * consts::C * ctx.area) * im)
}

/// Real, positive ladder-operator normalization `C(x, ω)`.
pub fn normalization_c(gf: &GreenFunction, x: f64) -> Result<f64> {
    normalization_c_squared(gf, x).map(f64::sqrt)
}

/// `∫ |G_A|² ⟨η⟩ dx' / C²`.
pub fn photon_number(gf: &GreenFunction, x: f64) -> Result<f64> {
    let eta = occupations(gf)?;
    let weighted = integrate_kernel_product(gf, x, ProductKind::AA, &eta)?.re;
    Ok(weighted / normalization_c_squared(gf, x)?)
}

fn half_shifted(eta: &[f64]) -> Vec<f64> {
    eta.iter().map(|n| n + 0.5).collect()
}

/// `⟨E²⟩_ω` in SI.
fn efield_si(gf: &GreenFunction, x: f64, eta: &[f64]) -> Result<f64> {
    let w = half_shifted(eta);
    Ok(integrate_kernel_product(gf, x, ProductKind::EE, &w)?.re / (2.0 * PI * PI))
}

fn hfield_si(gf: &GreenFunction, x: f64, eta: &[f64]) -> Result<f64> {
    let w = half_shifted(eta);
    Ok(integrate_kernel_product(gf, x, ProductKind::HH, &w)?.re / (2.0 * PI * PI))
}

fn poynting_si(gf: &GreenFunction, x: f64, eta: &[f64]) -> Result<f64> {
    Ok(integrate_kernel_product(gf, x, ProductKind::EH, eta)?.re / (2.0 * PI * PI))
}

fn ldos_si(gf: &GreenFunction, x: f64) -> f64 {
    let ctx = gf.context();
    2.0 * ctx.omega / (PI * consts::C * consts::C * ctx.area) * im_g(gf, x)
}

fn net_emission_si(gf: &GreenFunction, x: f64, eta: &[f64], n_eff: f64) -> f64 {
    let ctx = gf.context();
    let region = gf.geometry().region_of(x);
    let layer = gf.layer(region);
    let im_n2 = layer.im_n_squared();
    if im_n2 == 0.0 {
        return 0.0;
    }
    consts::HBAR * ctx.omega * ctx.omega * im_n2 * ldos_si(gf, x) * (eta[region] - n_eff)
}

/// Electric field fluctuation, including the zero-point term.
pub fn efield_fluctuation(gf: &GreenFunction, x: f64) -> Result<f64> {
    Ok(efield_si(gf, x, &occupations(gf)?)? * units::efield(gf.context()))
}

/// Magnetic field strength fluctuation, including the zero-point term.
pub fn hfield_fluctuation(gf: &GreenFunction, x: f64) -> Result<f64> {
    Ok(hfield_si(gf, x, &occupations(gf)?)? * units::hfield(gf.context()))
}

/// Electric LDOS `ρ = (2ω/(π c² S)) Im G(x, ω, x)`; independent of temperature.
pub fn electric_ldos(gf: &GreenFunction, x: f64) -> f64 {
    ldos_si(gf, x) * units::ldos(gf.context())
}

/// Energy density with non-dispersive susceptibility, `∂(χω)/∂ω = χ`.
pub fn energy_density(gf: &GreenFunction, x: f64) -> Result<f64> {
    let chi = gf.geometry().layer_at(x).chi_e();
    energy_density_with_dispersion(gf, x, chi)
}

/// Energy density for a caller-supplied `∂(χ_e ω)/∂ω` at `x` (non-magnetic media).
pub fn energy_density_with_dispersion(
    gf: &GreenFunction,
    x: f64,
    d_chi_omega: Complex64,
) -> Result<f64> {
    let eta = occupations(gf)?;
    let e2 = efield_si(gf, x, &eta)?;
    let h2 = hfield_si(gf, x, &eta)?;
    let u = 0.5 * consts::EPS0 * (1.0 + d_chi_omega.norm()) * e2 + 0.5 * consts::MU0 * h2;
    Ok(u * units::energy_density(gf.context()))
}

/// Central-difference estimate of `∂(χ(ω) ω)/∂ω` for a tabulated susceptibility.
pub fn dispersion_derivative<F: Fn(f64) -> Complex64>(chi: F, omega: f64, rel_step: f64) -> Complex64 {
    let h = omega * rel_step;
    (chi(omega + h) * (omega + h) - chi(omega - h) * (omega - h)) / (2.0 * h)
}

/// Spectral Poynting vector; thermal part only.
pub fn poynting(gf: &GreenFunction, x: f64) -> Result<f64> {
    Ok(poynting_si(gf, x, &occupations(gf)?)? * units::poynting(gf.context()))
}

/// Local net emission rate `ħω² Im[n²] ρ (⟨η⟩ − ⟨n⟩)`.
pub fn net_emission(gf: &GreenFunction, x: f64) -> Result<f64> {
    let eta = occupations(gf)?;
    let region = gf.geometry().region_of(x);
    if gf.layer(region).im_n_squared() == 0.0 {
        return Ok(0.0);
    }
    let n_eff = photon_number(gf, x)?;
    Ok(net_emission_si(gf, x, &eta, n_eff) * units::net_emission(gf.context()))
}

/// `[S(x+h) − S(x−h)]/(2h) − Q(x)` in net-emission units.
pub fn poynting_theorem_residual(gf: &GreenFunction, x: f64, h: f64) -> Result<f64> {
    let eta = occupations(gf)?;
    let derivative = (poynting_si(gf, x + h, &eta)? - poynting_si(gf, x - h, &eta)?) / (2.0 * h);
    let q = match gf.layer(gf.geometry().region_of(x)).im_n_squared() {
        v if v == 0.0 => 0.0,
        _ => net_emission_si(gf, x, &eta, photon_number(gf, x)?),
    };
    Ok((derivative - q) * units::net_emission(gf.context()))
}

/// Every observable at `x` with the source integrals shared.
pub fn spectral_point(gf: &GreenFunction, x: f64) -> Result<SpectralPoint> {
    let ctx = gf.context();
    let eta = occupations(gf)?;
    let half = half_shifted(&eta);
    let c2 = normalization_c_squared(gf, x)?;
    let n_eff = integrate_kernel_product(gf, x, ProductKind::AA, &eta)?.re / c2;
    let e2 = integrate_kernel_product(gf, x, ProductKind::EE, &half)?.re / (2.0 * PI * PI);
    let h2 = integrate_kernel_product(gf, x, ProductKind::HH, &half)?.re / (2.0 * PI * PI);
    let s = poynting_si(gf, x, &eta)?;
    let chi = gf.geometry().layer_at(x).chi_e();
    let u = 0.5 * consts::EPS0 * (1.0 + chi.norm()) * e2 + 0.5 * consts::MU0 * h2;
    Ok(SpectralPoint {
        x,
        photon_energy: ctx.photon_energy(),
        n_eff,
        t_eff: effective_temperature(n_eff, ctx),
        e2: e2 * units::efield(ctx),
        h2: h2 * units::hfield(ctx),
        ldos: electric_ldos(gf, x),
        u: u * units::energy_density(ctx),
        poynting: s * units::poynting(ctx),
        net_emission: net_emission_si(gf, x, &eta, n_eff) * units::net_emission(ctx),
    })
}

/// Source-domain pair of a commutator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainPair {
    /// `[a_R(x), a_R†(x')]`, sources in `(−∞, min(x, x')]`
    RR,
    /// `[a_L(x), a_L†(x')]`, sources in `[max(x, x'), ∞)`
    LL,
    /// `[a_R(x), a_L†(x')]`, sources in `[x', x]` when `x > x'`
    RL,
}

/// Coefficient of `δ(ω − ω')` in a source-domain commutator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommutatorKernel {
    pub value: Complex64,
    pub domain: DomainPair,
    pub x: f64,
    pub xp: f64,
}

pub fn commutator_kernel(
    gf: &GreenFunction,
    x: f64,
    xp: f64,
    domain: DomainPair,
) -> Result<CommutatorKernel> {
    let (lo, hi) = match domain {
        DomainPair::RR => (f64::NEG_INFINITY, x.min(xp)),
        DomainPair::LL => (x.max(xp), f64::INFINITY),
        DomainPair::RL => (xp, x),
    };
    let value = if hi <= lo {
        Complex64::new(0.0, 0.0)
    } else {
        let ones = vec![1.0; gf.geometry().layers().len()];
        // ∫ G_A(x, y) conj(G_A(x', y)) dy
        let integral = source_integral(
            gf,
            KernelAt { kind: KernelKind::A, x: xp },
            KernelAt { kind: KernelKind::A, x },
            lo,
            hi,
            &ones,
        )?;
        integral / (normalization_c(gf, x)? * normalization_c(gf, xp)?)
    };
    Ok(CommutatorKernel { value, domain, x, xp })
}
