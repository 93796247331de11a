//! Adaptive Gauss–Kronrod quadrature of the pointwise kernels.
//!
//! This is the independent check on the closed-form path. It evaluates
//! the Green's function point by point and never looks at the term
//! structure, so it must be given a geometry in which every layer is
//! lossy (see [`Geometry::regularized`](crate::optics::Geometry::regularized)).

use num_complex::Complex64;

use super::{KernelKind, ProductKind};
use crate::error::{Error, Result};
use crate::greens::GreenFunction;

/// Semi-infinite layers are cut after this many intensity penetration depths `1/(2 Im k)`.
pub const PENETRATION_DEPTHS: f64 = 40.0;
pub const MAX_SUBDIVISIONS: usize = 20_000;
const ROUNDING_FLOOR: f64 = 10.0 * f64::EPSILON;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    magnitude: f64,
    error: f64,
}

fn gauss_kronrod<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut magnitude = fc.norm() * WGK[7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let (lo, hi) = (f(center - dx), f(center + dx));
        kronrod += (lo + hi) * WGK[j];
        magnitude += (lo.norm() + hi.norm()) * WGK[j];
        if j % 2 == 1 {
            gauss += (lo + hi) * WG[j / 2];
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).norm();
    Panel { a, b, value, magnitude: magnitude * half.abs(), error }
}

/// Globally adaptive quadrature over a list of finite panels.
///
/// Stops once the summed error estimate is below `tol · ∫|f|`
/// (with `abs_floor` as a lower bound on the target). Measuring against
/// `∫|f|` rather than `|∫f|` keeps cancelling integrands from stalling.
pub fn adaptive<F: Fn(f64) -> Complex64>(
    f: F,
    breakpoints: &[f64],
    tol: f64,
    abs_floor: f64,
) -> Result<Complex64> {
    adaptive_limited(f, breakpoints, tol, abs_floor, MAX_SUBDIVISIONS)
}

pub fn adaptive_limited<F: Fn(f64) -> Complex64>(
    f: F,
    breakpoints: &[f64],
    tol: f64,
    abs_floor: f64,
    max_subdivisions: usize,
) -> Result<Complex64> {
    let mut panels: Vec<Panel> =
        breakpoints.windows(2).filter(|w| w[1] > w[0]).map(|w| gauss_kronrod(&f, w[0], w[1])).collect();
    let mut subdivisions = 0;
    loop {
        let total: Complex64 = panels.iter().map(|p| p.value).sum();
        let err: f64 = panels.iter().map(|p| p.error).sum();
        let magnitude: f64 = panels.iter().map(|p| p.magnitude).sum();
        if err <= (tol * magnitude).max(abs_floor) {
            return Ok(total);
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.error.total_cmp(&b.1.error))
            .expect("at least one panel");
        if subdivisions >= max_subdivisions {
            let p = &panels[worst];
            return Err(Error::NoConvergence { subdivisions, a: p.a, b: p.b, error: p.error });
        }
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        panels.push(gauss_kronrod(&f, p.a, mid));
        panels.push(gauss_kronrod(&f, mid, p.b));
        subdivisions += 1;
    }
}

fn kernel_value(gf: &GreenFunction, kind: KernelKind, x: f64, s: f64) -> Complex64 {
    let k = gf.scaled_kernels_at_offset(x, s);
    match kind {
        KernelKind::A => k.a,
        KernelKind::E => k.e,
        KernelKind::H => k.h,
    }
}

/// Source-axis breakpoints for the oracle: interfaces, the observation
/// point, and truncation points of the half-spaces.
pub fn breakpoints(gf: &GreenFunction, x: f64, depths: f64) -> Result<Vec<f64>> {
    let layers = gf.geometry().layers();
    let k = gf.wavevectors();
    for (i, layer) in layers.iter().enumerate() {
        if layer.is_lossless() && layer.is_semi_infinite() {
            return Err(Error::Misuse(format!(
                "oracle needs lossy half-spaces; layer {i} is lossless (regularize it first)"
            )));
        }
    }
    let interfaces = gf.geometry().interfaces();
    let first = interfaces.first().copied().unwrap_or(x).min(x);
    let last = interfaces.last().copied().unwrap_or(x).max(x);
    let depth = |region: usize| 1.0 / (2.0 * k[region].im);
    let mut cuts = vec![
        first - depths * depth(0),
        last + depths * depth(layers.len() - 1),
        x,
    ];
    cuts.extend(interfaces);
    // subdivide long stretches of the half-spaces so each panel starts well resolved
    let lo = cuts[0];
    let hi = cuts[1];
    for j in 1..8 {
        let f = j as f64 / 8.0;
        cuts.push(first + (lo - first) * f * f);
        cuts.push(last + (hi - last) * f * f);
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    Ok(cuts)
}

/// Numerical `∫ conj(K₁) K₂ w dx'` at one observation point.
pub fn oracle_quadrature(
    gf: &GreenFunction,
    x: f64,
    kind: ProductKind,
    weights: &[f64],
    tol: f64,
) -> Result<Complex64> {
    oracle_quadrature_with_depth(gf, x, kind, weights, tol, PENETRATION_DEPTHS)
}

pub fn oracle_quadrature_with_depth(
    gf: &GreenFunction,
    x: f64,
    kind: ProductKind,
    weights: &[f64],
    tol: f64,
    depths: f64,
) -> Result<Complex64> {
    let geometry = gf.geometry();
    if weights.len() != geometry.layers().len() {
        return Err(Error::Misuse("one weight per layer required".into()));
    }
    let (k1, k2) = kind.kernels();
    let cuts = breakpoints(gf, x, depths)?;
    let (lo, hi) = (cuts[0], cuts[cuts.len() - 1]);
    // integrand at x' = x + s
    let integrand = |s: f64| {
        let w = weights[geometry.region_of(x + s)];
        kernel_value(gf, k1, x, s).conj() * kernel_value(gf, k2, x, s) * w
    };
    // Folded about the observation point: the direct wave's contributions from
    // either side largely cancel, and pairing them pointwise keeps that
    // cancellation out of the rounding error.
    let mut folded: Vec<f64> = cuts.iter().map(|b| (b - x).abs()).collect();
    folded.push(0.0);
    folded.sort_by(f64::total_cmp);
    folded.dedup();
    let pair = |s: f64, f: &dyn Fn(f64) -> Complex64| {
        let mut v = Complex64::new(0.0, 0.0);
        if x + s <= hi {
            v += f(s);
        }
        if x - s >= lo {
            v += f(-s);
        }
        v
    };
    // Below this the residual is rounding noise of the unfolded integrand.
    let unfolded: f64 = folded
        .windows(2)
        .map(|w| gauss_kronrod(&|s| pair(s, &|t| Complex64::new(integrand(t).norm(), 0.0)), w[0], w[1]).value.re)
        .sum();
    adaptive(|s| pair(s, &integrand), &folded, tol, ROUNDING_FLOOR * unfolded)
}
