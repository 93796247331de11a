//! Closed-form source integrals of products of Green's-function kernels.
//!
//! After splitting the source axis at interfaces and at the observation
//! points, each integrand is a finite sum of pure exponentials, so every
//! piece is integrated exactly. Lossless half-spaces are handled through
//! the `Im n → 0⁺` limit, where the vanishing noise strength and the
//! diverging decay length cancel.

pub mod oracle;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::greens::{j0_squared, GreenFunction, GreensTerm, SourceSide};
use crate::optics::{consts, EvaluationContext, Layer};

/// `coefficient · exp(exponent · x')` on `[a, b]`; either end may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpSegment {
    pub coefficient: Complex64,
    pub exponent: Complex64,
    pub a: f64,
    pub b: f64,
}

/// Below this value of `|p| (b - a)` the primitive is evaluated from its Taylor series.
const SERIES_THRESHOLD: f64 = 1e-8;

/// Exact integral of an [`ExpSegment`].
pub fn integrate_exp(seg: &ExpSegment) -> Result<Complex64> {
    let ExpSegment { coefficient: c, exponent: p, a, b } = *seg;
    if a == b {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if !(a < b) {
        return Err(Error::Domain(format!("segment [{a}, {b}] is reversed")));
    }
    let upper_open = b == f64::INFINITY;
    let lower_open = a == f64::NEG_INFINITY;
    if upper_open && lower_open {
        return Err(Error::Divergent("exponential over the whole real line".into()));
    }
    if upper_open {
        if !(p.re < 0.0) {
            return Err(Error::Divergent(format!("exp({p} x) on [{a}, inf)")));
        }
        return Ok(-c * (p * a).exp() / p);
    }
    if lower_open {
        if !(p.re > 0.0) {
            return Err(Error::Divergent(format!("exp({p} x) on (-inf, {b}]")));
        }
        return Ok(c * (p * b).exp() / p);
    }
    let width = b - a;
    let z = p * width;
    if z.norm() < SERIES_THRESHOLD {
        // (e^z - 1)/z = 1 + z/2 + z²/6 + …
        return Ok(c * (p * a).exp() * width * (1.0 + z / 2.0 + z * z / 6.0));
    }
    Ok(c * (p * a).exp() * expm1(z) / p)
}

/// `exp(z) - 1` without cancellation for small `|z|`.
fn expm1(z: Complex64) -> Complex64 {
    let (s, co) = z.im.sin_cos();
    let half = (0.5 * z.im).sin();
    Complex64::new(z.re.exp_m1() * co - 2.0 * half * half, z.re.exp() * s)
}

/// `lim_{ε→0⁺} ∫ j0² |e^{±ikx'}|² dx'` over a lossless half-space, per unit `|c|²`.
fn lossless_tail_factor(layer: &Layer, ctx: &EvaluationContext) -> f64 {
    // j0² = 4πħω²ε0 · 2 Re(n) ε / S and ∫ e^{-2 ω ε |x'| / c} dx' = c / (2ωε)
    4.0 * std::f64::consts::PI * consts::HBAR * ctx.omega * consts::EPS0 * consts::C * layer.n.re
        / ctx.area
}

/// Limit of `∫ j0(x')² |c_amp exp(±ik x')|² dx'` over a lossless half-space
/// as an infinitesimal loss is switched off after integration.
pub fn lossless_halfspace_weight(
    c_amp: Complex64,
    layer: &Layer,
    ctx: &EvaluationContext,
) -> Result<f64> {
    if !layer.is_lossless() {
        return Err(Error::Misuse("lossless half-space weight requested for a lossy layer".into()));
    }
    if !layer.is_semi_infinite() {
        return Err(Error::Misuse("lossless limit only diverges on a half-space".into()));
    }
    Ok(c_amp.norm_sqr() * lossless_tail_factor(layer, ctx))
}

/// Which field each side of the product is.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    /// vector potential, `G_A`
    A,
    /// electric field, `G_E`
    E,
    /// magnetic field strength, `G_H`
    H,
}

/// Source integrals used by the observables: `∫ conj(K₁) K₂ w dx'`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductKind {
    /// `|G_A|²`
    AA,
    /// `|G_E|²`
    EE,
    /// `|G_H|²`
    HH,
    /// `conj(G_E) G_H`, whose real part is the Poynting integrand
    EH,
}

impl ProductKind {
    pub const ALL: [ProductKind; 4] =
        [ProductKind::AA, ProductKind::EE, ProductKind::HH, ProductKind::EH];

    pub fn kernels(self) -> (KernelKind, KernelKind) {
        match self {
            ProductKind::AA => (KernelKind::A, KernelKind::A),
            ProductKind::EE => (KernelKind::E, KernelKind::E),
            ProductKind::HH => (KernelKind::H, KernelKind::H),
            ProductKind::EH => (KernelKind::E, KernelKind::H),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ProductKind::AA => "AA",
            ProductKind::EE => "EE",
            ProductKind::HH => "HH",
            ProductKind::EH => "EH",
        }
    }
}

/// Prefactor turning a Green's-function term into the given kernel, with `j0` left out.
pub(crate) fn kernel_factor(
    gf: &GreenFunction,
    kind: KernelKind,
    x: f64,
    term: &GreensTerm,
) -> Complex64 {
    let omega = gf.context().omega;
    let i = Complex64::i();
    match kind {
        KernelKind::A => Complex64::new(consts::MU0, 0.0),
        KernelKind::E => i * omega * consts::MU0,
        KernelKind::H => {
            let n = gf.geometry().layer_at(x).n;
            i * omega * n / consts::C * term.direction.sign()
        }
    }
}

fn side_active(side: SourceSide, x: f64, seg_lo: f64, seg_hi: f64) -> bool {
    match side {
        SourceSide::Any => true,
        SourceSide::Below => seg_hi <= x,
        SourceSide::Above => seg_lo >= x,
    }
}

/// Expanded kernel terms `(prefactor · amplitude · e^{p x}, q)` active on a segment.
fn segment_terms(
    gf: &GreenFunction,
    kind: KernelKind,
    x: f64,
    src_region: usize,
    lo: f64,
    hi: f64,
) -> Vec<(Complex64, Complex64)> {
    let obs_region = gf.geometry().region_of(x);
    gf.block(obs_region, src_region)
        .terms
        .iter()
        .filter(|t| side_active(t.side, x, lo, hi))
        .map(|t| {
            let amp = kernel_factor(gf, kind, x, t) * t.amplitude * (t.obs_phase * x).exp();
            (amp, t.src_exponent)
        })
        .collect()
}

/// A kernel evaluated at one observation point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelAt {
    pub kind: KernelKind,
    pub x: f64,
}

/// `∫_{lo}^{hi} conj(K₁(x₁, x')) K₂(x₂, x') w(x') dx'` with `w` constant per layer.
///
/// Lossless layers of finite width contribute nothing; lossless half-spaces
/// contribute their `Im n → 0⁺` limit.
pub fn source_integral(
    gf: &GreenFunction,
    first: KernelAt,
    second: KernelAt,
    lo: f64,
    hi: f64,
    weights: &[f64],
) -> Result<Complex64> {
    let geometry = gf.geometry();
    let layers = geometry.layers();
    if weights.len() != layers.len() {
        return Err(Error::Misuse(format!(
            "{} weights for {} layers",
            weights.len(),
            layers.len()
        )));
    }
    if !(lo <= hi) {
        return Err(Error::Domain(format!("integration range [{lo}, {hi}] is reversed")));
    }
    let ctx = gf.context();

    let mut cuts = vec![lo, hi];
    for p in geometry.interfaces().into_iter().chain([first.x, second.x]) {
        if p > lo && p < hi {
            cuts.push(p);
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let mut total = Complex64::new(0.0, 0.0);
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        if a == b {
            continue;
        }
        let probe = match (a.is_finite(), b.is_finite()) {
            (true, true) => 0.5 * (a + b),
            (true, false) => a + 1.0,
            (false, true) => b - 1.0,
            (false, false) => 0.0,
        };
        let region = geometry.region_of(probe);
        let layer = &layers[region];
        let weight = weights[region];
        if weight == 0.0 {
            continue;
        }
        let t1 = segment_terms(gf, first.kind, first.x, region, a, b);
        let t2 = segment_terms(gf, second.kind, second.x, region, a, b);

        if layer.is_lossless() {
            if a.is_finite() && b.is_finite() {
                continue;
            }
            // Only pairs whose x'-dependence cancels in modulus survive the limit.
            let tail = lossless_tail_factor(layer, ctx);
            let scale = gf.wavevectors()[region].norm();
            for &(c1, q1) in &t1 {
                for &(c2, q2) in &t2 {
                    if (q1.conj() + q2).norm() <= 1e-12 * scale {
                        total += c1.conj() * c2 * tail * weight;
                    }
                }
            }
            continue;
        }

        let strength = j0_squared(layer, ctx) * weight;
        for &(c1, q1) in &t1 {
            for &(c2, q2) in &t2 {
                let seg = ExpSegment { coefficient: c1.conj() * c2, exponent: q1.conj() + q2, a, b };
                total += integrate_exp(&seg)? * strength;
            }
        }
    }
    Ok(total)
}

/// Integral of a kernel product at one observation point over the whole source axis.
pub fn integrate_kernel_product(
    gf: &GreenFunction,
    x: f64,
    kind: ProductKind,
    weights: &[f64],
) -> Result<Complex64> {
    let (k1, k2) = kind.kernels();
    source_integral(
        gf,
        KernelAt { kind: k1, x },
        KernelAt { kind: k2, x },
        f64::NEG_INFINITY,
        f64::INFINITY,
        weights,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optics::Geometry;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn seg(coefficient: Complex64, exponent: Complex64, a: f64, b: f64) -> ExpSegment {
        ExpSegment { coefficient, exponent, a, b }
    }

    #[test]
    fn elementary_integrals() {
        let one = c(1.0, 0.0);
        let v = integrate_exp(&seg(one, c(0.0, 0.0), 0.0, 1.0)).unwrap();
        assert!((v - one).norm() < 1e-15);
        let v = integrate_exp(&seg(one, c(-1.0, 0.0), 0.0, f64::INFINITY)).unwrap();
        assert!((v - one).norm() < 1e-15);
        let v = integrate_exp(&seg(one, c(0.0, 2.0), 0.0, PI)).unwrap();
        assert!(v.norm() < 1e-15);
        let v = integrate_exp(&seg(one, c(2.0, 0.0), f64::NEG_INFINITY, 0.0)).unwrap();
        assert!((v - c(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn divergent_segments_are_rejected() {
        let one = c(1.0, 0.0);
        assert!(matches!(
            integrate_exp(&seg(one, c(0.0, 1.0), 0.0, f64::INFINITY)),
            Err(Error::Divergent(_))
        ));
        assert!(matches!(
            integrate_exp(&seg(one, c(-1.0, 0.0), f64::NEG_INFINITY, 0.0)),
            Err(Error::Divergent(_))
        ));
    }

    #[test]
    fn series_branch_matches_direct_formula_at_threshold() {
        let p = c(0.6, 0.8); // |p| = 1
        for width in [0.999e-8, 1.001e-8] {
            let s = seg(c(1.0, 0.0), p, 0.3, 0.3 + width);
            let v = integrate_exp(&s).unwrap();
            let width = s.b - s.a;
            let z = p * width;
            let reference = (p * 0.3).exp() * width * (1.0 + z / 2.0 + z * z / 6.0 + z * z * z / 24.0);
            assert!((v - reference).norm() < 1e-12 * reference.norm());
        }
    }

    #[test]
    fn halfspace_weight_checks_its_layer() {
        let ctx = EvaluationContext::from_photon_energy(0.1).unwrap();
        let g = Geometry::single_interface((c(2.5, 0.5), 300.0), (c(1.0, 0.0), 0.0)).unwrap();
        let vac = g.layers()[1];
        assert_eq!(lossless_halfspace_weight(c(0.0, 0.0), &vac, &ctx).unwrap(), 0.0);
        assert!(lossless_halfspace_weight(c(1.0, 0.0), &vac, &ctx).unwrap() > 0.0);
        assert!(matches!(
            lossless_halfspace_weight(c(1.0, 0.0), &g.layers()[0], &ctx),
            Err(Error::Misuse(_))
        ));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn additivity_under_bisection(
                pr in -3.0f64..3.0, pi in -20.0f64..20.0, a in -2.0f64..2.0, w in 1e-3f64..3.0,
                f in 0.05f64..0.95
            ) {
                let p = c(pr, pi);
                let one = c(1.0, 0.0);
                let whole = integrate_exp(&seg(one, p, a, a + w)).unwrap();
                let m = a + f * w;
                let parts = integrate_exp(&seg(one, p, a, m)).unwrap()
                    + integrate_exp(&seg(one, p, m, a + w)).unwrap();
                let scale = whole.norm().max((p * a).exp().norm().max((p * (a + w)).exp().norm()) * w);
                prop_assert!((whole - parts).norm() <= 1e-13 * scale);
            }
        }
    }
}
