//! Analytic Green's function of the 1D Helmholtz equation
//! `d²G/dx² + k(x)² G = -δ(x - x')` for the homogeneous, single-interface
//! and slab geometries.
//!
//! Every block of the Green's function (observation layer × source layer)
//! is a finite sum of terms `a · exp(p x) · exp(q x')` with `p = ±i k_obs`.
//! The sign of `p` identifies right- and left-propagating parts, and terms
//! coming from `exp(ik|x - x'|)` carry the side of the observation point
//! on which they are valid. Keeping that structure lets the source
//! integrals be done in closed form.

use num_complex::Complex64;

use crate::error::Result;
use crate::optics::{
    consts, fresnel, slab_coefficients_with, wavevector, EvaluationContext, Fresnel, Geometry,
    GeometryKind, Layer,
};

/// Propagation direction of a term in the observation coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `exp(+i k x)`
    Right,
    /// `exp(-i k x)`
    Left,
}

impl Direction {
    pub fn sign(self) -> f64 {
        match self {
            Direction::Right => 1.0,
            Direction::Left => -1.0,
        }
    }
}

/// Where the source point has to lie, relative to the observation point,
/// for a term to contribute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceSide {
    Any,
    /// `x' <= x` (one half of a split `|x - x'|` term)
    Below,
    /// `x' > x`
    Above,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreensTerm {
    pub direction: Direction,
    pub amplitude: Complex64,
    /// `p` in `exp(p x)`.
    pub obs_phase: Complex64,
    /// `q` in `exp(q x')`.
    pub src_exponent: Complex64,
    pub side: SourceSide,
}

impl GreensTerm {
    pub fn is_kink(&self) -> bool {
        self.side != SourceSide::Any
    }

    pub fn applies(&self, x: f64, xp: f64) -> bool {
        match self.side {
            SourceSide::Any => true,
            SourceSide::Below => xp <= x,
            SourceSide::Above => xp > x,
        }
    }

    pub fn value(&self, x: f64, xp: f64) -> Complex64 {
        self.amplitude * (self.obs_phase * x + self.src_exponent * xp).exp()
    }

    /// Value at `x' = x + s`, written as `a exp((p + q) x) exp(q s)` so the
    /// separation never passes through an absolute coordinate.
    fn value_at_offset(&self, x: f64, s: f64) -> Complex64 {
        let drift = self.obs_phase + self.src_exponent;
        let base = if drift == Complex64::new(0.0, 0.0) { self.amplitude } else { self.amplitude * (drift * x).exp() };
        base * (self.src_exponent * s).exp()
    }

    fn applies_at_offset(&self, s: f64) -> bool {
        match self.side {
            SourceSide::Any => true,
            SourceSide::Below => s <= 0.0,
            SourceSide::Above => s > 0.0,
        }
    }
}

/// All terms for one (observation layer, source layer) block.
#[derive(Debug, Clone, PartialEq)]
pub struct GreensRegion {
    pub obs_region: usize,
    pub src_region: usize,
    pub terms: Vec<GreensTerm>,
}

/// Piecewise representation of `G(x, ω, x')` for one frequency.
#[derive(Debug, Clone)]
pub struct GreenFunction {
    geometry: Geometry,
    ctx: EvaluationContext,
    wavevectors: Vec<Complex64>,
    blocks: Vec<GreensRegion>,
}

struct TermSink {
    terms: Vec<GreensTerm>,
}

impl TermSink {
    fn new() -> Self {
        TermSink { terms: Vec::new() }
    }

    fn push(&mut self, amplitude: Complex64, k_obs: Complex64, direction: Direction, q: Complex64) {
        self.push_sided(amplitude, k_obs, direction, q, SourceSide::Any);
    }

    fn push_sided(
        &mut self,
        amplitude: Complex64,
        k_obs: Complex64,
        direction: Direction,
        q: Complex64,
        side: SourceSide,
    ) {
        let i = Complex64::i();
        self.terms.push(GreensTerm {
            direction,
            amplitude,
            obs_phase: i * k_obs * direction.sign(),
            src_exponent: q,
            side,
        });
    }

    /// `i/(2k) exp(ik|x - x'|)` split at `x' = x`.
    fn direct(&mut self, k: Complex64) {
        let i = Complex64::i();
        let a = i / (2.0 * k);
        self.push_sided(a, k, Direction::Right, -i * k, SourceSide::Below);
        self.push_sided(a, k, Direction::Left, i * k, SourceSide::Above);
    }

    fn finish(self, obs_region: usize, src_region: usize) -> GreensRegion {
        GreensRegion { obs_region, src_region, terms: self.terms }
    }
}

impl GreenFunction {
    pub fn build(geometry: &Geometry, ctx: &EvaluationContext) -> Result<Self> {
        Self::build_with_fresnel(geometry, ctx, fresnel)
    }

    /// Same as [`GreenFunction::build`] with a caller-supplied interface
    /// coefficient function. Used to inject faults in validation runs.
    pub fn build_with_fresnel(
        geometry: &Geometry,
        ctx: &EvaluationContext,
        fresnel_fn: fn(Complex64, Complex64) -> Fresnel,
    ) -> Result<Self> {
        let wavevectors: Vec<Complex64> =
            geometry.layers().iter().map(|l| wavevector(l, ctx, false)).collect();
        let i = Complex64::i();
        let k = &wavevectors;
        let mut blocks = Vec::new();
        match geometry.kind() {
            GeometryKind::Homogeneous => {
                let mut s = TermSink::new();
                s.direct(k[0]);
                blocks.push(s.finish(0, 0));
            }
            GeometryKind::SingleInterface => {
                let layers = geometry.layers();
                let Fresnel { r, t } = fresnel_fn(layers[0].n, layers[1].n);
                let Fresnel { r: rp, t: tp } = fresnel_fn(layers[1].n, layers[0].n);
                let (k1, k2) = (k[0], k[1]);
                let (g1, g2) = (i / (2.0 * k1), i / (2.0 * k2));

                let mut s = TermSink::new();
                s.direct(k1);
                s.push(g1 * r, k1, Direction::Left, -i * k1);
                blocks.push(s.finish(0, 0));

                let mut s = TermSink::new();
                s.push(g2 * tp, k1, Direction::Left, i * k2);
                blocks.push(s.finish(0, 1));

                let mut s = TermSink::new();
                s.push(g1 * t, k2, Direction::Right, -i * k1);
                blocks.push(s.finish(1, 0));

                let mut s = TermSink::new();
                s.direct(k2);
                s.push(g2 * rp, k2, Direction::Right, i * k2);
                blocks.push(s.finish(1, 1));
            }
            GeometryKind::Slab => {
                blocks = slab_blocks(geometry.layers(), k, ctx, fresnel_fn)?;
            }
        }
        Ok(GreenFunction { geometry: geometry.clone(), ctx: *ctx, wavevectors, blocks })
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    pub fn context(&self) -> &EvaluationContext {
        &self.ctx
    }

    /// Physical (unregularized) wavevector of each layer.
    pub fn wavevectors(&self) -> &[Complex64] {
        &self.wavevectors
    }

    pub fn regions(&self) -> &[GreensRegion] {
        &self.blocks
    }

    pub fn block(&self, obs_region: usize, src_region: usize) -> &GreensRegion {
        let n = self.geometry.layers().len();
        &self.blocks[obs_region * n + src_region]
    }

    pub fn layer(&self, region: usize) -> &Layer {
        &self.geometry.layers()[region]
    }

    fn active_terms(&self, x: f64, xp: f64) -> impl Iterator<Item = &GreensTerm> {
        let block = self.block(self.geometry.region_of(x), self.geometry.region_of(xp));
        block.terms.iter().filter(move |t| t.applies(x, xp))
    }

    /// `G(x, ω, x')`.
    pub fn eval(&self, x: f64, xp: f64) -> Complex64 {
        self.active_terms(x, xp).map(|t| t.value(x, xp)).sum()
    }

    /// `∂G/∂x`, term by term.
    pub fn eval_dx(&self, x: f64, xp: f64) -> Complex64 {
        self.active_terms(x, xp).map(|t| t.obs_phase * t.value(x, xp)).sum()
    }

    /// Right- and left-propagating parts; they sum to [`GreenFunction::eval`].
    pub fn split_rl(&self, x: f64, xp: f64) -> (Complex64, Complex64) {
        let mut right = Complex64::new(0.0, 0.0);
        let mut left = Complex64::new(0.0, 0.0);
        for t in self.active_terms(x, xp) {
            match t.direction {
                Direction::Right => right += t.value(x, xp),
                Direction::Left => left += t.value(x, xp),
            }
        }
        (right, left)
    }

    /// Noise-current scaling `j0 = sqrt(4π ħ ω² ε0 Im[n²] / S)` of a source layer.
    pub fn j0(&self, src_region: usize) -> f64 {
        j0_for(self.layer(src_region), &self.ctx)
    }

    /// `(G_A, G_E, G_B, G_H)` at one point pair.
    pub fn scaled_kernels(&self, x: f64, xp: f64) -> ScaledKernels {
        let (gr, gl) = self.split_rl(x, xp);
        self.kernels_from(x, self.geometry.region_of(xp), gr, gl)
    }

    /// [`GreenFunction::scaled_kernels`] at `x' = x + s`, with the
    /// separation `s` kept exact. Far from the origin this avoids the
    /// rounding of `x + s` and of the large phases `k x`, `k x'`.
    pub fn scaled_kernels_at_offset(&self, x: f64, s: f64) -> ScaledKernels {
        let block = self.block(self.geometry.region_of(x), self.geometry.region_of(x + s));
        let mut right = Complex64::new(0.0, 0.0);
        let mut left = Complex64::new(0.0, 0.0);
        for t in block.terms.iter().filter(|t| t.applies_at_offset(s)) {
            match t.direction {
                Direction::Right => right += t.value_at_offset(x, s),
                Direction::Left => left += t.value_at_offset(x, s),
            }
        }
        self.kernels_from(x, block.src_region, right, left)
    }

    fn kernels_from(&self, x: f64, src_region: usize, gr: Complex64, gl: Complex64) -> ScaledKernels {
        let j0 = self.j0(src_region);
        let omega = self.ctx.omega;
        let n_obs = self.geometry.layer_at(x).n;
        let i = Complex64::i();
        let a = consts::MU0 * j0 * (gr + gl);
        let e = i * omega * a;
        let h = i * omega * n_obs / consts::C * j0 * (gr - gl);
        ScaledKernels { a, e, b: consts::MU0 * h, h }
    }
}

/// Noise-current scaling for a layer at the context frequency.
pub fn j0_for(layer: &Layer, ctx: &EvaluationContext) -> f64 {
    j0_squared(layer, ctx).sqrt()
}

pub(crate) fn j0_squared(layer: &Layer, ctx: &EvaluationContext) -> f64 {
    4.0 * std::f64::consts::PI * consts::HBAR * ctx.omega * ctx.omega * consts::EPS0
        * layer.im_n_squared().max(0.0)
        / ctx.area
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledKernels {
    pub a: Complex64,
    pub e: Complex64,
    pub b: Complex64,
    pub h: Complex64,
}

fn slab_blocks(
    layers: &[Layer],
    k: &[Complex64],
    ctx: &EvaluationContext,
    fresnel_fn: fn(Complex64, Complex64) -> Fresnel,
) -> Result<Vec<GreensRegion>> {
    let i = Complex64::i();
    let d = layers[1].x_max;
    let s = slab_coefficients_with(layers[0].n, layers[1].n, layers[2].n, d, ctx, fresnel_fn)?;
    let (k1, k2, k3) = (k[0], k[1], k[2]);
    let (g1, g2, g3) = (i / (2.0 * k1), i / (2.0 * k2), i / (2.0 * k3));
    let e2d = (i * k2 * d).exp(); // exp(i k2 d)
    let e3d = (-i * k3 * d).exp(); // exp(-i k3 d)
    let round_trip = e2d * e2d;
    let nu = s.nu;
    let mut blocks = Vec::with_capacity(9);

    // observation in the left medium
    let mut b = TermSink::new();
    b.direct(k1);
    b.push(g1 * s.big_r1, k1, Direction::Left, -i * k1);
    blocks.push(b.finish(0, 0));

    let mut b = TermSink::new();
    let amp_up = g2 * s.big_t1p * (1.0 + nu * s.big_r2 * s.big_r1p * round_trip);
    let amp_down = g2 * s.big_t1p * nu * s.big_r2 * round_trip;
    b.push(amp_up, k1, Direction::Left, i * k2);
    b.push(amp_down, k1, Direction::Left, -i * k2);
    blocks.push(b.finish(0, 1));

    let mut b = TermSink::new();
    b.push(g3 * s.big_t2p * s.big_t1p * e2d * e3d, k1, Direction::Left, i * k3);
    blocks.push(b.finish(0, 2));

    // observation inside the slab
    let mut b = TermSink::new();
    b.push(g1 * s.big_t1, k2, Direction::Right, -i * k1);
    b.push(g1 * s.big_t1 * s.big_r2 * round_trip, k2, Direction::Left, -i * k1);
    blocks.push(b.finish(1, 0));

    let mut b = TermSink::new();
    b.direct(k2);
    b.push(g2 * nu * s.big_r2 * round_trip, k2, Direction::Left, -i * k2);
    b.push(g2 * nu * s.big_r2 * s.big_r1p * round_trip, k2, Direction::Left, i * k2);
    b.push(g2 * nu * s.big_r1p, k2, Direction::Right, i * k2);
    b.push(g2 * nu * s.big_r1p * s.big_r2 * round_trip, k2, Direction::Right, -i * k2);
    blocks.push(b.finish(1, 1));

    let mut b = TermSink::new();
    b.push(g3 * s.big_t2p * e2d * e3d, k2, Direction::Left, i * k3);
    b.push(g3 * s.big_t2p * s.big_r1p * e2d * e3d, k2, Direction::Right, i * k3);
    blocks.push(b.finish(1, 2));

    // observation in the right medium
    let mut b = TermSink::new();
    b.push(g1 * s.big_t1 * s.big_t2 * e2d * e3d, k3, Direction::Right, -i * k1);
    blocks.push(b.finish(2, 0));

    let mut b = TermSink::new();
    let lead = g2 * s.big_t2 * e3d;
    b.push(lead * (e2d + nu * s.big_r1p * s.big_r2 * e2d * round_trip), k3, Direction::Right, -i * k2);
    b.push(lead * nu * s.big_r1p * e2d, k3, Direction::Right, i * k2);
    blocks.push(b.finish(2, 1));

    let mut b = TermSink::new();
    b.direct(k3);
    b.push(g3 * s.big_r2p * e3d * e3d, k3, Direction::Right, i * k3);
    blocks.push(b.finish(2, 2));

    Ok(blocks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optics::ev_from_wavelength;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn ctx(e: f64) -> EvaluationContext {
        EvaluationContext::from_photon_energy(e).unwrap()
    }

    fn fig1() -> Geometry {
        Geometry::single_interface((c(2.5, 0.5), 300.0), (c(1.0, 0.0), 0.0)).unwrap()
    }

    fn fig2() -> Geometry {
        Geometry::slab((c(1.5, 0.3), 400.0), (c(1.0, 0.0), 0.0), (c(2.5, 0.5), 300.0), 10e-6)
            .unwrap()
    }

    #[test]
    fn homogeneous_vacuum_self_term() {
        let ctx = ctx(ev_from_wavelength(12.4e-6));
        let g = GreenFunction::build(&Geometry::homogeneous(c(1.0, 0.0), 0.0).unwrap(), &ctx)
            .unwrap();
        let k = ctx.vacuum_wavenumber();
        let v = g.eval(3e-6, 3e-6);
        assert_eq!(v.re, 0.0);
        assert_relative_eq!(v.im, 1.0 / (2.0 * k), max_relative = 1e-14);
    }

    #[test]
    fn single_interface_deep_source_reduces_to_bulk() {
        let ctx = ctx(0.1);
        let g = GreenFunction::build(&fig1(), &ctx).unwrap();
        let bulk = GreenFunction::build(&Geometry::homogeneous(c(2.5, 0.5), 0.0).unwrap(), &ctx)
            .unwrap();
        let (x, xp) = (-80e-6, -81e-6);
        let diff = (g.eval(x, xp) - bulk.eval(x, xp)).norm();
        assert!(diff < 1e-12 * bulk.eval(x, xp).norm());
    }

    #[test]
    fn uniform_slab_is_homogeneous() {
        let ctx = ctx(0.118);
        let n = c(1.7, 0.2);
        let slab = Geometry::slab((n, 0.0), (n, 0.0), (n, 0.0), 7e-6).unwrap();
        let g = GreenFunction::build(&slab, &ctx).unwrap();
        let h = GreenFunction::build(&Geometry::homogeneous(n, 0.0).unwrap(), &ctx).unwrap();
        for &(x, xp) in &[(-3e-6, 2e-6), (1e-6, 5e-6), (9e-6, -1e-6), (3e-6, 3e-6), (12e-6, 4e-6)] {
            let (a, b) = (g.eval(x, xp), h.eval(x, xp));
            assert!((a - b).norm() < 1e-12 * b.norm(), "{x} {xp}: {a} vs {b}");
        }
    }

    #[test]
    fn interface_continuity_at_fig1() {
        let ctx = ctx(0.1);
        let g = GreenFunction::build(&fig1(), &ctx).unwrap();
        let below = g.eval(-1e-20, 0.0);
        let above = g.eval(0.0, 0.0);
        assert!((below - above).norm() < 1e-10 * above.norm());
    }

    #[test]
    fn slab_cavity_to_absorbing_half_space_decay() {
        let ctx = ctx(0.118);
        let g = GreenFunction::build(&fig2(), &ctx).unwrap();
        let k3 = g.wavevectors()[2];
        let (a, b) = (g.eval(5e-6, 20e-6), g.eval(5e-6, 30e-6));
        assert_relative_eq!(b.norm() / a.norm(), (-k3.im * 10e-6).exp(), max_relative = 1e-10);
    }

    #[test]
    fn split_parts_in_outgoing_regions() {
        let ctx = ctx(0.1);
        let h = GreenFunction::build(&Geometry::homogeneous(c(2.5, 0.5), 0.0).unwrap(), &ctx)
            .unwrap();
        let (r, l) = h.split_rl(2e-6, -1e-6);
        assert_eq!(l, c(0.0, 0.0));
        assert_eq!(r, h.eval(2e-6, -1e-6));

        let g = GreenFunction::build(&fig1(), &ctx).unwrap();
        let (r, l) = g.split_rl(4e-6, -2e-6);
        assert_eq!(l, c(0.0, 0.0));
        let k = g.wavevectors();
        let t = fresnel(c(2.5, 0.5), c(1.0, 0.0)).t;
        let expected = Complex64::i() / (2.0 * k[0]) * t
            * (Complex64::i() * (k[1] * 4e-6 + k[0] * 2e-6)).exp();
        assert!((r - expected).norm() < 1e-14 * expected.norm());
    }

    #[test]
    fn kernels_vanish_for_lossless_sources() {
        let ctx = ctx(0.1);
        let g = GreenFunction::build(&fig1(), &ctx).unwrap();
        let k = g.scaled_kernels(-1e-6, 3e-6);
        assert_eq!(k.a, c(0.0, 0.0));
        assert_eq!(k.h, c(0.0, 0.0));
    }

    #[test]
    fn kernel_ratios_in_bulk() {
        let ctx = ctx(0.1);
        let n = c(2.5, 0.5);
        let h = GreenFunction::build(&Geometry::homogeneous(n, 0.0).unwrap(), &ctx).unwrap();
        let k = h.scaled_kernels(2e-6, -1e-6);
        let ratio = k.e / k.a;
        assert_relative_eq!(ratio.re, 0.0, epsilon = 1e-6);
        assert_relative_eq!(ratio.im, ctx.omega, max_relative = 1e-14);
        let expected = n / consts::C * k.e;
        assert!((k.b - expected).norm() < 1e-13 * expected.norm());
    }
}
