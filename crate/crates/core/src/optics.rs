//! Scene description, physical constants, thermal occupation and
//! normal-incidence interface coefficients.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Physical constants (CODATA 2018). Every unit conversion goes through here.
pub mod consts {
    /// Speed of light in vacuum, m/s.
    pub const C: f64 = 299_792_458.0;
    /// Vacuum permittivity, F/m.
    pub const EPS0: f64 = 8.854_187_812_8e-12;
    /// Vacuum permeability, chosen so that `EPS0 * MU0 * C^2 == 1`.
    pub const MU0: f64 = 1.0 / (EPS0 * C * C);
    /// Reduced Planck constant, J s.
    pub const HBAR: f64 = 1.054_571_817e-34;
    /// Reduced Planck constant, eV s.
    pub const HBAR_EV: f64 = 6.582_119_569e-16;
    /// Boltzmann constant, eV/K.
    pub const KB_EV: f64 = 8.617_333_262e-5;
    /// hbar * c, eV nm.
    pub const HBAR_C_EV_NM: f64 = 197.326_980_4;
}

/// Angular frequency (rad/s) for a photon energy in eV.
pub fn omega_from_ev(energy_ev: f64) -> f64 {
    energy_ev / consts::HBAR_EV
}

/// Vacuum wavelength in meters for a photon energy in eV.
pub fn wavelength_from_ev(energy_ev: f64) -> f64 {
    2.0 * std::f64::consts::PI * consts::HBAR_EV * consts::C / energy_ev
}

/// Photon energy in eV for a vacuum wavelength in meters.
pub fn ev_from_wavelength(lambda: f64) -> f64 {
    2.0 * std::f64::consts::PI * consts::HBAR_EV * consts::C / lambda
}

/// One homogeneous region of the stack.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Layer {
    pub n: Complex64,
    /// Kelvin.
    pub temperature: f64,
    /// Meters; `-inf` for a left half-space.
    pub x_min: f64,
    /// Meters; `+inf` for a right half-space.
    pub x_max: f64,
}

impl Layer {
    pub fn new(n: Complex64, temperature: f64, x_min: f64, x_max: f64) -> Result<Self> {
        let layer = Layer { n, temperature, x_min, x_max };
        let problems = layer.problems("layer");
        if problems.is_empty() {
            Ok(layer)
        } else {
            Err(Error::InvalidGeometry(problems.join("; ")))
        }
    }

    fn problems(&self, name: &str) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.n.re.is_finite() && self.n.im.is_finite()) || self.n.re <= 0.0 {
            out.push(format!("{name}: refractive index must be finite with positive real part"));
        }
        if self.n.im < 0.0 {
            out.push(format!("{name}: gain media (Im n < 0) are not supported"));
        }
        if !(self.temperature >= 0.0) || !self.temperature.is_finite() {
            out.push(format!("{name}: temperature must be a finite value >= 0 K"));
        }
        if !(self.x_min < self.x_max) {
            out.push(format!("{name}: x_min must be below x_max"));
        }
        out
    }

    /// A layer with `Im n == 0` exactly.
    pub fn is_lossless(&self) -> bool {
        self.n.im == 0.0
    }

    pub fn is_semi_infinite(&self) -> bool {
        self.x_min == f64::NEG_INFINITY || self.x_max == f64::INFINITY
    }

    /// `Im[n^2]`, the strength of the noise current in this layer.
    pub fn im_n_squared(&self) -> f64 {
        (self.n * self.n).im
    }

    /// Electric susceptibility `n^2 - 1` (non-magnetic media).
    pub fn chi_e(&self) -> Complex64 {
        self.n * self.n - 1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeometryKind {
    Homogeneous,
    SingleInterface,
    Slab,
}

impl GeometryKind {
    pub fn layer_count(self) -> usize {
        match self {
            GeometryKind::Homogeneous => 1,
            GeometryKind::SingleInterface => 2,
            GeometryKind::Slab => 3,
        }
    }
}

/// Piecewise-homogeneous stack tiling the real line.
#[derive(Debug, Clone, PartialEq)]
pub struct Geometry {
    kind: GeometryKind,
    layers: Vec<Layer>,
}

impl Geometry {
    pub fn homogeneous(n: Complex64, temperature: f64) -> Result<Self> {
        Self::from_layers(
            GeometryKind::Homogeneous,
            vec![Layer { n, temperature, x_min: f64::NEG_INFINITY, x_max: f64::INFINITY }],
        )
    }

    /// Interface at `x = 0`; `left` occupies `x < 0`.
    pub fn single_interface(left: (Complex64, f64), right: (Complex64, f64)) -> Result<Self> {
        Self::from_layers(
            GeometryKind::SingleInterface,
            vec![
                Layer { n: left.0, temperature: left.1, x_min: f64::NEG_INFINITY, x_max: 0.0 },
                Layer { n: right.0, temperature: right.1, x_min: 0.0, x_max: f64::INFINITY },
            ],
        )
    }

    /// Interfaces at `x = 0` and `x = d`.
    pub fn slab(
        left: (Complex64, f64),
        middle: (Complex64, f64),
        right: (Complex64, f64),
        d: f64,
    ) -> Result<Self> {
        if !(d > 0.0 && d.is_finite()) {
            return Err(Error::InvalidGeometry(format!("slab width must be positive, got {d}")));
        }
        Self::from_layers(
            GeometryKind::Slab,
            vec![
                Layer { n: left.0, temperature: left.1, x_min: f64::NEG_INFINITY, x_max: 0.0 },
                Layer { n: middle.0, temperature: middle.1, x_min: 0.0, x_max: d },
                Layer { n: right.0, temperature: right.1, x_min: d, x_max: f64::INFINITY },
            ],
        )
    }

    /// Validates count, contiguity and per-layer constraints; every violation is reported.
    pub fn from_layers(kind: GeometryKind, layers: Vec<Layer>) -> Result<Self> {
        let mut problems = Vec::new();
        if layers.len() != kind.layer_count() {
            problems.push(format!(
                "{kind:?} geometry needs {} layers, got {}",
                kind.layer_count(),
                layers.len()
            ));
        }
        for (i, layer) in layers.iter().enumerate() {
            problems.extend(layer.problems(&format!("layer {i}")));
        }
        if let Some(first) = layers.first() {
            if first.x_min != f64::NEG_INFINITY {
                problems.push("first layer must extend to -inf".into());
            }
        }
        if let Some(last) = layers.last() {
            if last.x_max != f64::INFINITY {
                problems.push("last layer must extend to +inf".into());
            }
        }
        for (i, pair) in layers.windows(2).enumerate() {
            if pair[0].x_max != pair[1].x_min {
                problems.push(format!("layers {i} and {} are not contiguous", i + 1));
            }
        }
        if problems.is_empty() {
            Ok(Geometry { kind, layers })
        } else {
            Err(Error::InvalidGeometry(problems.join("; ")))
        }
    }

    pub fn kind(&self) -> GeometryKind {
        self.kind
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn interfaces(&self) -> Vec<f64> {
        self.layers.iter().skip(1).map(|l| l.x_min).collect()
    }

    /// Half-open dispatch `[x_min, x_max)`: a point on an interface belongs to the right layer.
    pub fn region_of(&self, x: f64) -> usize {
        self.layers
            .iter()
            .position(|l| x < l.x_max)
            .unwrap_or(self.layers.len() - 1)
    }

    pub fn layer_at(&self, x: f64) -> &Layer {
        &self.layers[self.region_of(x)]
    }

    /// Same geometry with every layer at the given temperature.
    pub fn with_uniform_temperature(&self, temperature: f64) -> Self {
        let mut out = self.clone();
        for layer in &mut out.layers {
            layer.temperature = temperature;
        }
        out
    }

    /// Same geometry with an imaginary part `eps` added to every lossless index.
    pub fn regularized(&self, eps: f64) -> Self {
        let mut out = self.clone();
        for layer in &mut out.layers {
            if layer.is_lossless() {
                layer.n.im = eps;
            }
        }
        out
    }
}

/// Per-frequency evaluation settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvaluationContext {
    /// rad/s
    pub omega: f64,
    /// Quantization area, m^2.
    pub area: f64,
    /// Infinitesimal loss used only by the regularized validation path.
    pub loss_epsilon: f64,
}

impl EvaluationContext {
    pub const DEFAULT_LOSS_EPSILON: f64 = 1e-8;

    pub fn new(omega: f64, area: f64, loss_epsilon: f64) -> Result<Self> {
        let mut problems = Vec::new();
        if !(omega > 0.0 && omega.is_finite()) {
            problems.push(format!("omega must be positive, got {omega}"));
        }
        if !(area > 0.0 && area.is_finite()) {
            problems.push(format!("quantization area must be positive, got {area}"));
        }
        if !(loss_epsilon > 0.0 && loss_epsilon <= 1e-6) {
            problems.push(format!("loss_epsilon must lie in (0, 1e-6], got {loss_epsilon}"));
        }
        if problems.is_empty() {
            Ok(EvaluationContext { omega, area, loss_epsilon })
        } else {
            Err(Error::InvalidContext(problems.join("; ")))
        }
    }

    /// Unit area and the default regularization.
    pub fn from_photon_energy(energy_ev: f64) -> Result<Self> {
        Self::new(omega_from_ev(energy_ev), 1.0, Self::DEFAULT_LOSS_EPSILON)
    }

    pub fn photon_energy(&self) -> f64 {
        self.omega * consts::HBAR_EV
    }

    pub fn vacuum_wavelength(&self) -> f64 {
        2.0 * std::f64::consts::PI * consts::C / self.omega
    }

    pub fn vacuum_wavenumber(&self) -> f64 {
        self.omega / consts::C
    }
}

/// `k = omega n / c`. With `regularize`, a lossless index gets `Im n = loss_epsilon`.
pub fn wavevector(layer: &Layer, ctx: &EvaluationContext, regularize: bool) -> Complex64 {
    let n = if regularize && layer.is_lossless() {
        Complex64::new(layer.n.re, ctx.loss_epsilon)
    } else {
        layer.n
    };
    n * ctx.vacuum_wavenumber()
}

/// Bose-Einstein occupation `1 / (exp(hbar omega / kB T) - 1)`; exactly 0 at `T = 0`.
pub fn bose_einstein(temperature: f64, ctx: &EvaluationContext) -> Result<f64> {
    if !(temperature >= 0.0) {
        return Err(Error::Domain(format!("negative temperature {temperature} K")));
    }
    if temperature == 0.0 {
        return Ok(0.0);
    }
    let x = ctx.photon_energy() / (consts::KB_EV * temperature);
    Ok(1.0 / x.exp_m1())
}

/// Inverse of [`bose_einstein`] at fixed frequency. Zero occupation maps to 0 K.
pub fn effective_temperature(n_eff: f64, ctx: &EvaluationContext) -> f64 {
    if n_eff <= 0.0 {
        return 0.0;
    }
    ctx.photon_energy() / (consts::KB_EV * (1.0 / n_eff).ln_1p())
}

/// Normal-incidence amplitude coefficients for a wave travelling from `n1` into `n2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fresnel {
    pub r: Complex64,
    pub t: Complex64,
}

pub fn fresnel(n1: Complex64, n2: Complex64) -> Fresnel {
    let sum = n1 + n2;
    Fresnel { r: (n1 - n2) / sum, t: 2.0 * n1 / sum }
}

/// Composite coefficients of the two-interface stack `n1 | n2 (width d) | n3`.
///
/// Unprimed quantities describe waves arriving from the left, primed ones
/// waves arriving from the right. The convention is fixed by the Green's
/// function terms that use them:
///
/// * `big_r1` is the full stack reflection seen from medium 1,
///   `big_t1 = t1 * nu` the transmission from medium 1 into the cavity,
///   `big_r2 = r2` and `big_t2 = t2` the bare second interface.
/// * the mirror images: `big_r2p` is the full stack reflection seen from
///   medium 3, `big_t2p = t2' * nu`, `big_r1p = r1'` and `big_t1p = t1'`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlabCoefficients {
    pub r1: Complex64,
    pub t1: Complex64,
    pub r2: Complex64,
    pub t2: Complex64,
    pub r1p: Complex64,
    pub t1p: Complex64,
    pub r2p: Complex64,
    pub t2p: Complex64,
    /// `1 / (1 + r1 r2 exp(2 i k2 d))`
    pub nu: Complex64,
    pub big_r1: Complex64,
    pub big_t1: Complex64,
    pub big_r2: Complex64,
    pub big_t2: Complex64,
    pub big_r1p: Complex64,
    pub big_t1p: Complex64,
    pub big_r2p: Complex64,
    pub big_t2p: Complex64,
}

/// Denominators smaller than this (in modulus) are treated as a lasing pole.
const SINGULAR_DENOMINATOR: f64 = 1e-12;

pub fn slab_coefficients(
    n1: Complex64,
    n2: Complex64,
    n3: Complex64,
    d: f64,
    ctx: &EvaluationContext,
) -> Result<SlabCoefficients> {
    slab_coefficients_with(n1, n2, n3, d, ctx, fresnel)
}

pub(crate) fn slab_coefficients_with(
    n1: Complex64,
    n2: Complex64,
    n3: Complex64,
    d: f64,
    ctx: &EvaluationContext,
    fresnel_fn: fn(Complex64, Complex64) -> Fresnel,
) -> Result<SlabCoefficients> {
    if !(d > 0.0) {
        return Err(Error::InvalidGeometry(format!("slab width must be positive, got {d}")));
    }
    let k2 = n2 * ctx.vacuum_wavenumber();
    let round_trip = (Complex64::i() * 2.0 * k2 * d).exp();
    let Fresnel { r: r1, t: t1 } = fresnel_fn(n1, n2);
    let Fresnel { r: r2, t: t2 } = fresnel_fn(n2, n3);
    let Fresnel { r: r1p, t: t1p } = fresnel_fn(n2, n1);
    let Fresnel { r: r2p, t: t2p } = fresnel_fn(n3, n2);

    let denom = 1.0 + r1 * r2 * round_trip;
    if denom.norm() < SINGULAR_DENOMINATOR {
        return Err(Error::SingularGeometry(format!(
            "1 + r1 r2 exp(2 i k2 d) = {denom} vanishes"
        )));
    }
    let nu = 1.0 / denom;
    Ok(SlabCoefficients {
        r1,
        t1,
        r2,
        t2,
        r1p,
        t1p,
        r2p,
        t2p,
        nu,
        big_r1: (r1 + r2 * round_trip) * nu,
        big_t1: t1 * nu,
        big_r2: r2,
        big_t2: t2,
        big_r1p: r1p,
        big_t1p: t1p,
        big_r2p: (r2p + r1p * round_trip) * nu,
        big_t2p: t2p * nu,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn ctx_ev(e: f64) -> EvaluationContext {
        EvaluationContext::from_photon_energy(e).unwrap()
    }

    #[test]
    fn vacuum_wavevector_at_12_4_um() {
        let ctx = ctx_ev(ev_from_wavelength(12.4e-6));
        let layer = Layer::new(c(1.0, 0.0), 0.0, f64::NEG_INFINITY, 0.0).unwrap();
        let k = wavevector(&layer, &ctx, false);
        assert_relative_eq!(k.re, 2.0 * std::f64::consts::PI / 12.4e-6, max_relative = 1e-12);
        assert_eq!(k.im, 0.0);
        assert_relative_eq!(k.re, 5.0671e5, max_relative = 1e-4);

        let lossy = Layer { n: c(2.5, 0.5), ..layer };
        let k = wavevector(&lossy, &ctx, false);
        assert_relative_eq!(k.re, 1.2668e6, max_relative = 1e-4);
        assert_relative_eq!(k.im, 2.5335e5, max_relative = 1e-4);

        let ctx = EvaluationContext { loss_epsilon: 1e-9, ..ctx };
        let k = wavevector(&layer, &ctx, true);
        assert_relative_eq!(k.im, 5.0671e-4, max_relative = 1e-4);
    }

    #[test]
    fn bose_einstein_values() {
        let ctx = ctx_ev(0.10);
        assert_eq!(bose_einstein(0.0, &ctx).unwrap(), 0.0);
        assert!((bose_einstein(300.0, &ctx).unwrap() - 0.021342).abs() < 1e-6);
        // 1/(exp(5.415442) - 1)
        let n = bose_einstein(300.0, &ctx_ev(0.14)).unwrap();
        assert_relative_eq!(n, 4.467240e-3, max_relative = 1e-6);
        assert!(matches!(bose_einstein(-1.0, &ctx), Err(Error::Domain(_))));
    }

    #[test]
    fn effective_temperature_inverts_occupation() {
        let ctx = ctx_ev(0.10);
        assert_eq!(effective_temperature(0.0, &ctx), 0.0);
        assert!((effective_temperature(0.021342, &ctx) - 300.0).abs() < 0.01);
        let n = bose_einstein(400.0, &ctx).unwrap();
        assert_relative_eq!(effective_temperature(n, &ctx), 400.0, max_relative = 1e-12);
    }

    #[test]
    fn fresnel_values() {
        let f = fresnel(c(1.3, 0.2), c(1.3, 0.2));
        assert_eq!(f.r, c(0.0, 0.0));
        assert_eq!(f.t, c(1.0, 0.0));
        let f = fresnel(c(1.0, 0.0), c(2.5, 0.5));
        assert_relative_eq!(f.r.re, -0.44, epsilon = 1e-14);
        assert_relative_eq!(f.r.im, -0.08, epsilon = 1e-14);
    }

    #[test]
    fn slab_without_second_interface() {
        let ctx = ctx_ev(0.118);
        let (n1, n2) = (c(1.5, 0.3), c(1.0, 0.0));
        let s = slab_coefficients(n1, n2, n2, 10e-6, &ctx).unwrap();
        let f = fresnel(n1, n2);
        assert_eq!(s.r2, c(0.0, 0.0));
        assert_eq!(s.nu, c(1.0, 0.0));
        assert!((s.big_r1 - f.r).norm() < 1e-12);
        assert!((s.big_t1 - f.t).norm() < 1e-12);
    }

    #[test]
    fn slab_thin_limit_collapses_to_outer_interface() {
        let ctx = ctx_ev(0.118);
        let (n1, n2, n3) = (c(1.5, 0.3), c(1.0, 0.0), c(2.5, 0.5));
        let d = 1e-12;
        // residual phase is 2 k2 d ~ 1e-6
        let bound = 4.0 * ctx.vacuum_wavenumber() * d;
        let s = slab_coefficients(n1, n2, n3, d, &ctx).unwrap();
        let direct = (n1 - n3) / (n1 + n3);
        assert!((s.big_r1 - direct).norm() < bound);
        let s = slab_coefficients(n3, n2, n1, d, &ctx).unwrap();
        assert!((s.big_r2p - direct).norm() < bound);
        let s = slab_coefficients(n1, n2, n3, d / 1000.0, &ctx).unwrap();
        assert!((s.big_r1 - direct).norm() < 1e-9);
    }

    #[test]
    fn slab_rejects_nonpositive_width_and_poles() {
        let ctx = ctx_ev(0.1);
        assert!(slab_coefficients(c(1.0, 0.0), c(2.0, 0.0), c(1.0, 0.0), 0.0, &ctx).is_err());
        // r1 = r2 = -1 (perfect mirrors made of a vanishing-index cavity) at the
        // half-wave condition gives 1 + r1 r2 e^{2ik2d} = 0.
        let mirror = |_: Complex64, _: Complex64| Fresnel { r: c(0.0, 1.0), t: c(1.0, 1.0) };
        let lambda = ctx.vacuum_wavelength();
        let err = slab_coefficients_with(c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), lambda, &ctx, mirror)
            .unwrap_err();
        assert!(matches!(err, Error::SingularGeometry(_)));
    }

    #[test]
    fn geometry_validation_reports_every_problem() {
        let err = Geometry::from_layers(
            GeometryKind::Slab,
            vec![
                Layer { n: c(1.0, -0.1), temperature: -3.0, x_min: f64::NEG_INFINITY, x_max: 0.0 },
                Layer { n: c(1.0, 0.0), temperature: 0.0, x_min: 1.0, x_max: f64::INFINITY },
            ],
        )
        .unwrap_err()
        .to_string();
        assert!(err.contains("needs 3 layers"));
        assert!(err.contains("gain"));
        assert!(err.contains("temperature"));
        assert!(err.contains("contiguous"));
    }

    #[test]
    fn interface_points_belong_to_the_right_layer() {
        let g = Geometry::slab((c(1.5, 0.3), 400.0), (c(1.0, 0.0), 0.0), (c(2.5, 0.5), 300.0), 1e-5)
            .unwrap();
        assert_eq!(g.region_of(-1e-9), 0);
        assert_eq!(g.region_of(0.0), 1);
        assert_eq!(g.region_of(1e-5), 2);
        assert_eq!(g.interfaces(), vec![0.0, 1e-5]);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn transmission_is_one_plus_reflection(
                a in 0.1f64..5.0, b in 0.0f64..2.0, p in 0.1f64..5.0, q in 0.0f64..2.0
            ) {
                let f = fresnel(c(a, b), c(p, q));
                prop_assert!((f.t - (1.0 + f.r)).norm() < 1e-12);
            }

            #[test]
            fn occupation_round_trip(t in 1e-3f64..2000.0, e in 0.01f64..0.5) {
                let ctx = ctx_ev(e);
                let n = bose_einstein(t, &ctx).unwrap();
                if n > 1e-300 {
                    let back = effective_temperature(n, &ctx);
                    prop_assert!((back - t).abs() <= 1e-9 * t);
                }
            }

            #[test]
            fn occupation_monotone(t in 1.0f64..2000.0, e in 0.01f64..0.5, dt in 0.1f64..50.0) {
                let ctx = ctx_ev(e);
                let lo = bose_einstein(t, &ctx).unwrap();
                let hi = bose_einstein(t + dt, &ctx).unwrap();
                prop_assert!(hi > lo || lo == 0.0);
                let blue = bose_einstein(t, &ctx_ev(e * 1.05)).unwrap();
                prop_assert!(blue < lo || lo == 0.0);
            }

            #[test]
            fn slab_with_matched_back_medium_is_single_interface(
                a in 0.5f64..4.0, b in 0.0f64..1.0, p in 0.5f64..4.0, q in 0.0f64..1.0,
                d_um in 0.1f64..30.0
            ) {
                let ctx = ctx_ev(0.1);
                let s = slab_coefficients(c(a, b), c(p, q), c(p, q), d_um * 1e-6, &ctx).unwrap();
                let f = fresnel(c(a, b), c(p, q));
                prop_assert!((s.big_r1 - f.r).norm() < 1e-12);
                prop_assert!((s.big_t1 - f.t).norm() < 1e-12);
            }
        }
    }
}
