//! The two reference scenes and a few helpers shared by the CLI, the
//! browser demo and the test suites.

use num_complex::Complex64;

use crate::error::Result;
use crate::optics::Geometry;

/// Lossy half-space `n = 2.5 + 0.5i` at 300 K (x < 0) facing vacuum at 0 K.
pub fn interface_scene() -> Geometry {
    Geometry::single_interface((Complex64::new(2.5, 0.5), 300.0), (Complex64::new(1.0, 0.0), 0.0))
        .expect("valid scene")
}

/// 10 µm vacuum gap between `n = 1.5 + 0.3i` at 400 K and `n = 2.5 + 0.5i` at 300 K.
pub fn gap_scene() -> Geometry {
    gap(Complex64::new(1.5, 0.3), 400.0, Complex64::new(2.5, 0.5), 300.0, 10e-6)
        .expect("valid scene")
}

/// Vacuum gap of width `d` between two lossy half-spaces.
pub fn gap(left: Complex64, t_left: f64, right: Complex64, t_right: f64, d: f64) -> Result<Geometry> {
    Geometry::slab((left, t_left), (Complex64::new(1.0, 0.0), 0.0), (right, t_right), d)
}

pub const INTERFACE_ENERGIES_EV: [f64; 2] = [0.10, 0.14];
pub const GAP_ENERGIES_EV: [f64; 2] = [0.118, 0.140];
/// Plot window in µm.
pub const INTERFACE_X_RANGE_UM: (f64, f64) = (-30.0, 30.0);
pub const GAP_X_RANGE_UM: (f64, f64) = (-20.0, 30.0);

/// `n` evenly spaced points on `[lo, hi]`.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}
