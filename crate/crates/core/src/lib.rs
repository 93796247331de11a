//! Quantized one-dimensional electromagnetic field in layered lossy
//! dielectrics: position-dependent photon number, field fluctuations,
//! electric LDOS, energy density, Poynting vector and net emission rate,
//! all evaluated from closed-form Green's functions.
//!
//! ```
//! use layered_qed::{optics::Geometry, EvaluationContext, GreenFunction, quantities};
//! use num_complex::Complex64;
//!
//! let scene = Geometry::single_interface(
//!     (Complex64::new(2.5, 0.5), 300.0),
//!     (Complex64::new(1.0, 0.0), 0.0),
//! ).unwrap();
//! let ctx = EvaluationContext::from_photon_energy(0.10).unwrap();
//! let gf = GreenFunction::build(&scene, &ctx).unwrap();
//! let point = quantities::spectral_point(&gf, 5e-6).unwrap();
//! assert!(point.poynting > 0.0);
//! ```

pub mod error;
pub mod greens;
pub mod optics;
pub mod quantities;
pub mod scenes;
pub mod segint;

pub use error::{Error, Result};
pub use greens::GreenFunction;
pub use optics::{EvaluationContext, Geometry, Layer};
pub use quantities::SpectralPoint;
