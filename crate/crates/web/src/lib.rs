//! Browser bindings: profiles, spectra and commutator kernels for a
//! three-medium scene `left | vacuum gap | right`.

use layered_qed::greens::GreenFunction;
use layered_qed::optics::{EvaluationContext, Geometry};
use layered_qed::quantities::{commutator_kernel, spectral_point, DomainPair, SpectralPoint};
use layered_qed::scenes::linspace;
use num_complex::Complex64;
use wasm_bindgen::prelude::*;

/// Quantity names accepted by `profile` and `spectrum`.
pub const QUANTITIES: [&str; 8] =
    ["photon_number", "temperature", "efield_fluct", "hfield_fluct", "ldos", "energy_density", "poynting", "net_emission"];

fn pick(p: &SpectralPoint, quantity: &str) -> Result<f64, String> {
    Ok(match quantity {
        "photon_number" => p.n_eff,
        "temperature" => p.t_eff,
        "efield_fluct" => p.e2,
        "hfield_fluct" => p.h2,
        "ldos" => p.ldos,
        "energy_density" => p.u,
        "poynting" => p.poynting,
        "net_emission" => p.net_emission,
        other => return Err(format!("unknown quantity `{other}`")),
    })
}

#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct Scene {
    geometry: Geometry,
}

impl Scene {
    pub fn try_new(
        left: (f64, f64, f64),
        right: (f64, f64, f64),
        gap_um: f64,
    ) -> Result<Scene, String> {
        let l = (Complex64::new(left.0, left.1), left.2);
        let r = (Complex64::new(right.0, right.1), right.2);
        let geometry = if gap_um > 0.0 {
            Geometry::slab(l, (Complex64::new(1.0, 0.0), 0.0), r, gap_um * 1e-6)
        } else {
            Geometry::single_interface(l, r)
        }
        .map_err(|e| e.to_string())?;
        Ok(Scene { geometry })
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    fn green(&self, energy_ev: f64) -> Result<GreenFunction, String> {
        let ctx = EvaluationContext::from_photon_energy(energy_ev).map_err(|e| e.to_string())?;
        GreenFunction::build(&self.geometry, &ctx).map_err(|e| e.to_string())
    }

    pub fn try_profile(&self, quantity: &str, energy_ev: f64, min_um: f64, max_um: f64, points: usize) -> Result<Vec<f64>, String> {
        let gf = self.green(energy_ev)?;
        linspace(min_um, max_um, points)
            .into_iter()
            .map(|x| pick(&spectral_point(&gf, x * 1e-6).map_err(|e| e.to_string())?, quantity))
            .collect()
    }

    pub fn try_spectrum(&self, quantity: &str, x_um: f64, min_ev: f64, max_ev: f64, points: usize) -> Result<Vec<f64>, String> {
        linspace(min_ev, max_ev, points)
            .into_iter()
            .map(|e| pick(&spectral_point(&self.green(e)?, x_um * 1e-6).map_err(|e| e.to_string())?, quantity))
            .collect()
    }

    /// `|K_RR|, |K_LL|, |K_RL|` for every observation point, interleaved.
    pub fn try_commutators(&self, energy_ev: f64, xp_um: f64, min_um: f64, max_um: f64, points: usize) -> Result<Vec<f64>, String> {
        let gf = self.green(energy_ev)?;
        let mut out = Vec::with_capacity(3 * points);
        for x in linspace(min_um, max_um, points) {
            for d in [DomainPair::RR, DomainPair::LL, DomainPair::RL] {
                let k = commutator_kernel(&gf, x * 1e-6, xp_um * 1e-6, d).map_err(|e| e.to_string())?;
                out.push(k.value.norm());
            }
        }
        Ok(out)
    }
}

#[wasm_bindgen]
impl Scene {
    /// Left and right media as `(n_re, n_im, temperature_k)`; a positive
    /// `gap_um` puts a vacuum layer of that width between them.
    #[wasm_bindgen(constructor)]
    pub fn new(
        left_n_re: f64,
        left_n_im: f64,
        left_t: f64,
        right_n_re: f64,
        right_n_im: f64,
        right_t: f64,
        gap_um: f64,
    ) -> Result<Scene, JsError> {
        Scene::try_new((left_n_re, left_n_im, left_t), (right_n_re, right_n_im, right_t), gap_um)
            .map_err(|e| JsError::new(&e))
    }

    /// Quantity against position at one photon energy.
    pub fn profile(&self, quantity: &str, energy_ev: f64, min_um: f64, max_um: f64, points: usize) -> Result<Vec<f64>, JsError> {
        self.try_profile(quantity, energy_ev, min_um, max_um, points).map_err(|e| JsError::new(&e))
    }

    /// Quantity against photon energy at one position.
    pub fn spectrum(&self, quantity: &str, x_um: f64, min_ev: f64, max_ev: f64, points: usize) -> Result<Vec<f64>, JsError> {
        self.try_spectrum(quantity, x_um, min_ev, max_ev, points).map_err(|e| JsError::new(&e))
    }

    pub fn commutators(&self, energy_ev: f64, xp_um: f64, min_um: f64, max_um: f64, points: usize) -> Result<Vec<f64>, JsError> {
        self.try_commutators(energy_ev, xp_um, min_um, max_um, points).map_err(|e| JsError::new(&e))
    }

    /// Interface positions in um.
    pub fn interfaces(&self) -> Vec<f64> {
        self.geometry.interfaces().iter().map(|x| x * 1e6).collect()
    }
}
