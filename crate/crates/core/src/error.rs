use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    #[error("invalid evaluation context: {0}")]
    InvalidContext(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("singular geometry: {0}")]
    SingularGeometry(String),
    #[error("divergent integral: {0}")]
    Divergent(String),
    #[error("misuse: {0}")]
    Misuse(String),
    #[error("degenerate local density of states at x = {x:e} m (Im G = {im_g:e})")]
    DegenerateLdos { x: f64, im_g: f64 },
    #[error("quadrature did not converge after {subdivisions} subdivisions; worst interval [{a:e}, {b:e}] with error estimate {error:e}")]
    NoConvergence { subdivisions: usize, a: f64, b: f64, error: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
