use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not unimodular: det = {det}")]
    NotUnimodular { det: f64 },

    #[error("boundary magnitude {boundary:.3e} exceeds {fraction:.1e} of the accumulated integral {total:.3e}")]
    BoundaryMass {
        boundary: f64,
        total: f64,
        fraction: f64,
    },

    #[error("representation {rep} does not contain the K-type n = {n}")]
    SpectrumMismatch { n: i64, rep: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("series failed to converge after {terms} terms")]
    Convergence { terms: usize },

    #[error("singular parameter: {0}")]
    Singularity(String),

    #[error("weights ({n1}, {n2}) are not in the weight set of {rep}")]
    Weight { n1: i64, n2: i64, rep: String },

    #[error("route error: {0}")]
    Route(String),

    #[error("no K-type cutoff up to {max_cutoff} reaches tolerance {tol:.1e} at t = {t}")]
    Tail { t: f64, tol: f64, max_cutoff: i64 },
}

pub type Result<T> = std::result::Result<T, Error>;
