//! Simulator error types.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimError {
    /// Invalid argument to a mathematical primitive.
    #[error("domain error: {0}")]
    Domain(String),

    /// Invalid physical or scenario configuration.
    #[error("configuration error: {0}")]
    Config(String),

    /// A state or force component became non-finite or exceeded the blowup
    /// threshold. `step` is the fast substep index when known.
    #[error("numeric blowup at step {step:?}: {detail}")]
    NumericBlowup { step: Option<usize>, detail: String },

    /// The settling pre-run did not converge within the allotted time.
    #[error("settling failed after {simulated_time} s: max particle speed {max_speed} m/s")]
    SettlingFailed { simulated_time: f64, max_speed: f64 },

    /// Finite-difference step produced no usable perturbation.
    #[error("finite-difference tolerance error: {0}")]
    FdTolerance(String),

    /// Dense eigensolver failed to converge.
    #[error("eigensolver did not converge for a {size}x{size} matrix")]
    EigenNonConvergence { size: usize },
}
