use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum VortexError {
    #[error("system must contain at least one vortex")]
    EmptySystem,

    #[error("vortex strength at index {index} must be nonzero and finite")]
    ZeroStrength { index: usize },

    #[error("state has {actual} positions but the system defines {expected} vortices")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("position of vortex {index} is not finite")]
    NonFinitePosition { index: usize },

    #[error("vortices {i} and {j} coincide")]
    CoincidentVortices { i: usize, j: usize },

    #[error("vortex {index} lies outside the upper half-plane (y = {y})")]
    OutsideHalfPlane { index: usize, y: f64 },

    #[error("finite-difference step {step} too large for minimal separation {min_separation}")]
    OracleStepTooLarge { step: f64, min_separation: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("bracket [{a}, {b}] does not straddle a sign change")]
    NoSignChange { a: f64, b: f64 },

    #[error("integration failed: {0}")]
    IntegrationFailure(String),

    #[error("classification unresolved: {0}")]
    Unresolved(String),

    #[error("diagnostic failure: {0}")]
    Diagnostic(String),

    #[error("search failed: {0} (best residual {1})")]
    SearchFailure(String, f64),

    #[error("i/o error for {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("config error: {0}")]
    Config(String),
}

impl VortexError {
    pub fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        VortexError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}
